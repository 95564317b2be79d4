// Regenerates tests/fixtures. Usage: make_fixtures DIR
#include <cmath>
#include <iostream>
#include <string>

#include "subinfo/benchmark_io.hpp"
#include "subinfo/encoding.hpp"
#include "subinfo/inference.hpp"
#include "subinfo/markov.hpp"
#include "subinfo/matrix_io.hpp"
#include "subinfo/rng.hpp"
#include "subinfo/text.hpp"

using namespace subinfo;

namespace {

// Random columns mixed with the identity so that one step changes 1%.
StochasticMatrix make_base(Rng& rng) {
    Matrix20 r{};
    const std::vector<double> ones(kAlphabetSize, 1.0);
    for (std::size_t j = 0; j < kAlphabetSize; ++j) {
        const auto col = sample_dirichlet(ones, rng);
        for (std::size_t i = 0; i < kAlphabetSize; ++i) r[cell(i, j)] = col[i];
    }
    const double s = markov::kTargetChange / markov::expected_change(StochasticMatrix(r));
    for (auto& x : r) x *= s;
    for (std::size_t i = 0; i < kAlphabetSize; ++i) r[cell(i, i)] += 1.0 - s;
    return StochasticMatrix(r);
}

io::MatrixFile scores_of(const StochasticMatrix& base, int t, double scale, bool round) {
    auto sc = markov::conditional_to_logodds(markov::matrix_power(base, t).entries(), scale, base.stationary());
    if (round)
        for (auto& x : sc.scores) x = std::round(x);
    auto f = io::from_scoring(sc);
    f.metadata = {{"t", std::to_string(t)}};
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures DIR\n";
        return 2;
    }
    const std::string dir = argv[1];
    Rng rng(20240501);
    const auto base = make_base(rng);
    io::write_matrix(dir + "/base.txt", io::from_stochastic(base));
    io::write_matrix(dir + "/logodds_t10.txt", scores_of(base, 10, 2.0, false));
    io::write_matrix(dir + "/logodds_t120_int.txt", scores_of(base, 120, 2.0, true));
    io::write_matrix(dir + "/logodds_t250_int.txt", scores_of(base, 250, 3.0, true));

    std::string freqs = "# order: " + std::string(kCanonicalOrder) + "\n";
    for (double x : base.stationary()) freqs += text::format_double(x) + '\n';
    text::write_file(dir + "/freqs.txt", freqs);

    const auto alphas = encoding::default_dirichlets();
    io::write_alphas(dir + "/alphas.txt", alphas);

    const ModelBundle b{base, IndelModel(base.stationary()), alphas, {}, {}, 0.0};
    bench::SynthConfig cfg;
    cfg.n_pairs = 60;
    cfg.length.mean = 120;
    cfg.time.choices = {5, 20, 60, 150};
    bench::write_benchmark(dir + "/bench_small.txt", bench::generate_synthetic(b, cfg, rng.fork(1)).data);

    inference::SearchConfig sc;
    sc.sa_temp_init = 10;
    sc.sa_temp_min = 0.01;
    sc.sa_steps_per_temp = 40;
    sc.sa_kappa_init = 1e4;
    sc.mcmc_iters_per_bin = 100;
    sc.em_max_iterations = 3;
    text::write_file(dir + "/quick.cfg", "# small schedule for tests\n" + inference::format_search_config(sc));
    return 0;
}
