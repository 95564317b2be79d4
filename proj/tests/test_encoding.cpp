#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "subinfo/benchmark_io.hpp"
#include "subinfo/encoding.hpp"
#include "subinfo/errors.hpp"

using namespace subinfo;
using namespace subinfo::encoding;

namespace {

AlignmentRecord rec(const char* id, const char* s, const char* t, const char* a) {
    return AlignmentRecord{id, parse_sequence(s), parse_sequence(t), parse_states(a)};
}

// Column-by-column cost of the residues with M^t from naive powering and
// pi from long powering.
struct ResidueBits {
    double match = 0, insert = 0, remove = 0;
};

ResidueBits residue_oracle(const AlignmentRecord& r, const Matrix20& m, int t, const Vector20& p) {
    const Matrix20 mt = oracle::naive_power(m, t);
    const Vector20 pi = oracle::long_power_stationary(m);
    ResidueBits b;
    std::size_t k = 0, l = 0;
    for (State s : r.states) {
        if (s == State::Match) {
            const auto j = r.source[k++].index, i = r.target[l++].index;
            b.match -= std::log2(pi[j] * mt[cell(i, j)]);
        } else if (s == State::Insert) {
            b.insert -= std::log2(p[r.target[l++].index]);
        } else {
            b.remove -= std::log2(p[r.source[k++].index]);
        }
    }
    return b;
}

// Symmetric machine written out by hand; start state from long powering.
double state_oracle(const std::vector<State>& a, double mm, double ii, double im) {
    const double g = 1.0 - ii - im;
    const double t[3][3] = {{mm, (1 - mm) / 2, (1 - mm) / 2}, {im, ii, g}, {im, g, ii}};
    std::array<double, 3> v{1.0 / 3, 1.0 / 3, 1.0 / 3};
    for (int s = 0; s < 5000; ++s) {
        std::array<double, 3> n{};
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) n[y] += v[x] * t[x][y];
        v = n;
    }
    double bits = -std::log2(v[static_cast<int>(a[0])]);
    for (std::size_t k = 1; k < a.size(); ++k)
        bits -= std::log2(t[static_cast<int>(a[k - 1])][static_cast<int>(a[k])]);
    return bits;
}

ModelBundle make_bundle(const StochasticMatrix& m, std::size_t n, int t) {
    return ModelBundle{m, IndelModel(m.stationary()), default_dirichlets(),
                       std::vector<TransitionParams>(n, TransitionParams(0.9, 0.5, 0.4)),
                       std::vector<int>(n, t), 0.0};
}

}  // namespace

TEST_CASE("record counts") {
    const auto c = count_record(rec("x", "ARND", "AQND", "mmidm"));
    CHECK(c.length == 5);
    CHECK(c.first == State::Match);
    const auto A = AminoAcid::from_letter('A').index, R = AminoAcid::from_letter('R').index,
               Q = AminoAcid::from_letter('Q').index, N = AminoAcid::from_letter('N').index,
               D = AminoAcid::from_letter('D').index;
    CHECK(c.pairs[cell(A, A)] == 1.0);
    CHECK(c.pairs[cell(Q, R)] == 1.0);
    CHECK(c.pairs[cell(D, D)] == 1.0);
    CHECK(c.inserted[N] == 1.0);
    CHECK(c.deleted[N] == 1.0);
    double pairs = 0.0;
    for (double x : c.pairs) pairs += x;
    CHECK(pairs == 3.0);
    // m->m, m->i, i->d, d->m
    const auto mc = match_transition_counts(c);
    const auto ic = insert_transition_counts(c);
    CHECK(mc[0] == 1.0);
    CHECK(mc[1] == 1.0);
    CHECK(ic[0] == 0.0);
    CHECK(ic[1] == 1.0);
    CHECK(ic[2] == 1.0);
    CHECK_THROWS_AS(count_record(rec("bad", "ARND", "AQND", "mmidmm")), DomainError);
}

TEST_CASE("power table against naive powering") {
    std::mt19937_64 rng(4);
    const StochasticMatrix m(oracle::calibrated_base(rng));
    const PowerTable full(m);
    const std::vector<int> some = {7, 300, 3, 7};
    const PowerTable part(m, some);
    CHECK(part.has(300));
    CHECK_FALSE(part.has(4));
    CHECK_THROWS_AS(part.log_costs(4), DomainError);
    const Vector20 pi = oracle::long_power_stationary(m.entries());
    for (int t : {3, 7, 300}) {
        CHECK(full.log_costs(t) == part.log_costs(t));  // bit-identical
        const Matrix20 mt = oracle::naive_power(m.entries(), t);
        double worst = 0.0;
        for (std::size_t j = 0; j < kAlphabetSize; ++j)
            for (std::size_t i = 0; i < kAlphabetSize; ++i)
                worst = std::max(worst, std::abs(full.log_costs(t)[cell(i, j)] +
                                                 std::log2(pi[j] * mt[cell(i, j)])));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("state cost matches the hand-built machine") {
    std::mt19937_64 rng(8);
    const std::vector<std::string> strings = {"m", "mmmmiiddm", "iiiii", "dmidmdim", "mmmmmmmmmd"};
    for (const auto& s : strings) {
        const auto states = parse_states(s);
        const TransitionParams th(0.87, 0.35, 0.45);
        const double want = state_oracle(states, 0.87, 0.35, 0.45);
        CHECK(msglen_alignment_states(states, th).bits() == doctest::Approx(want).epsilon(1e-10));
        RecordCounts c;
        c.first = states[0];
        for (std::size_t k = 1; k < states.size(); ++k)
            c.transitions[static_cast<int>(states[k - 1])][static_cast<int>(states[k])] += 1;
        CHECK(state_cost(c, th) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("time costs a constant log2(1000)") {
    for (int t : {1, 17, 1000}) CHECK(std::abs(msglen_time(t).bits() - 9.96578) < 1e-5);
    CHECK_THROWS_AS(msglen_time(0), DomainError);
}

TEST_CASE("indel model estimate and statement cost") {
    Vector20 counts{};
    counts[0] = 10;
    counts[3] = 4;
    const auto p = fit_indel_model(counts);
    const double total = 14.0;
    // (n_i + 1 - 1/2) / (N + 20 - 10)
    CHECK(p[0] == doctest::Approx(10.5 / (total + 10.0)).epsilon(1e-12));
    CHECK(p[5] == doctest::Approx(0.5 / (total + 10.0)).epsilon(1e-12));
    const Vector20 none{};
    const auto u = fit_indel_model(none);
    for (double x : u.probs()) CHECK(x == doctest::Approx(0.05));
    CHECK(msglen_indel_model(u, none).bits() >= 0.0);
    CHECK(std::isfinite(msglen_indel_model(p, counts).bits()));
}

TEST_CASE("per-record terms against the column-walk oracle") {
    std::mt19937_64 rng(12);
    const StochasticMatrix m(oracle::calibrated_base(rng));
    const Vector20 pv = oracle::random_simplex(rng);
    const IndelModel p(pv);
    const Benchmark data = {rec("a", "ARNDCQEG", "ARNECQG", "mmmdmmimd"),
                            rec("b", "WYV", "WWYVK", "mimmi"), rec("c", "A", "", "d")};
    std::vector<int> times = {5, 40, 1};
    ModelBundle b = make_bundle(m, data.size(), 1);
    b.indel = p;
    b.times = times;
    const auto report = total_message_length(data, b);
    REQUIRE(report.records.size() == 3);
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto want = residue_oracle(data[r], m.entries(), times[r], pv);
        const auto& got = report.records[r];
        CHECK(got.i_match == doctest::Approx(want.match).epsilon(1e-9));
        CHECK(got.i_insert == doctest::Approx(want.insert).epsilon(1e-12));
        CHECK(got.i_delete == doctest::Approx(want.remove).epsilon(1e-12));
        CHECK(got.i_states ==
              doctest::Approx(state_oracle(data[r].states, 0.9, 0.5, 0.4)).epsilon(1e-10));
        const auto mt = StochasticMatrix(oracle::naive_power(m.entries(), times[r]));
        const double seq = msglen_sequences_given_alignment(data[r], mt, p).bits();
        CHECK(seq == doctest::Approx(want.match + want.insert + want.remove).epsilon(1e-8));
    }
    double sum = report.i_matrix + report.i_indel_model + report.i_alphas;
    for (const auto& rr : report.records) sum += rr.total();
    CHECK(report.total == doctest::Approx(sum).epsilon(1e-14));
    CHECK(report.populated_bins == 3);
}

TEST_CASE("total is invariant under record order and thread count") {
    std::mt19937_64 rng(13);
    const StochasticMatrix m(oracle::calibrated_base(rng));
    ModelBundle gen = make_bundle(m, 0, 1);
    bench::SynthConfig cfg;
    cfg.n_pairs = 60;
    cfg.time.lo = 1;
    cfg.time.hi = 200;
    cfg.length.mean = 50;
    const auto syn = bench::generate_synthetic(gen, cfg, Rng(2));
    ModelBundle b = gen;
    b.times = syn.times;
    b.thetas = syn.thetas;
    const double t1 = total_message_length(syn.data, b, 1).total;
    const double t4 = total_message_length(syn.data, b, 4).total;
    CHECK(t1 == t4);

    std::vector<std::size_t> order(syn.data.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Benchmark shuffled;
    ModelBundle bs = gen;
    for (auto k : order) {
        shuffled.push_back(syn.data[k]);
        bs.times.push_back(syn.times[k]);
        bs.thetas.push_back(syn.thetas[k]);
    }
    CHECK(total_message_length(shuffled, bs).total == doctest::Approx(t1).epsilon(1e-12));
}

TEST_CASE("empty benchmark encodes only the global models") {
    const auto b = make_bundle(StochasticMatrix::uniform(), 0, 1);
    const auto r = total_message_length({}, b);
    CHECK(r.records.empty());
    CHECK(r.i_alphas == 0.0);
    CHECK(r.populated_bins == 0);
    CHECK(r.total == doctest::Approx(r.i_matrix + r.i_indel_model));
    CHECK(report_csv(r) == "id,t,p_mm,p_ii,p_mi,i_time,i_theta,i_states,i_match,i_insert,i_delete,total\n");
}

TEST_CASE("incomplete bundles are rejected") {
    const Benchmark data = {rec("a", "A", "A", "m")};
    const auto b = make_bundle(StochasticMatrix::uniform(), 0, 1);
    CHECK_THROWS_AS(total_message_length(data, b), DomainError);
}

TEST_CASE("transition parameter statement") {
    RecordCounts c;
    c.first = State::Match;
    c.length = 1;
    const auto th = estimate_theta(c, default_dirichlets().at(1));
    // no transitions: each simplex costs its (d - 1) / 2 floor
    CHECK(theta_cost(c, th, default_dirichlets().at(1)) == doctest::Approx(1.5));
    // the estimate with no data is (alpha - 1/2) / (kappa - d/2)
    CHECK(th.match_to_match() == doctest::Approx(17.5 / 19.0).epsilon(1e-12));
    // the third insert component (0.5 - 1/2) is zero and gets floored
    CHECK(th.insert_to_match() == doctest::Approx(3.0 / 8.5).epsilon(1e-9));
    CHECK(th.insert_simplex()[2] == doctest::Approx(kProbabilityFloor).epsilon(1e-6));
}

TEST_CASE("reports round bits to 0.01") {
    EncodingReport r;
    r.i_matrix = 1.23456;
    RecordReport rr;
    rr.id = "a,b";
    rr.i_match = 2.005001;
    r.records.push_back(rr);
    r.total = 3.239561;
    const auto json = report_json(r);
    CHECK(json.find("\"total_bits\": 3.24") != std::string::npos);
    CHECK(json.find("\"i_matrix\": 1.23") != std::string::npos);
    const auto csv = report_csv(r);
    CHECK(csv.find("\"a,b\",1,0,0,0,0.00,0.00,0.00,2.01,0.00,0.00,2.01\n") != std::string::npos);
}
