#include <cmath>
#include <vector>

#include "doctest.h"
#include "subinfo/rng.hpp"

using namespace subinfo;

namespace {

struct Moments {
    std::vector<double> mean;
    std::vector<double> var;
};

Moments dirichlet_moments(const std::vector<double>& alpha, int n, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t d = alpha.size();
    Moments m{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (int k = 0; k < n; ++k) {
        const auto x = sample_dirichlet(alpha, rng);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            REQUIRE(x[i] > 0.0);
            sum += x[i];
            m.mean[i] += x[i];
            m.var[i] += x[i] * x[i];
        }
        REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < d; ++i) {
        m.mean[i] /= n;
        m.var[i] = m.var[i] / n - m.mean[i] * m.mean[i];
    }
    return m;
}

}  // namespace

TEST_CASE("streams are reproducible and forks are independent") {
    Rng a(77), b(77), c(78);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs |= x != c.next_u64();
    }
    CHECK(differs);

    const Rng master(5);
    Rng f1 = master.fork(1), f1b = master.fork(1), f2 = master.fork(2);
    CHECK(f1.next_u64() == f1b.next_u64());
    CHECK(f1.next_u64() != f2.next_u64());
    CHECK(master.counter() == 0);
}

TEST_CASE("uniform draws stay in the open interval") {
    Rng rng(3);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    for (int i = 0; i < 1000; ++i) {
        const auto k = rng.uniform_index(7);
        REQUIRE(k < 7);
        const double x = rng.uniform(0.1, 10.0);
        REQUIRE(x > 0.1);
        REQUIRE(x < 10.0);
    }
}

TEST_CASE("categorical frequencies follow the weights") {
    Rng rng(11);
    const std::vector<double> w = {1.0, 0.0, 3.0};
    std::vector<int> hits(3, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++hits[rng.categorical(w)];
    CHECK(hits[1] == 0);
    const double p = 0.25;
    CHECK(std::abs(hits[0] / double(n) - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("gamma variates match shape moments") {
    for (double shape : {0.2, 1.0, 4.5}) {
        Rng rng(static_cast<std::uint64_t>(shape * 100));
        const int n = 100000;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += rng.gamma(shape);
        CHECK(std::abs(s / n - shape) < 3.0 * std::sqrt(shape / n));
    }
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) REQUIRE(std::isfinite(rng.log_gamma_variate(1e-3)));
}

TEST_CASE("Dirichlet sample moments") {
    const int n = 100000;
    SUBCASE("symmetric (2, 2)") {
        const auto m = dirichlet_moments({2.0, 2.0}, n, 1);
        CHECK(std::abs(m.mean[0] - 0.5) < 0.01);
        CHECK(std::abs(m.mean[1] - 0.5) < 0.01);
    }
    SUBCASE("skewed (8, 2)") {
        const auto m = dirichlet_moments({8.0, 2.0}, n, 2);
        CHECK(std::abs(m.mean[0] - 0.8) < 0.01);
        CHECK(std::abs(m.mean[1] - 0.2) < 0.01);
    }
    SUBCASE("within three standard errors, including shapes below one") {
        for (const auto& alpha : std::vector<std::vector<double>>{
                 {0.3, 0.5, 0.2}, {5.0, 3.0, 1.0}, {60.0, 4.0}, {0.05, 0.05}}) {
            const auto m = dirichlet_moments(alpha, n, 3);
            double kappa = 0.0;
            for (double a : alpha) kappa += a;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                const double mu = alpha[i] / kappa;
                const double var = mu * (1 - mu) / (kappa + 1);
                CHECK(std::abs(m.mean[i] - mu) < 3.0 * std::sqrt(var / n));
                CHECK(m.var[i] == doctest::Approx(var).epsilon(0.05));
            }
        }
    }
}
