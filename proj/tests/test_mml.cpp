#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/mml.hpp"
#include "subinfo/special_functions.hpp"

using namespace subinfo;
using namespace subinfo::mml;

namespace {

DirichletParams dir(std::vector<double> a) { return DirichletParams(a); }

}  // namespace

TEST_CASE("lattice constants") {
    CHECK(lattice_constant(1) == doctest::Approx(1.0 / 12.0));
    CHECK(std::abs(lattice_constant(2) - 0.0801875) < 1e-6);
    CHECK(std::abs(lattice_constant(3) - 0.0785433) < 1e-6);
    CHECK(lattice_constant(20) < 1.0 / 12.0);
    CHECK(lattice_constant(20) > 1.0 / (2.0 * std::numbers::pi * std::numbers::e));
    CHECK_THROWS_AS(lattice_constant(0), DomainError);
}

TEST_CASE("multinomial estimate") {
    auto e = mml_multinomial_estimate(std::vector<double>{3, 1}, dir({1, 1}));
    CHECK(e[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(e[1] == doctest::Approx(0.3).epsilon(1e-15));
    e = mml_multinomial_estimate(std::vector<double>{0, 0, 0}, dir({1, 1, 1}));
    for (double x : e) CHECK(x == doctest::Approx(1.0 / 3));
    e = mml_multinomial_estimate(std::vector<double>{10, 10}, dir({2, 2}));
    CHECK(e[0] == 0.5);

    SUBCASE("closed form on random counts") {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> c(0, 500);
        std::uniform_real_distribution<double> a(0.6, 30.0);
        for (int n = 0; n < 50; ++n) {
            const std::size_t d = 2 + static_cast<std::size_t>(n % 2);
            std::vector<double> counts(d), alpha(d);
            for (auto& x : counts) x = c(rng);
            for (auto& x : alpha) x = a(rng);
            double denom = -0.5 * static_cast<double>(d);
            for (std::size_t i = 0; i < d; ++i) denom += counts[i] + alpha[i];
            const auto theta = mml_multinomial_estimate(counts, DirichletParams(alpha));
            const DirichletParams p(alpha);
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                CHECK(theta[i] == (counts[i] + p.alpha(i) - 0.5) / denom);
                s += theta[i];
            }
            CHECK(std::abs(s - 1.0) < 1e-12);
        }
    }
    SUBCASE("clamped near the boundary") {
        const auto t = mml_multinomial_estimate(std::vector<double>{0, 100}, dir({0.2, 1}));
        CHECK(t[0] >= kProbabilityFloor * 0.99);
        CHECK(t[0] + t[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(mml_multinomial_estimate(std::vector<double>{0, 0}, dir({0.1, 0.1})),
                    DomainError);
}

TEST_CASE("Dirichlet log density") {
    CHECK(dirichlet_log_density(std::vector<double>{0.3, 0.7}, dir({1, 1})) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dirichlet_log_density(std::vector<double>{0.2, 0.5, 0.3}, dir({1, 1, 1})) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dirichlet_log_density(std::vector<double>{0.5, 0.5}, dir({2, 2})) ==
          doctest::Approx(std::log2(1.5)).epsilon(1e-14));
    CHECK_THROWS_AS(dirichlet_log_density(std::vector<double>{0.0, 1.0}, dir({0.5, 2})),
                    DomainError);
}

TEST_CASE("Dirichlet Fisher determinant") {
    const double t1 = std::numbers::pi * std::numbers::pi / 6.0;
    const double closed = t1 * t1 * (1.0 - trigamma(2.0) * 2.0 / t1);
    CHECK(dirichlet_fisher_det(dir({1, 1}), 1) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(std::abs(static_cast<double>(oracle::fd_fisher_det({1, 1}, 1)) - closed) < 1e-6);

    const auto a = dir({2.5, 0.7, 4.0});
    CHECK(dirichlet_fisher_det(a, 2) / dirichlet_fisher_det(a, 1) == doctest::Approx(8.0));
    CHECK(dirichlet_fisher_det(dir({5, 5, 5}), 1) > 0.0);

    SUBCASE("finite-difference Hessian oracle") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.5, 20.0);
        for (int n = 0; n < 20; ++n) {
            std::vector<double> alpha(2 + static_cast<std::size_t>(n % 2));
            for (auto& x : alpha) x = u(rng);
            const double fd = static_cast<double>(oracle::fd_fisher_det(alpha, 3.0));
            const double got = dirichlet_fisher_det(DirichletParams(alpha), 3.0);
            CHECK(std::abs(got - fd) / fd < 1e-4);
        }
    }
    CHECK_THROWS_AS(dirichlet_fisher_det(dir({1, 1}), 0.5), DomainError);
}

TEST_CASE("multinomial Fisher determinant") {
    CHECK(multinomial_fisher_det(std::vector<double>{0.5, 0.5}, 10) == doctest::Approx(40));
    CHECK(multinomial_fisher_det(std::vector<double>{1. / 3, 1. / 3, 1. / 3}, 1) ==
          doctest::Approx(27));
    CHECK(multinomial_fisher_det(std::vector<double>{0.7, 0.3}, 5) ==
          doctest::Approx(23.8095).epsilon(1e-5));
    CHECK_THROWS_AS(multinomial_fisher_det(std::vector<double>{0.0, 1.0}, 5), DomainError);
}

TEST_CASE("hyperparameter statement length") {
    const auto a = dir({1, 1});
    // Reference assembled independently of log2_alpha_prior.
    const double h = (1.0 / std::sqrt(2.0)) * (1.0 * 2.0) / std::pow(1.0 + 4.0, 1.5);
    const double c2 = 5.0 / (36.0 * std::sqrt(3.0));
    const double ref = 0.5 * std::log2(1.0 + dirichlet_fisher_det(a, 1) * c2 * c2 / (h * h)) + 1.0;
    CHECK(msglen_alpha(a, 1, StateKind::Match).bits() == doctest::Approx(ref).epsilon(1e-12));

    const auto b = dir({3.0, 1.5, 0.8});
    const double k = b.kappa();
    const double hb = (2.0 / std::sqrt(3.0)) * (4.0 / std::numbers::pi) * k * k /
                      std::pow(1.0 + k * k, 2.0);
    const double c3 = 19.0 / (192.0 * std::cbrt(2.0));
    const double refb =
        0.5 * std::log2(1.0 + dirichlet_fisher_det(b, 7) * c3 * c3 * c3 / (hb * hb)) + 1.5;
    CHECK(msglen_alpha(b, 7, StateKind::Insert).bits() == doctest::Approx(refb).epsilon(1e-12));

    for (double n : {1.0, 3.0, 40.0, 1000.0}) {
        const double grow = msglen_alpha(b, 2 * n, StateKind::Insert).bits() -
                            msglen_alpha(b, n, StateKind::Insert).bits();
        CHECK(grow >= 0.0);
        CHECK(grow <= 1.5 + 1e-9);
    }
    CHECK_THROWS_AS(msglen_alpha(a, 1, StateKind::Insert), DomainError);
}

TEST_CASE("kappa prior integrates to one") {
    // Trapezoid over y = tan(u) for the d = 2 and d = 3 concentration priors.
    for (std::size_t d : {2u, 3u}) {
        long double total = 0.0L;
        const int steps = 200000;
        for (int s = 1; s < steps; ++s) {
            const double u = (std::numbers::pi / 2) * s / steps;
            const double y = std::tan(u);
            std::vector<double> mean(d, 1.0 / static_cast<double>(d));
            const auto p = DirichletParams::from_kappa_mean(y, mean);
            const double h_mean = d == 2 ? 1.0 / std::sqrt(2.0) : 2.0 / std::sqrt(3.0);
            const double g = std::exp2(log2_alpha_prior(p)) / h_mean;
            total += g / (std::cos(u) * std::cos(u)) * (std::numbers::pi / 2) / steps;
        }
        CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("parameter statement given the Dirichlet") {
    const double c1 = 1.0 / 12.0, c2 = 5.0 / (36.0 * std::sqrt(3.0));
    CHECK(msglen_theta_given_alpha(std::vector<double>{0.5, 0.5}, dir({1, 1}), 10).bits() ==
          doctest::Approx(0.5 * std::log2(1.0 + 40.0 * c1) + 0.5).epsilon(1e-13));
    const std::vector<double> u3{1. / 3, 1. / 3, 1. / 3};
    // Fisher term 27 (one observation); density 2.
    CHECK(msglen_theta_given_alpha(u3, dir({1, 1, 1}), 1).bits() ==
          doctest::Approx(0.5 * std::log2(1.0 + 27.0 * c2 * c2 / 4.0) + 1.0).epsilon(1e-13));
    // Twenty-seven observations: Fisher term 27^2 * 27.
    CHECK(msglen_theta_given_alpha(u3, dir({1, 1, 1}), 27).bits() ==
          doctest::Approx(0.5 * std::log2(1.0 + 27.0 * 27.0 * 27.0 * c2 * c2 / 4.0) + 1.0)
              .epsilon(1e-13));
    CHECK(msglen_theta_given_alpha(u3, dir({1, 1, 1}), 0).bits() == 1.0);
    // Density dominating the Fisher term.
    CHECK(msglen_theta_given_alpha(std::vector<double>{0.5, 0.5}, dir({1e6, 1e6}), 1).bits() ==
          doctest::Approx(0.5).epsilon(1e-6));
    double last = 0.0;
    for (double n : {1.0, 10.0, 100.0, 1e4}) {
        const double v = msglen_theta_given_alpha(std::vector<double>{0.2, 0.8}, dir({2, 5}), n).bits();
        CHECK(v >= last);
        last = v;
    }
}

TEST_CASE("simplex vector under a uniform prior") {
    CHECK(msglen_simplex_vector_uniform_prior(std::vector<double>{0.5, 0.5}, 4).bits() ==
          doctest::Approx(2.0 + 0.5 * std::log2(1.0 / 12.0) + 0.5).epsilon(1e-13));
    CHECK(msglen_simplex_vector_uniform_prior(std::vector<double>{0.5, 0.5}, 4).bits() ==
          doctest::Approx(0.7075).epsilon(1e-4));

    std::vector<double> u20(20, 0.05);
    const double log2_fisher = 19.0 * std::log2(20.0) + 20.0 * std::log2(20.0);
    const double ref = -std::lgamma(20.0) / std::numbers::ln2 + 0.5 * log2_fisher +
                       9.5 * std::log2(lattice_constant(19)) + 9.5;
    CHECK(msglen_simplex_vector_uniform_prior(u20, 20).bits() ==
          doctest::Approx(std::max(ref, 0.0)).epsilon(1e-12));

    std::vector<double> t{0.1, 0.2, 0.3, 0.4};
    const double a = msglen_simplex_vector_uniform_prior(t, 5000).bits();
    const double b = msglen_simplex_vector_uniform_prior(t, 5000 * 8).bits();
    CHECK(b - a == doctest::Approx(1.5 * 3.0).epsilon(1e-12));
    CHECK(msglen_simplex_vector_uniform_prior(u20, 0).bits() >= 0.0);
}

TEST_CASE("message lengths reject invalid values") {
    CHECK_THROWS_AS(MessageLength(-1.0), NumericError);
    CHECK_THROWS_AS(MessageLength(std::nan("")), NumericError);
    CHECK((MessageLength(1.5) + MessageLength(2.0)).bits() == 3.5);
}
