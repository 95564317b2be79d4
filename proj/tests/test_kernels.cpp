#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/kernels.hpp"

using namespace subinfo;

TEST_CASE("scalar matmul matches the long-double oracle") {
    std::mt19937_64 rng(1);
    for (int n = 0; n < 50; ++n) {
        const auto a = oracle::random_stochastic(rng);
        const auto b = oracle::random_stochastic(rng);
        Matrix20 c;
        kernels::scalar::matmul20(a.data(), b.data(), c.data());
        CHECK(oracle::max_abs_diff(c, oracle::naive_matmul(a, b)) < 1e-15);
    }
}

TEST_CASE("scalar matvec and dot") {
    std::mt19937_64 rng(2);
    const auto a = oracle::random_stochastic(rng);
    const auto x = oracle::random_simplex(rng);
    Vector20 y;
    kernels::scalar::matvec20(a.data(), x.data(), y.data());
    for (std::size_t i = 0; i < kAlphabetSize; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < kAlphabetSize; ++j) s += a[cell(i, j)] * x[j];
        CHECK(y[i] == doctest::Approx(s).epsilon(1e-15));
    }
    std::vector<double> u{1, 2, 3, 4, 5, 6, 7}, v{7, 6, 5, 4, 3, 2, 1};
    CHECK(kernels::scalar::dot(u.data(), v.data(), u.size()) == 84.0);
    CHECK(kernels::scalar::dot(u.data(), v.data(), 0) == 0.0);
}

#ifdef SUBINFO_HAVE_AVX2_KERNELS
TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!kernels::backend_supported(kernels::Backend::Avx2)) {
        MESSAGE("AVX2/FMA not available on this CPU; equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int n = 0; n < 200; ++n) {
        Matrix20 a, b;
        for (auto& x : a) x = g(rng);
        for (auto& x : b) x = g(rng);
        Matrix20 cs, cv;
        kernels::scalar::matmul20(a.data(), b.data(), cs.data());
        kernels::avx2::matmul20(a.data(), b.data(), cv.data());
        CHECK(oracle::max_abs_diff(cs, cv) < 1e-12);

        Vector20 x, ys, yv;
        for (auto& e : x) e = g(rng);
        kernels::scalar::matvec20(a.data(), x.data(), ys.data());
        kernels::avx2::matvec20(a.data(), x.data(), yv.data());
        for (std::size_t i = 0; i < kAlphabetSize; ++i) CHECK(std::abs(ys[i] - yv[i]) < 1e-12);
    }
    for (std::size_t len : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 400u, 1001u}) {
        std::vector<double> u(len), v(len);
        for (auto& e : u) e = g(rng);
        for (auto& e : v) e = g(rng);
        const double s = kernels::scalar::dot(u.data(), v.data(), len);
        const double w = kernels::avx2::dot(u.data(), v.data(), len);
        CHECK(std::abs(s - w) <= 1e-12 * (1.0 + std::abs(s)) * static_cast<double>(len + 1));
    }
}
#endif

TEST_CASE("backend selection") {
    const auto original = kernels::active_backend();
    CHECK(kernels::backend_supported(kernels::Backend::Scalar));
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    CHECK(kernels::backend_name(kernels::Backend::Scalar) == "scalar");
    if (!kernels::backend_supported(kernels::Backend::Avx2))
        CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2), UsageError);
    kernels::set_backend(original);
}
