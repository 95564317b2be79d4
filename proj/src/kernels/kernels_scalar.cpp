#include "subinfo/kernels.hpp"

namespace subinfo::kernels::scalar {

namespace {
constexpr std::size_t N = 20;
}

void matmul20(const double* a, const double* b, double* c) noexcept {
    for (std::size_t j = 0; j < N; ++j) {
        double* cj = c + j * N;
        for (std::size_t i = 0; i < N; ++i) cj[i] = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            const double bkj = b[j * N + k];
            const double* ak = a + k * N;
            for (std::size_t i = 0; i < N; ++i) cj[i] += ak[i] * bkj;
        }
    }
}

void matvec20(const double* a, const double* x, double* y) noexcept {
    for (std::size_t i = 0; i < N; ++i) y[i] = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double xk = x[k];
        const double* ak = a + k * N;
        for (std::size_t i = 0; i < N; ++i) y[i] += ak[i] * xk;
    }
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

}  // namespace subinfo::kernels::scalar
