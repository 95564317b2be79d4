#pragma once

// Arithmetic inner loops. Each kernel has a portable scalar reference and an
// AVX2/FMA variant; the variant used is chosen once at start-up from the CPU
// features (override with SUBINFO_SIMD=scalar|avx2). The two variants agree
// to rounding; the equivalence suite pins the tolerance.

#include <cstddef>
#include <string_view>

namespace subinfo::kernels {

enum class Backend { Scalar, Avx2 };

bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
std::string_view backend_name(Backend b) noexcept;

// Not synchronised: call before any worker threads start.
void set_backend(Backend b);

// c = a * b for column-major 20x20 matrices. c must not alias a or b.
void matmul20(const double* a, const double* b, double* c) noexcept;

// y = a * x for a column-major 20x20 matrix. y must not alias x.
void matvec20(const double* a, const double* x, double* y) noexcept;

double dot(const double* x, const double* y, std::size_t n) noexcept;

namespace scalar {
void matmul20(const double* a, const double* b, double* c) noexcept;
void matvec20(const double* a, const double* x, double* y) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SUBINFO_HAVE_AVX2_KERNELS 1
namespace avx2 {
void matmul20(const double* a, const double* b, double* c) noexcept;
void matvec20(const double* a, const double* x, double* y) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
}  // namespace avx2
#endif

}  // namespace subinfo::kernels
