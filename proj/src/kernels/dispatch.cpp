#include <atomic>
#include <cstdlib>
#include <string>

#include "subinfo/errors.hpp"
#include "subinfo/kernels.hpp"

namespace subinfo::kernels {

namespace {

struct Table {
    Backend backend;
    void (*matmul20)(const double*, const double*, double*) noexcept;
    void (*matvec20)(const double*, const double*, double*) noexcept;
    double (*dot)(const double*, const double*, std::size_t) noexcept;
};

constexpr Table kScalar{Backend::Scalar, &scalar::matmul20, &scalar::matvec20, &scalar::dot};
#ifdef SUBINFO_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Backend::Avx2, &avx2::matmul20, &avx2::matvec20, &avx2::dot};
#endif

const Table* table_for(Backend b) noexcept {
#ifdef SUBINFO_HAVE_AVX2_KERNELS
    if (b == Backend::Avx2) return &kAvx2;
#endif
    (void)b;
    return &kScalar;
}

const Table* initial_table() noexcept {
    if (const char* env = std::getenv("SUBINFO_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return &kScalar;
        if (v == "avx2" && backend_supported(Backend::Avx2)) return table_for(Backend::Avx2);
    }
    if (backend_supported(Backend::Avx2)) return table_for(Backend::Avx2);
    return &kScalar;
}

std::atomic<const Table*>& active() noexcept {
    static std::atomic<const Table*> table{initial_table()};
    return table;
}

}  // namespace

bool backend_supported(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#ifdef SUBINFO_HAVE_AVX2_KERNELS
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Backend active_backend() noexcept { return active().load(std::memory_order_relaxed)->backend; }

std::string_view backend_name(Backend b) noexcept {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw UsageError("SIMD backend '" + std::string(backend_name(b)) +
                         "' is not supported on this CPU");
    active().store(table_for(b), std::memory_order_relaxed);
}

void matmul20(const double* a, const double* b, double* c) noexcept {
    active().load(std::memory_order_relaxed)->matmul20(a, b, c);
}

void matvec20(const double* a, const double* x, double* y) noexcept {
    active().load(std::memory_order_relaxed)->matvec20(a, x, y);
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    return active().load(std::memory_order_relaxed)->dot(x, y, n);
}

}  // namespace subinfo::kernels
