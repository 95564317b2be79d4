#pragma once

// Counter-based 64-bit generator. Each draw hashes (key, counter), so a
// stream can be forked by index into statistically independent substreams
// without sharing state, and every stochastic result is reproducible from
// the master seed alone.

#include <cstdint>
#include <span>
#include <vector>

#include "subinfo/core_types.hpp"

namespace subinfo {

class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept;
    double uniform() noexcept;                     // (0, 1)
    double uniform(double lo, double hi) noexcept; // (lo, hi)
    double normal() noexcept;
    bool bernoulli(double p) noexcept;
    std::size_t uniform_index(std::size_t n) noexcept;
    // Index drawn with probability proportional to weights (non-negative).
    std::size_t categorical(std::span<const double> weights) noexcept;

    // log of a Gamma(shape, 1) draw; Marsaglia-Tsang, with the shape < 1
    // boost Gamma(a) = Gamma(a + 1) * U^(1/a) applied in log space.
    double log_gamma_variate(double shape) noexcept;
    double gamma(double shape) noexcept;

    // Independent substream identified by `stream_id`.
    Rng fork(std::uint64_t stream_id) const noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    Rng(std::uint64_t key, bool) noexcept : key_(key) {}
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// y_i ~ Gamma(alpha_i, 1), returned as y / sum(y); every component > 0.
std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);
std::vector<double> sample_dirichlet(const DirichletParams& alpha, Rng& rng);

}  // namespace subinfo
