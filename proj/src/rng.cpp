#include "subinfo/rng.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "subinfo/errors.hpp"

namespace subinfo {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

std::uint64_t Rng::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() noexcept {
    // 53 random bits, shifted half a step away from 0.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

double Rng::normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool Rng::bernoulli(double p) noexcept { return uniform() < p; }

std::size_t Rng::uniform_index(std::size_t n) noexcept {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

std::size_t Rng::categorical(std::span<const double> weights) noexcept {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    // Rounding left u just past the last positive weight.
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return i;
    return 0;
}

double Rng::log_gamma_variate(double shape) noexcept {
    double boost = 0.0;
    if (shape < 1.0) {
        boost = std::log(uniform()) / shape;
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
            return std::log(d) + std::log(v) + boost;
    }
}

double Rng::gamma(double shape) noexcept { return std::exp(log_gamma_variate(shape)); }

Rng Rng::fork(std::uint64_t stream_id) const noexcept {
    return Rng(mix64(key_ ^ mix64(stream_id * kGolden + 0xA4093822299F31D0ULL)), true);
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
    std::vector<double> y(alpha.size());
    double top = -INFINITY;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!(alpha[i] > 0.0)) throw DomainError("sample_dirichlet: alpha must be positive");
        y[i] = rng.log_gamma_variate(alpha[i]);
        top = std::max(top, y[i]);
    }
    double sum = 0.0;
    for (double& v : y) sum += (v = std::max(std::exp(v - top), DBL_MIN));
    for (double& v : y) v /= sum;
    return y;
}

std::vector<double> sample_dirichlet(const DirichletParams& alpha, Rng& rng) {
    const auto a = alpha.alpha();
    return sample_dirichlet(a, rng);
}

}  // namespace subinfo
