#include "subinfo/mml.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "subinfo/errors.hpp"
#include "subinfo/special_functions.hpp"

namespace subinfo::mml {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// log2(1 + 2^x) without overflow.
double log2_one_plus_exp2(double x) {
    if (x > 60.0) return x + std::log1p(std::exp2(-x)) / kLn2;
    return std::log1p(std::exp2(x)) / kLn2;
}

void check_interior(std::span<const double> theta, const char* fn) {
    for (double t : theta)
        if (!(t > 0.0) || !(t < 1.0) || !std::isfinite(t))
            throw DomainError(std::string(fn) + ": theta must lie strictly inside the simplex");
}

}  // namespace

MessageLength::MessageLength(double bits) : bits_(bits) {
    if (!std::isfinite(bits) || bits < 0.0)
        throw NumericError("message length must be finite and non-negative, got " +
                           std::to_string(bits));
}

double lattice_constant(std::size_t d) {
    switch (d) {
    case 0: throw DomainError("lattice constant needs d >= 1");
    case 1: return 1.0 / 12.0;
    case 2: return 5.0 / (36.0 * std::sqrt(3.0));
    case 3: return 19.0 / (192.0 * std::cbrt(2.0));
    default: {
        const double dd = static_cast<double>(d);
        return std::pow(std::numbers::pi * dd, 1.0 / dd) / (2.0 * std::numbers::pi * std::numbers::e);
    }
    }
}

void clamp_simplex(std::span<double> theta) {
    double sum = 0.0;
    for (double& t : theta) {
        if (!(t >= kProbabilityFloor)) t = kProbabilityFloor;
        sum += t;
    }
    for (double& t : theta) t /= sum;
}

std::vector<double> mml_multinomial_estimate(std::span<const double> counts,
                                             const DirichletParams& alpha) {
    const std::size_t d = alpha.dim();
    if (counts.size() != d)
        throw DomainError("mml_multinomial_estimate: counts and alpha dimensions differ");
    double denom = -0.5 * static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (counts[i] < 0.0 || !std::isfinite(counts[i]))
            throw DomainError("mml_multinomial_estimate: counts must be non-negative");
        denom += counts[i] + alpha.alpha(i);
    }
    if (!(denom > 0.0))
        throw DomainError("mml_multinomial_estimate: degenerate input (denominator " +
                          std::to_string(denom) + ")");
    std::vector<double> theta(d);
    for (std::size_t i = 0; i < d; ++i) theta[i] = (counts[i] + alpha.alpha(i) - 0.5) / denom;
    bool needs_clamp = false;
    for (double t : theta) needs_clamp |= !(t >= kProbabilityFloor);
    if (needs_clamp) clamp_simplex(theta);
    return theta;
}

double dirichlet_log_density(std::span<const double> theta, const DirichletParams& alpha) {
    if (theta.size() != alpha.dim())
        throw DomainError("dirichlet_log_density: dimension mismatch");
    double ln = log_gamma(alpha.kappa());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double a = alpha.alpha(i);
        if (!(theta[i] > 0.0)) {
            if (a < 1.0) throw DomainError("dirichlet_log_density: infinite density on boundary");
            throw DomainError("dirichlet_log_density: theta on the simplex boundary");
        }
        ln += (a - 1.0) * std::log(theta[i]) - log_gamma(a);
    }
    return ln / kLn2;
}

double log2_dirichlet_fisher_det(const DirichletParams& alpha, double n) {
    if (!(n >= 1.0)) throw DomainError("dirichlet_fisher_det: sample count must be >= 1");
    const std::size_t d = alpha.dim();
    double log_prod = 0.0;
    double inv_sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double tg = trigamma(alpha.alpha(i));
        log_prod += std::log2(tg);
        inv_sum += 1.0 / tg;
    }
    const double bracket = 1.0 - trigamma(alpha.kappa()) * inv_sum;
    if (!(bracket > 0.0))
        throw NumericError("dirichlet_fisher_det: non-positive determinant for kappa=" +
                           std::to_string(alpha.kappa()) + " (precision loss)");
    return static_cast<double>(d) * std::log2(n) + log_prod + std::log2(bracket);
}

double dirichlet_fisher_det(const DirichletParams& alpha, double n) {
    return std::exp2(log2_dirichlet_fisher_det(alpha, n));
}

double log2_multinomial_fisher_det(std::span<const double> theta, double total_count) {
    if (!(total_count >= 1.0))
        throw DomainError("multinomial_fisher_det: total count must be >= 1");
    double log_prod = 0.0;
    for (double t : theta) {
        if (!(t > 0.0)) throw DomainError("multinomial_fisher_det: zero probability");
        log_prod += std::log2(t);
    }
    return static_cast<double>(theta.size() - 1) * std::log2(total_count) - log_prod;
}

double multinomial_fisher_det(std::span<const double> theta, double total_count) {
    return std::exp2(log2_multinomial_fisher_det(theta, total_count));
}

double log2_alpha_prior(const DirichletParams& alpha) {
    const std::size_t d = alpha.dim();
    const double k = alpha.kappa();
    const double dd = static_cast<double>(d);
    // Uniform mean: reciprocal of the simplex volume sqrt(d) / (d-1)!.
    double log2_mean = -0.5 * std::log2(dd);
    for (std::size_t i = 2; i < d; ++i) log2_mean += std::log2(static_cast<double>(i));
    // y^(d-1) / (1+y^2)^((d+1)/2), with its normaliser for d = 2, 3.
    double log2_kappa = (dd - 1.0) * std::log2(k) - 0.5 * (dd + 1.0) * std::log2(1.0 + k * k);
    if (d == 3) log2_kappa += std::log2(4.0 / std::numbers::pi);
    else if (d != 2) throw DomainError("log2_alpha_prior: only d = 2 and d = 3 are supported");
    return log2_mean + log2_kappa;
}

MessageLength msglen_alpha(const DirichletParams& alpha, double n, StateKind kind) {
    const std::size_t d = dimension(kind);
    if (alpha.dim() != d) throw DomainError("msglen_alpha: dimension does not match state kind");
    const double dd = static_cast<double>(d);
    const double x = log2_dirichlet_fisher_det(alpha, n) + dd * std::log2(lattice_constant(d)) -
                     2.0 * log2_alpha_prior(alpha);
    return MessageLength(0.5 * log2_one_plus_exp2(x) + 0.5 * dd);
}

MessageLength msglen_theta_given_alpha(std::span<const double> theta,
                                       const DirichletParams& alpha, double counts_total) {
    const std::size_t d = alpha.dim();
    if (theta.size() != d) throw DomainError("msglen_theta_given_alpha: dimension mismatch");
    check_interior(theta, "msglen_theta_given_alpha");
    if (counts_total < 0.0) throw DomainError("msglen_theta_given_alpha: negative count");
    const double free = static_cast<double>(d - 1);
    if (counts_total == 0.0) return MessageLength(0.5 * free);
    const double x = log2_multinomial_fisher_det(theta, counts_total) +
                     free * std::log2(lattice_constant(d - 1)) -
                     2.0 * dirichlet_log_density(theta, alpha);
    return MessageLength(0.5 * log2_one_plus_exp2(x) + 0.5 * free);
}

MessageLength msglen_simplex_vector_uniform_prior(std::span<const double> theta,
                                                  double counts_total) {
    const std::size_t d = theta.size();
    if (d < 2) throw DomainError("msglen_simplex_vector_uniform_prior: need d >= 2");
    check_interior(theta, "msglen_simplex_vector_uniform_prior");
    if (counts_total < 0.0) throw DomainError("msglen_simplex_vector_uniform_prior: negative count");
    const double free = static_cast<double>(d - 1);
    // Dir(theta; 1) = Gamma(d) everywhere on the simplex.
    double bits = -log_gamma(static_cast<double>(d)) / kLn2 +
                  0.5 * free * std::log2(lattice_constant(d - 1)) + 0.5 * free;
    if (counts_total > 0.0) bits += 0.5 * log2_multinomial_fisher_det(theta, counts_total);
    return MessageLength(std::max(bits, 0.0));
}

}  // namespace subinfo::mml
