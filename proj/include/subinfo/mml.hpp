#pragma once

// MML87 building blocks: lattice constants, multinomial estimates, Dirichlet
// density and Fisher determinants, and the statement lengths built from them.
// Every length is in bits.

#include <cstddef>
#include <span>
#include <vector>

#include "subinfo/core_types.hpp"

namespace subinfo::mml {

// Length of one part of a message. Always finite and >= 0.
class MessageLength {
public:
    MessageLength() = default;
    explicit MessageLength(double bits);

    double bits() const noexcept { return bits_; }

    MessageLength& operator+=(MessageLength other) noexcept {
        bits_ += other.bits_;
        return *this;
    }
    friend MessageLength operator+(MessageLength a, MessageLength b) noexcept { return a += b; }
    auto operator<=>(const MessageLength&) const = default;

private:
    double bits_ = 0.0;
};

// Quantising-lattice constant c_d. Exact values for d <= 3; for d >= 4 the
// large-d approximation (pi d)^(1/d) / (2 pi e).
double lattice_constant(std::size_t d);

// theta_i = (n_i + a_i - 1/2) / (sum_j (n_j + a_j) - d/2), clamped at
// kProbabilityFloor and renormalised.
std::vector<double> mml_multinomial_estimate(std::span<const double> counts,
                                             const DirichletParams& alpha);

// Floors every component at kProbabilityFloor and renormalises.
void clamp_simplex(std::span<double> theta);

// log2 Dir(theta; alpha). theta must be strictly inside the simplex.
double dirichlet_log_density(std::span<const double> theta, const DirichletParams& alpha);

// N^d prod psi'(a_i) (1 - psi'(kappa) sum 1/psi'(a_i)).
double dirichlet_fisher_det(const DirichletParams& alpha, double n);
double log2_dirichlet_fisher_det(const DirichletParams& alpha, double n);

// N^(d-1) / prod theta_i.
double multinomial_fisher_det(std::span<const double> theta, double total_count);
double log2_multinomial_fisher_det(std::span<const double> theta, double total_count);

// log2 h(alpha) = log2 h(mean) + log2 h(kappa): mean uniform on the simplex,
// kappa ~ y^(d-1) / (1 + y^2)^((d+1)/2), normalised.
double log2_alpha_prior(const DirichletParams& alpha);

// 1/2 log2(1 + detF(alpha) c_d^d / h(alpha)^2) + d/2.
MessageLength msglen_alpha(const DirichletParams& alpha, double n, StateKind kind);

// 1/2 log2(1 + detF(theta) c_{d-1}^{d-1} / Dir(theta; alpha)^2) + (d-1)/2.
// counts_total == 0 gives the (d-1)/2 floor.
MessageLength msglen_theta_given_alpha(std::span<const double> theta,
                                       const DirichletParams& alpha, double counts_total);

// -log2 Dir(theta; 1) + 1/2 log2 detF(theta) + (d-1)/2 log2 c_{d-1} + (d-1)/2,
// floored at zero. counts_total == 0 drops the Fisher term.
MessageLength msglen_simplex_vector_uniform_prior(std::span<const double> theta,
                                                  double counts_total);

}  // namespace subinfo::mml
