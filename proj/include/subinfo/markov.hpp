#pragma once

// Stochastic-matrix algebra: powers, stationary distribution, expected
// change, log-odds conversion, k-th root search and KL divergence.

#include <optional>
#include <string>
#include <vector>

#include "subinfo/core_types.hpp"

namespace subinfo::markov {

// Log-odds scores S_ij = c log2(p(i|j) / p(i)), in units of 1/c bits.
struct ScoringMatrix {
    Matrix20 scores{};  // column-major, same layout as StochasticMatrix
    double scale = 1.0;
    std::optional<Vector20> background;

    void validate() const;
};

// M^t by repeated squaring; columns renormalised afterwards. 1 <= t <= 1000.
StochasticMatrix matrix_power(const StochasticMatrix& m, int t);

const Vector20& stationary_distribution(const StochasticMatrix& m);

// 1 - sum_j pi_j (M^t)_jj.
double expected_change(const StochasticMatrix& m, int t = 1);

// Expected change of every t in [1, t_max]; one multiplication per step.
std::vector<double> expected_change_curve(const StochasticMatrix& m, int t_max);

struct Conditional {
    Matrix20 entries{};          // columns renormalised
    double max_column_drift = 0; // |column sum - 1| before renormalisation
    std::vector<double> column_drift;
};

// C_{i|j} = p(a_i) 2^(S_ij / c), with p from the matrix background or the
// fallback frequencies. Throws UsageError when neither is available.
Conditional logodds_to_conditional(const ScoringMatrix& sc,
                                   const std::optional<Vector20>& fallback_freqs);

// Inverse map: S_ij = c log2(C_{i|j} / freqs_i); no rounding.
ScoringMatrix conditional_to_logodds(const Matrix20& conditional, double scale,
                                     const Vector20& freqs);

struct BaseMatrixResult {
    StochasticMatrix matrix;
    int k = 1;
    double expected_change = 0.0;
    double clipped_mass = 0.0;        // total over all columns
    double max_column_clipped = 0.0;
    bool degenerate = false;          // identity-like input, k forced to 1
    std::vector<std::string> warnings;
};

inline constexpr int kMaxRoot = 5000;
inline constexpr double kTargetChange = 0.01;

// M(1) = C^(1/k) for the k in [1, 5000] whose root has expected change
// closest to 0.01 (smallest k on ties).
BaseMatrixResult find_base_matrix(const Matrix20& conditional);

enum class KlMode { Joint, Conditional };

// Sum_ij X_ij log2(X_{i|j}/Y_{i|j}) (conditional) or
// Sum_ij X_ij log2(X_ij/Y_ij) (joint), X_ij = X_{i|j} pi^X_j.
double kl_divergence(const StochasticMatrix& x, const StochasticMatrix& y, KlMode mode);

// series[j][t-1] = KL(column j of M^t || pi), t = 1..t_max.
std::vector<std::vector<double>> column_convergence_curve(const StochasticMatrix& m, int t_max);

}  // namespace subinfo::markov
