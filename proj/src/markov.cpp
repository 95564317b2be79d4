#include "subinfo/markov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "subinfo/errors.hpp"
#include "subinfo/kernels.hpp"

namespace subinfo::markov {

namespace {

constexpr std::size_t N = kAlphabetSize;

using EMatrix = Eigen::Matrix<double, 20, 20>;
using CMatrix = Eigen::Matrix<std::complex<double>, 20, 20>;
using CVector = Eigen::Matrix<std::complex<double>, 20, 1>;

constexpr double kNegativeEigenFloor = -1e-8;
constexpr double kMaxColumnClipped = 1e-3;
constexpr double kMaxAcceptableChange = 0.05;
// Below this spread between k = 1 and k = kMaxRoot the root does not depend
// on k (identity, rank-one and similar inputs).
constexpr double kFlatCurveTolerance = 1e-6;
constexpr double kZeroEigenvalue = 1e-12;

Matrix20 multiply(const Matrix20& a, const Matrix20& b) {
    Matrix20 out;
    kernels::matmul20(a.data(), b.data(), out.data());
    return out;
}

double diag_weighted(const Matrix20& m, const Vector20& pi) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += pi[j] * m[cell(j, j)];
    return s;
}

std::complex<double> principal_root(std::complex<double> lambda, int k) {
    if (std::abs(lambda) == 0.0) return 0.0;
    return std::pow(lambda, 1.0 / static_cast<double>(k));
}

}  // namespace

void ScoringMatrix::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("scoring matrix: scale must be positive and finite");
    for (double s : scores)
        if (!std::isfinite(s)) throw DomainError("scoring matrix: non-finite score");
    if (background) {
        double sum = 0.0;
        for (double p : *background) {
            if (!(p > 0.0) || !std::isfinite(p))
                throw DomainError("scoring matrix: background frequencies must be positive");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw DomainError("scoring matrix: background frequencies sum to " +
                              std::to_string(sum));
    }
}

StochasticMatrix matrix_power(const StochasticMatrix& m, int t) {
    check_time(t);
    if (t == 1) return m;
    Matrix20 result{};
    bool have_result = false;
    Matrix20 base = m.entries();
    for (unsigned e = static_cast<unsigned>(t);;) {
        if (e & 1u) {
            result = have_result ? multiply(result, base) : base;
            have_result = true;
        }
        e >>= 1u;
        if (!e) break;
        base = multiply(base, base);
    }
    normalize_columns(result, 0.0);
    return StochasticMatrix(result, &m.stationary());
}

const Vector20& stationary_distribution(const StochasticMatrix& m) { return m.stationary(); }

double expected_change(const StochasticMatrix& m, int t) {
    if (t < 1) throw DomainError("expected_change: t must be >= 1");
    if (t == 1) return std::clamp(1.0 - diag_weighted(m.entries(), m.stationary()), 0.0, 1.0);
    Matrix20 p = m.entries();
    Matrix20 base = m.entries();
    for (int e = t - 1; e > 0; e >>= 1) {
        if (e & 1) p = multiply(p, base);
        if (e > 1) base = multiply(base, base);
    }
    normalize_columns(p, 0.0);
    return std::clamp(1.0 - diag_weighted(p, m.stationary()), 0.0, 1.0);
}

std::vector<double> expected_change_curve(const StochasticMatrix& m, int t_max) {
    if (t_max < 1) throw DomainError("expected_change_curve: t_max must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(t_max));
    Matrix20 p = m.entries();
    for (int t = 1; t <= t_max; ++t) {
        if (t > 1) {
            p = multiply(m.entries(), p);
            normalize_columns(p, 0.0);
        }
        out.push_back(std::clamp(1.0 - diag_weighted(p, m.stationary()), 0.0, 1.0));
    }
    return out;
}

Conditional logodds_to_conditional(const ScoringMatrix& sc,
                                   const std::optional<Vector20>& fallback_freqs) {
    sc.validate();
    const std::optional<Vector20>& freqs = sc.background ? sc.background : fallback_freqs;
    if (!freqs)
        throw UsageError("log-odds conversion needs background frequencies: none in the matrix "
                         "file and no fallback supplied");
    Conditional out;
    out.column_drift.assign(N, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double c = (*freqs)[i] * std::exp2(sc.scores[cell(i, j)] / sc.scale);
            out.entries[cell(i, j)] = c;
            sum += c;
        }
        out.column_drift[j] = std::abs(sum - 1.0);
        out.max_column_drift = std::max(out.max_column_drift, out.column_drift[j]);
    }
    normalize_columns(out.entries);
    return out;
}

ScoringMatrix conditional_to_logodds(const Matrix20& conditional, double scale,
                                     const Vector20& freqs) {
    ScoringMatrix sc;
    sc.scale = scale;
    sc.background = freqs;
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) {
            const double c = std::max(conditional[cell(i, j)], kProbabilityFloor);
            sc.scores[cell(i, j)] = scale * std::log2(c / freqs[i]);
        }
    sc.validate();
    return sc;
}

BaseMatrixResult find_base_matrix(const Matrix20& conditional) {
    Matrix20 c = conditional;
    for (double x : c)
        if (!std::isfinite(x) || x < 0.0)
            throw DomainError("find_base_matrix: negative or non-finite entry");
    normalize_columns(c);
    const StochasticMatrix cm(c);
    const Vector20& pi = cm.stationary();

    EMatrix a;
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[cell(i, j)];

    Eigen::EigenSolver<EMatrix> es(a, true);
    if (es.info() != Eigen::Success)
        throw NumericError("find_base_matrix: eigendecomposition failed");
    CVector lambda = es.eigenvalues();
    const CMatrix v = es.eigenvectors();
    Eigen::FullPivLU<CMatrix> lu(v);
    if (!lu.isInvertible())
        throw NumericError("find_base_matrix: input matrix is not diagonalisable");
    const CMatrix vinv = lu.inverse();

    for (Eigen::Index l = 0; l < 20; ++l) {
        auto& lam = lambda(l);
        if (std::abs(lam) < kZeroEigenvalue ||
            (std::abs(lam.imag()) < kZeroEigenvalue && lam.real() < 0.0 &&
             lam.real() > kNegativeEigenFloor))
            lam = 0.0;
    }

    // sum_j pi_j diag_j(root_k) = sum_l w_l lambda_l^(1/k).
    std::array<std::complex<double>, 20> w{};
    for (Eigen::Index l = 0; l < 20; ++l)
        for (Eigen::Index j = 0; j < 20; ++j)
            w[static_cast<std::size_t>(l)] += pi[static_cast<std::size_t>(j)] * v(j, l) * vinv(l, j);

    auto change_at = [&](int k) {
        std::complex<double> s = 0.0;
        for (Eigen::Index l = 0; l < 20; ++l)
            s += w[static_cast<std::size_t>(l)] * principal_root(lambda(l), k);
        return 1.0 - s.real();
    };

    BaseMatrixResult result{cm, 1, 1.0 - diag_weighted(c, pi), 0.0, 0.0, false, {}};

    const double first = change_at(1);
    const double last = change_at(kMaxRoot);
    if (std::abs(first - last) < kFlatCurveTolerance) {
        result.degenerate = true;
        result.warnings.push_back(
            "expected change does not depend on the root order (identity-like or rank-one "
            "input); returning k = 1 uncalibrated");
        return result;
    }

    int best_k = 1;
    double best_gap = std::abs(first - kTargetChange);
    double min_change = first;
    for (int k = 2; k <= kMaxRoot; ++k) {
        const double ec = change_at(k);
        min_change = std::min(min_change, ec);
        const double gap = std::abs(ec - kTargetChange);
        if (gap < best_gap) {
            best_gap = gap;
            best_k = k;
        }
    }
    if (min_change > kMaxAcceptableChange)
        throw ConvergenceError("find_base_matrix: no root order in [1, " +
                               std::to_string(kMaxRoot) +
                               "] reaches expected change <= 0.05 (input change " +
                               std::to_string(first) + ", smallest reached " +
                               std::to_string(min_change) + ")");

    result.k = best_k;
    if (best_k == 1) return result;

    CVector roots;
    for (Eigen::Index l = 0; l < 20; ++l) roots(l) = principal_root(lambda(l), best_k);
    const CMatrix root = v * roots.asDiagonal() * vinv;

    Matrix20 m;
    for (std::size_t j = 0; j < N; ++j) {
        double clipped = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double x = root(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
            if (x < 0.0) {
                clipped -= x;
                x = 0.0;
            }
            m[cell(i, j)] = x;
        }
        result.clipped_mass += clipped;
        result.max_column_clipped = std::max(result.max_column_clipped, clipped);
    }
    if (result.max_column_clipped > kMaxColumnClipped)
        throw NumericError("find_base_matrix: root of order " + std::to_string(best_k) +
                           " has " + std::to_string(result.max_column_clipped) +
                           " negative mass in one column (limit 1e-3)");
    normalize_columns(m);
    result.matrix = StochasticMatrix(m, &pi);
    result.expected_change = expected_change(result.matrix, 1);
    return result;
}

double kl_divergence(const StochasticMatrix& x, const StochasticMatrix& y, KlMode mode) {
    const Vector20& px = x.stationary();
    const Vector20& py = y.stationary();
    double kl = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < N; ++i) {
            const double xc = std::max(x(i, j), kProbabilityFloor);
            const double yc = std::max(y(i, j), kProbabilityFloor);
            const double xj = xc * px[j];
            if (mode == KlMode::Conditional) {
                kl += xj * std::log2(xc / yc);
            } else {
                const double yj = std::max(yc * py[j], kProbabilityFloor * kProbabilityFloor);
                kl += xj * std::log2(std::max(xj, kProbabilityFloor * kProbabilityFloor) / yj);
            }
        }
    }
    return std::max(kl, 0.0);
}

std::vector<std::vector<double>> column_convergence_curve(const StochasticMatrix& m, int t_max) {
    if (t_max < 1) throw DomainError("column_convergence_curve: t_max must be >= 1");
    const Vector20& pi = m.stationary();
    std::vector<std::vector<double>> series(N, std::vector<double>(static_cast<std::size_t>(t_max)));
    Matrix20 p = m.entries();
    for (int t = 1; t <= t_max; ++t) {
        if (t > 1) {
            p = multiply(m.entries(), p);
            normalize_columns(p, 0.0);
        }
        for (std::size_t j = 0; j < N; ++j) {
            double kl = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double q = p[cell(i, j)];
                if (q > 0.0) kl += q * std::log2(q / std::max(pi[i], kProbabilityFloor));
            }
            series[j][static_cast<std::size_t>(t - 1)] = std::max(kl, 0.0);
        }
    }
    return series;
}

}  // namespace subinfo::markov
