#include "subinfo/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subinfo/errors.hpp"
#include "subinfo/kernels.hpp"

namespace subinfo {

namespace {

constexpr std::array<std::int8_t, 256> make_letter_table() {
    std::array<std::int8_t, 256> t{};
    for (auto& v : t) v = -1;
    for (std::size_t i = 0; i < kCanonicalOrder.size(); ++i) {
        const char c = kCanonicalOrder[i];
        t[static_cast<unsigned char>(c)] = static_cast<std::int8_t>(i);
        t[static_cast<unsigned char>(c - 'A' + 'a')] = static_cast<std::int8_t>(i);
    }
    return t;
}

constexpr auto kLetterTable = make_letter_table();

constexpr double kColumnSumTolerance = 1e-9;
constexpr double kStationaryResidual = 1e-7;
constexpr double kPowerIterationTolerance = 1e-12;
constexpr int kPowerIterationLimit = 100000;
constexpr int kSquarings = 10;  // iterate with M^1024

double l1_distance(const Vector20& a, const Vector20& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < kAlphabetSize; ++i) s += std::abs(a[i] - b[i]);
    return s;
}

void normalize_l1(Vector20& v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v) x /= s;
}

double residual(const Matrix20& m, const Vector20& v) {
    Vector20 mv;
    kernels::matvec20(m.data(), v.data(), mv.data());
    double r = 0.0;
    for (std::size_t i = 0; i < kAlphabetSize; ++i) r = std::max(r, std::abs(mv[i] - v[i]));
    return r;
}

Vector20 compute_stationary(const Matrix20& m, const Vector20* hint) {
    Vector20 v;
    if (hint) {
        v = *hint;
        for (auto& x : v) x = std::max(x, 0.0);
        normalize_l1(v);
        if (residual(m, v) < 1e-14) return v;
    } else {
        v.fill(1.0 / kAlphabetSize);
    }

    // Power iteration on M^(2^k): each sweep advances the chain 1024 steps.
    Matrix20 p = m;
    Matrix20 tmp;
    for (int s = 0; s < kSquarings; ++s) {
        kernels::matmul20(p.data(), p.data(), tmp.data());
        normalize_columns(tmp, 0.0);
        p = tmp;
    }
    constexpr int stride = 1 << kSquarings;
    Vector20 next;
    for (int it = 0; it * stride < kPowerIterationLimit; ++it) {
        kernels::matvec20(p.data(), v.data(), next.data());
        normalize_l1(next);
        const double change = l1_distance(next, v);
        v = next;
        if (change < kPowerIterationTolerance) break;
    }
    if (residual(m, v) < kStationaryResidual) return v;

    // Fall back to plain iteration on M.
    for (int it = 0; it < kPowerIterationLimit; ++it) {
        kernels::matvec20(m.data(), v.data(), next.data());
        normalize_l1(next);
        const double change = l1_distance(next, v);
        v = next;
        if (change < kPowerIterationTolerance) break;
    }
    if (residual(m, v) >= kStationaryResidual)
        throw ConvergenceError("stationary distribution: power iteration did not converge in " +
                               std::to_string(kPowerIterationLimit) + " iterations");
    return v;
}

}  // namespace

AminoAcid AminoAcid::from_letter(char c) {
    if (auto aa = try_from_letter(c)) return *aa;
    throw ParseError(std::string("invalid amino-acid letter '") + c + "'");
}

std::optional<AminoAcid> AminoAcid::try_from_letter(char c) noexcept {
    const auto idx = kLetterTable[static_cast<unsigned char>(c)];
    if (idx < 0) return std::nullopt;
    return AminoAcid{static_cast<std::uint8_t>(idx)};
}

Sequence parse_sequence(std::string_view letters) {
    Sequence seq;
    seq.reserve(letters.size());
    for (char c : letters) seq.push_back(AminoAcid::from_letter(c));
    return seq;
}

std::string to_string(const Sequence& seq) {
    std::string s;
    s.reserve(seq.size());
    for (auto aa : seq) s.push_back(aa.letter());
    return s;
}

State state_from_char(char c) {
    switch (c) {
    case 'm': case 'M': return State::Match;
    case 'i': case 'I': return State::Insert;
    case 'd': case 'D': return State::Delete;
    default: throw ParseError(std::string("invalid alignment state '") + c + "'");
    }
}

char to_char(State s) noexcept {
    switch (s) {
    case State::Match: return 'm';
    case State::Insert: return 'i';
    case State::Delete: return 'd';
    }
    return '?';
}

std::vector<State> parse_states(std::string_view text) {
    std::vector<State> out;
    out.reserve(text.size());
    for (char c : text) out.push_back(state_from_char(c));
    return out;
}

std::string to_string(const std::vector<State>& states) {
    std::string s;
    s.reserve(states.size());
    for (auto st : states) s.push_back(to_char(st));
    return s;
}

double normalize_columns(Matrix20& m, double floor) {
    double drift = 0.0;
    for (std::size_t j = 0; j < kAlphabetSize; ++j) {
        double* col = m.data() + j * kAlphabetSize;
        double sum = 0.0;
        for (std::size_t i = 0; i < kAlphabetSize; ++i) {
            col[i] = std::max(col[i], floor);
            sum += col[i];
        }
        drift = std::max(drift, std::abs(sum - 1.0));
        for (std::size_t i = 0; i < kAlphabetSize; ++i) col[i] /= sum;
    }
    return drift;
}

StochasticMatrix::StochasticMatrix(const Matrix20& entries, const Vector20* stationary_hint)
    : entries_(entries) {
    for (std::size_t j = 0; j < kAlphabetSize; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < kAlphabetSize; ++i) {
            const double x = entries_[cell(i, j)];
            if (!std::isfinite(x) || x < 0.0)
                throw DomainError("stochastic matrix: entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") is negative or non-finite");
            sum += x;
        }
        if (std::abs(sum - 1.0) > kColumnSumTolerance)
            throw DomainError("stochastic matrix: column " + std::to_string(j) + " sums to " +
                              std::to_string(sum));
    }
    stationary_ = compute_stationary(entries_, stationary_hint);
}

StochasticMatrix StochasticMatrix::normalized(Matrix20 raw, const Vector20* stationary_hint) {
    for (double x : raw)
        if (!std::isfinite(x) || x < 0.0)
            throw DomainError("stochastic matrix: negative or non-finite entry");
    normalize_columns(raw);
    return StochasticMatrix(raw, stationary_hint);
}

StochasticMatrix StochasticMatrix::identity() {
    Matrix20 m{};
    for (std::size_t i = 0; i < kAlphabetSize; ++i) m[cell(i, i)] = 1.0;
    return StochasticMatrix(m);
}

StochasticMatrix StochasticMatrix::uniform() {
    Matrix20 m;
    m.fill(1.0 / kAlphabetSize);
    return StochasticMatrix(m);
}

IndelModel::IndelModel(const Vector20& probs) : probs_(probs) {
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0)
            throw DomainError("indel model: negative or non-finite probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw DomainError("indel model: probabilities sum to " + std::to_string(sum));
}

IndelModel IndelModel::uniform() {
    Vector20 p;
    p.fill(1.0 / kAlphabetSize);
    return IndelModel(p);
}

void AlignmentRecord::validate() const {
    const std::string name = id.empty() ? std::string("<unnamed>") : id;
    if (states.empty()) throw DomainError("record '" + name + "': empty alignment");
    std::size_t m = 0, ins = 0, del = 0;
    for (auto s : states) {
        switch (s) {
        case State::Match: ++m; break;
        case State::Insert: ++ins; break;
        case State::Delete: ++del; break;
        }
    }
    if (m + del != source.size())
        throw DomainError("record '" + name + "': m+d count " + std::to_string(m + del) +
                          " != |S| = " + std::to_string(source.size()));
    if (m + ins != target.size())
        throw DomainError("record '" + name + "': m+i count " + std::to_string(m + ins) +
                          " != |T| = " + std::to_string(target.size()));
}

TransitionParams::TransitionParams(double match_to_match, double insert_to_insert,
                                   double insert_to_match)
    : mm_(match_to_match), ii_(insert_to_insert), im_(insert_to_match) {
    auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!open_unit(mm_) || !open_unit(ii_) || !open_unit(im_) || !(ii_ + im_ < 1.0))
        throw DomainError("transition parameters outside domain: p_mm=" + std::to_string(mm_) +
                          " p_ii=" + std::to_string(ii_) + " p_mi=" + std::to_string(im_));
}

TransitionParams TransitionParams::from_simplices(std::span<const double> match,
                                                  std::span<const double> insert) {
    if (match.size() != 2 || insert.size() != 3)
        throw DomainError("transition simplices must have dimensions 2 and 3");
    return TransitionParams(match[0], insert[0], insert[1]);
}

TransitionTable derive_full_transitions(const TransitionParams& theta) {
    constexpr auto M = static_cast<std::size_t>(State::Match);
    constexpr auto I = static_cast<std::size_t>(State::Insert);
    constexpr auto D = static_cast<std::size_t>(State::Delete);
    const double mm = theta.match_to_match();
    const double ii = theta.insert_to_insert();
    const double im = theta.insert_to_match();
    const double gap_switch = 1.0 - ii - im;
    TransitionTable t{};
    t[M][M] = mm;
    t[M][I] = (1.0 - mm) / 2.0;
    t[M][D] = (1.0 - mm) / 2.0;
    t[I][I] = ii;
    t[I][M] = im;
    t[I][D] = gap_switch;
    t[D][D] = ii;
    t[D][M] = im;
    t[D][I] = gap_switch;
    return t;
}

std::array<double, kStateCount> state_stationary(const TransitionParams& theta) {
    const double im = theta.insert_to_match();
    const double pm = im / (im + 1.0 - theta.match_to_match());
    const double pg = (1.0 - pm) / 2.0;
    return {pm, pg, pg};
}

DirichletParams::DirichletParams(std::span<const double> alpha) {
    if (alpha.size() < 2) throw DomainError("Dirichlet needs at least 2 components");
    double k = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw DomainError("Dirichlet parameter must be positive and finite, got " +
                              std::to_string(a));
        k += a;
    }
    kappa_ = k;
    mean_.reserve(alpha.size());
    for (double a : alpha) mean_.push_back(a / k);
}

DirichletParams DirichletParams::from_kappa_mean(double kappa, std::span<const double> mean) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("Dirichlet concentration must be positive, got " + std::to_string(kappa));
    if (mean.size() < 2) throw DomainError("Dirichlet needs at least 2 components");
    double s = 0.0;
    for (double m : mean) {
        if (!(m > 0.0) || !std::isfinite(m))
            throw DomainError("Dirichlet mean components must be positive");
        s += m;
    }
    if (std::abs(s - 1.0) > 1e-9) throw DomainError("Dirichlet mean must sum to 1");
    DirichletParams p;
    p.kappa_ = kappa;
    p.mean_.reserve(mean.size());
    for (double m : mean) p.mean_.push_back(m / s);
    return p;
}

std::vector<double> DirichletParams::alpha() const {
    std::vector<double> a(mean_.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = kappa_ * mean_[i];
    return a;
}

TimeBinnedDirichlets::TimeBinnedDirichlets(const BinDirichlets& everywhere)
    : bins_(kTimeBins, everywhere) {}

TimeBinnedDirichlets::TimeBinnedDirichlets(std::vector<BinDirichlets> bins)
    : bins_(std::move(bins)) {
    if (bins_.size() != kTimeBins)
        throw DomainError("time-binned Dirichlets need exactly " + std::to_string(kTimeBins) +
                          " bins");
    for (const auto& b : bins_)
        if (b.match.dim() != 2 || b.insert.dim() != 3)
            throw DomainError("bin Dirichlets must have dimensions 2 (match) and 3 (insert)");
}

const BinDirichlets& TimeBinnedDirichlets::at(int t) const {
    check_time(t);
    return bins_[static_cast<std::size_t>(t - kMinTime)];
}

BinDirichlets& TimeBinnedDirichlets::at(int t) {
    check_time(t);
    return bins_[static_cast<std::size_t>(t - kMinTime)];
}

void fill_empty_bins(TimeBinnedDirichlets& dirichlets, const std::vector<bool>& populated) {
    if (populated.size() != kTimeBins) throw DomainError("populated mask must have 1000 entries");
    if (std::none_of(populated.begin(), populated.end(), [](bool b) { return b; }))
        throw DomainError("cannot fill Dirichlet bins: no populated bin");
    const auto source = dirichlets;  // read from the unmodified copy
    const int n = static_cast<int>(kTimeBins);
    for (int b = 0; b < n; ++b) {
        if (populated[static_cast<std::size_t>(b)]) continue;
        for (int d = 1; d < n; ++d) {
            if (b - d >= 0 && populated[static_cast<std::size_t>(b - d)]) {
                dirichlets.at(b + kMinTime) = source.at(b - d + kMinTime);
                break;
            }
            if (b + d < n && populated[static_cast<std::size_t>(b + d)]) {
                dirichlets.at(b + kMinTime) = source.at(b + d + kMinTime);
                break;
            }
        }
    }
}

void check_time(int t) {
    if (t < kMinTime || t > kMaxTime)
        throw DomainError("time " + std::to_string(t) + " outside [1, 1000]");
}

}  // namespace subinfo
