#pragma once

// Domain types shared by every module: the amino-acid alphabet, stochastic
// matrices, alignment records, 3-state machine parameters, Dirichlet
// parameters and the complete model bundle.
//
// Matrices are 20x20, column-major: entry (i, j) is the probability that
// source amino acid j becomes target amino acid i, stored at j*20 + i, so
// every column is a contiguous probability vector.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subinfo {

inline constexpr std::size_t kAlphabetSize = 20;
inline constexpr std::size_t kMatrixCells = kAlphabetSize * kAlphabetSize;
inline constexpr std::string_view kCanonicalOrder = "ARNDCQEGHILKMFPSTWYV";

// Probabilities below this are floored (then the vector is renormalised) to
// keep every surprisal finite.
inline constexpr double kProbabilityFloor = 1e-10;

inline constexpr int kMinTime = 1;
inline constexpr int kMaxTime = 1000;
inline constexpr std::size_t kTimeBins = kMaxTime - kMinTime + 1;

using Vector20 = std::array<double, kAlphabetSize>;
using Matrix20 = std::array<double, kMatrixCells>;

constexpr std::size_t cell(std::size_t row, std::size_t col) noexcept {
    return col * kAlphabetSize + row;
}

struct AminoAcid {
    std::uint8_t index = 0;

    // Case-insensitive; throws ParseError outside the 20-letter alphabet.
    static AminoAcid from_letter(char c);
    static std::optional<AminoAcid> try_from_letter(char c) noexcept;
    char letter() const noexcept { return kCanonicalOrder[index]; }

    auto operator<=>(const AminoAcid&) const = default;
};

using Sequence = std::vector<AminoAcid>;

Sequence parse_sequence(std::string_view letters);
std::string to_string(const Sequence& seq);

enum class State : std::uint8_t { Match = 0, Insert = 1, Delete = 2 };
inline constexpr std::size_t kStateCount = 3;

State state_from_char(char c);
char to_char(State s) noexcept;
std::vector<State> parse_states(std::string_view text);
std::string to_string(const std::vector<State>& states);

// Column-stochastic 20x20 conditional probability matrix with its
// stationary distribution computed at construction.
class StochasticMatrix {
public:
    // Validates entries (non-negative, columns summing to 1 within 1e-9).
    // A stationary hint close to the true distribution shortens the power
    // iteration; it is verified, never trusted.
    explicit StochasticMatrix(const Matrix20& entries,
                              const Vector20* stationary_hint = nullptr);

    // Floors every entry at kProbabilityFloor and renormalises columns.
    static StochasticMatrix normalized(Matrix20 raw,
                                       const Vector20* stationary_hint = nullptr);
    static StochasticMatrix identity();
    static StochasticMatrix uniform();

    double operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[cell(row, col)];
    }
    const Matrix20& entries() const noexcept { return entries_; }
    std::span<const double, kAlphabetSize> column(std::size_t j) const noexcept {
        return std::span<const double, kAlphabetSize>(entries_.data() + j * kAlphabetSize,
                                                      kAlphabetSize);
    }
    const Vector20& stationary() const noexcept { return stationary_; }

private:
    Matrix20 entries_;
    Vector20 stationary_;
};

// Floors every entry at `floor` and renormalises each column in place; returns
// the largest absolute deviation of a column sum from 1 before rescaling.
double normalize_columns(Matrix20& m, double floor = kProbabilityFloor);

// Multinomial over the 20 amino acids used for residues in gap columns.
class IndelModel {
public:
    explicit IndelModel(const Vector20& probs);
    static IndelModel uniform();

    const Vector20& probs() const noexcept { return probs_; }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }

private:
    Vector20 probs_;
};

struct AlignmentRecord {
    std::string id;
    Sequence source;   // S
    Sequence target;   // T
    std::vector<State> states;

    // m+d == |S|, m+i == |T|, states non-empty. Throws DomainError naming
    // the record.
    void validate() const;
};

using Benchmark = std::vector<AlignmentRecord>;

// 3x3 transition probabilities indexed [from][to].
using TransitionTable = std::array<std::array<double, kStateCount>, kStateCount>;

// Free parameters of the insert/delete-symmetric 3-state machine.
class TransitionParams {
public:
    TransitionParams(double match_to_match, double insert_to_insert, double insert_to_match);

    // match = (Pr(m|m), 1-Pr(m|m)); insert = (Pr(i|i), Pr(m|i), Pr(d|i)).
    static TransitionParams from_simplices(std::span<const double> match,
                                           std::span<const double> insert);

    double match_to_match() const noexcept { return mm_; }
    double insert_to_insert() const noexcept { return ii_; }
    double insert_to_match() const noexcept { return im_; }

    std::array<double, 2> match_simplex() const noexcept { return {mm_, 1.0 - mm_}; }
    std::array<double, 3> insert_simplex() const noexcept {
        return {ii_, im_, 1.0 - ii_ - im_};
    }

private:
    double mm_;
    double ii_;
    double im_;
};

TransitionTable derive_full_transitions(const TransitionParams& theta);

// Stationary distribution of the 3-state chain (start-state distribution).
std::array<double, kStateCount> state_stationary(const TransitionParams& theta);

enum class StateKind { Match, Insert };

constexpr std::size_t dimension(StateKind kind) noexcept {
    return kind == StateKind::Match ? 2 : 3;
}

// Dirichlet parameters held as concentration kappa and mean vector.
class DirichletParams {
public:
    explicit DirichletParams(std::span<const double> alpha);
    static DirichletParams from_kappa_mean(double kappa, std::span<const double> mean);

    std::size_t dim() const noexcept { return mean_.size(); }
    double kappa() const noexcept { return kappa_; }
    const std::vector<double>& mean() const noexcept { return mean_; }
    double alpha(std::size_t i) const noexcept { return kappa_ * mean_[i]; }
    std::vector<double> alpha() const;

    bool operator==(const DirichletParams&) const = default;

private:
    DirichletParams() = default;
    double kappa_ = 0.0;
    std::vector<double> mean_;
};

struct BinDirichlets {
    DirichletParams match;   // d = 2
    DirichletParams insert;  // d = 3
};

// One pair of Dirichlets for every integer time t in [1, 1000].
class TimeBinnedDirichlets {
public:
    explicit TimeBinnedDirichlets(const BinDirichlets& everywhere);
    explicit TimeBinnedDirichlets(std::vector<BinDirichlets> bins);

    const BinDirichlets& at(int t) const;
    BinDirichlets& at(int t);
    const std::vector<BinDirichlets>& bins() const noexcept { return bins_; }

private:
    std::vector<BinDirichlets> bins_;
};

// Fills every bin whose flag is false from the nearest flagged bin (ties go
// to the lower t). `populated` has kTimeBins entries; at least one must be set.
void fill_empty_bins(TimeBinnedDirichlets& dirichlets, const std::vector<bool>& populated);

struct ModelBundle {
    StochasticMatrix matrix;
    IndelModel indel;
    TimeBinnedDirichlets dirichlets;
    std::vector<TransitionParams> thetas;
    std::vector<int> times;
    double total_message_length_bits = 0.0;
};

void check_time(int t);

}  // namespace subinfo
