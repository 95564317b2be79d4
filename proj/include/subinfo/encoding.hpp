#pragma once

// Total two-part message length of a benchmark under a model bundle:
// I(M) + I(P) + I(alpha) + sum over records of
// I(t) + I(Theta | alpha(t)) + I(A | Theta) + I(S, T | A, M^t, P).
//
// Matched pair (source S(k) = a_j, target T(l) = a_i) costs
// -log2(pi_j (M^t)_ij); a deleted source residue or inserted target residue
// costs -log2 P(residue). The first state is coded from the stationary
// distribution of the record's 3-state chain.

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "subinfo/core_types.hpp"
#include "subinfo/mml.hpp"

namespace subinfo::encoding {

// Sufficient statistics of one alignment record.
struct RecordCounts {
    Matrix20 pairs{};            // pairs[cell(target, source)]
    Vector20 inserted{};         // target residues in i columns
    Vector20 deleted{};          // source residues in d columns
    TransitionTable transitions{};  // counts [from][to]
    State first = State::Match;
    std::size_t length = 0;
};

RecordCounts count_record(const AlignmentRecord& rec);

// (n_mm, n_mi + n_md) and (n_ii + n_dd, n_im + n_dm, n_id + n_di); n_xy
// counts x -> y. Orders match TransitionParams::match_simplex/insert_simplex.
std::array<double, 2> match_transition_counts(const RecordCounts& c) noexcept;
std::array<double, 3> insert_transition_counts(const RecordCounts& c) noexcept;

// -log2(pi_j (M^t)_ij) for a set of times, each with probabilities floored
// at kProbabilityFloor. Immutable once built, so safe for concurrent reads.
class PowerTable {
public:
    // Every t in [1, 1000].
    explicit PowerTable(const StochasticMatrix& m);
    // Only the listed times (any order, duplicates allowed).
    PowerTable(const StochasticMatrix& m, std::span<const int> times);

    bool has(int t) const noexcept;
    const Matrix20& log_costs(int t) const;  // throws DomainError if absent
    const StochasticMatrix& matrix() const noexcept { return matrix_; }

private:
    void build(std::span<const int> sorted_times);
    StochasticMatrix matrix_;
    std::vector<int> slot_;  // kTimeBins entries; -1 when absent
    std::vector<Matrix20> costs_;
};

// -log2 P(a) per residue, floored.
Vector20 indel_costs(const IndelModel& p);

// Sum_j msglen_simplex_vector_uniform_prior(column j, column_counts[j]).
mml::MessageLength msglen_matrix(const StochasticMatrix& m, const Vector20& column_counts);

// Uniform-prior statement of P given the indel residue counts.
mml::MessageLength msglen_indel_model(const IndelModel& p, const Vector20& indel_counts);

// MML estimate of P from indel counts with alpha = 1.
IndelModel fit_indel_model(const Vector20& indel_counts);

mml::MessageLength msglen_alignment_states(std::span<const State> states,
                                           const TransitionParams& theta);

// From the sufficient statistics; equal to the per-column sum above.
double state_cost(const RecordCounts& c, const TransitionParams& theta);

mml::MessageLength msglen_sequences_given_alignment(const AlignmentRecord& rec,
                                                    const StochasticMatrix& m_t,
                                                    const IndelModel& p);

mml::MessageLength msglen_time(int t);

// Start-point Dirichlets used when no alpha file is given: match (18, 2),
// insert (6, 3.5, 0.5) in every bin.
TimeBinnedDirichlets default_dirichlets();

// I(Theta | alpha): curved form for the match (d = 2) and insert (d = 3)
// simplices, each with its own transition count.
double theta_cost(const RecordCounts& c, const TransitionParams& theta, const BinDirichlets& alpha);

// Theta from the MML estimate under the bin's Dirichlets.
TransitionParams estimate_theta(const RecordCounts& c, const BinDirichlets& alpha);

double match_cost(const RecordCounts& c, const Matrix20& log_costs);
double indel_cost(const RecordCounts& c, const Vector20& indel_log_costs);

struct RecordReport {
    std::string id;
    int t = 1;
    double p_mm = 0, p_ii = 0, p_mi = 0;
    double i_time = 0;
    double i_theta = 0;
    double i_states = 0;
    double i_match = 0;
    double i_insert = 0;
    double i_delete = 0;

    double total() const noexcept {
        return i_time + i_theta + i_states + i_match + i_insert + i_delete;
    }
};

struct EncodingReport {
    double i_matrix = 0;
    double i_indel_model = 0;
    double i_alphas = 0;
    std::size_t populated_bins = 0;
    std::vector<RecordReport> records;
    double total = 0;
};

// Every record needs a time and Theta in the bundle (same order as `data`).
// I(alpha) is charged for populated bins only.
EncodingReport total_message_length(const Benchmark& data, const ModelBundle& bundle,
                                    std::size_t threads = 0);

// As above with precomputed counts and a power table covering every time in
// the bundle.
EncodingReport total_message_length(const Benchmark& data, const std::vector<RecordCounts>& counts,
                                    const ModelBundle& bundle, const PowerTable& table,
                                    std::size_t threads = 0);

// Global observation counts used by I(M) and I(P).
Vector20 matrix_column_counts(const std::vector<RecordCounts>& counts);
Vector20 indel_residue_counts(const std::vector<RecordCounts>& counts);

std::vector<RecordCounts> count_all(const Benchmark& data, std::size_t threads = 0);

// Bits are rounded to 0.01 in both outputs.
std::string report_json(const EncodingReport& r);
std::string report_csv(const EncodingReport& r);

}  // namespace subinfo::encoding
