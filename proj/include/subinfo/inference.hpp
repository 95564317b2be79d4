#pragma once

// Alternating optimisation of the model bundle: per-record time search,
// per-bin Dirichlet Metropolis chains, simulated annealing over the matrix
// and the outer loop that ties them together.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "subinfo/core_types.hpp"
#include "subinfo/encoding.hpp"
#include "subinfo/rng.hpp"

namespace subinfo::inference {

struct SearchConfig {
    std::uint64_t rng_seed = 0;
    double sa_temp_init = 10000.0;
    double sa_cool = 0.88;
    int sa_steps_per_temp = 500;
    double sa_temp_min = 0.0001;
    double sa_kappa_init = 1000000.0;
    int mcmc_iters_per_bin = 2000;
    double mcmc_kappa_bar_match = 10000.0;
    double mcmc_kappa_bar_insert = 1000.0;
    double mcmc_delta_min = 0.1;
    double mcmc_delta_max = 10.0;
    double em_epsilon_bits = 1.0;
    int em_max_iterations = 100;
    int t_min = kMinTime;
    int t_max = kMaxTime;
    std::size_t threads = 0;  // 0 = default worker count

    void validate() const;
};

// Flat `key = value` lines ('#' starts a comment). Unknown keys and
// malformed values are parse errors. Keys not present keep `base` values.
SearchConfig parse_search_config(std::string_view contents, const std::string& source_name,
                                 SearchConfig base = {});
std::string format_search_config(const SearchConfig& cfg);

struct TimeFit {
    int t = 1;
    double objective = 0.0;  // bits, excluding the constant I(t)
    TransitionParams theta{0.5, 0.25, 0.25};
};

// I(Theta(t) | alpha(t)) + I(A | Theta(t)) + matched-pair + indel bits at t,
// with Theta(t) the MML estimate under the Dirichlets of bin t.
double time_objective(const encoding::RecordCounts& c, const encoding::PowerTable& table,
                      const Vector20& indel_log_costs, const TimeBinnedDirichlets& alphas, int t);

// Gradient bisection on [t_lo, t_hi], then a +-8 window around the result,
// every probed pivot, both ends and the powers of two; best seen wins, ties
// to the smaller t. The table must hold every t in the range.
TimeFit infer_time(const encoding::RecordCounts& c, const encoding::PowerTable& table,
                   const Vector20& indel_log_costs, const TimeBinnedDirichlets& alphas,
                   int t_lo = kMinTime, int t_hi = kMaxTime);

int infer_time(const AlignmentRecord& rec, const StochasticMatrix& m, const IndelModel& p,
               const TimeBinnedDirichlets& alphas);

// Half the time: mean ~ Dir(kappa_bar * mean), kappa kept. Otherwise kappa
// moves by +-delta, delta ~ U(delta_min, delta_max), floored at 0.01.
DirichletParams perturb_dirichlet(const DirichletParams& alpha, StateKind kind,
                                  const SearchConfig& cfg, Rng& rng);

// I(alpha) + sum over the bin of I(Theta_r | alpha) + I(A_r | Theta_r), with
// each Theta_r re-estimated under alpha. +inf if alpha is numerically unusable
// or if kappa <= d/2 for either Dirichlet.
double bin_objective(const std::vector<const encoding::RecordCounts*>& bin, const BinDirichlets& alpha);

struct BinFit {
    BinDirichlets alpha;
    std::vector<TransitionParams> thetas;
    double initial_objective = 0.0;
    double objective = 0.0;
    std::vector<double> best_trace;  // running best after each iteration
    std::size_t accepted = 0;
};

BinFit fit_bin_dirichlets(const std::vector<const encoding::RecordCounts*>& bin,
                          const BinDirichlets& alpha0, const SearchConfig& cfg, Rng& rng);

// Terms of the total that depend on the matrix when times are fixed:
// I(M) + matched-pair bits.
double matrix_objective(const StochasticMatrix& m, const Vector20& column_counts,
                        const std::vector<std::pair<int, Matrix20>>& pairs_by_time);

std::vector<std::pair<int, Matrix20>> pairs_by_time(const std::vector<encoding::RecordCounts>& counts,
                                                    const std::vector<int>& times);

struct SaResult {
    StochasticMatrix matrix;
    double initial_objective = 0.0;
    double objective = 0.0;
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

SaResult fit_matrix_sa(const std::vector<encoding::RecordCounts>& counts, const ModelBundle& bundle,
                       const SearchConfig& cfg, Rng& rng);

StochasticMatrix fit_matrix_sa(const Benchmark& data, const ModelBundle& bundle,
                               const SearchConfig& cfg, Rng& rng);

// Times and Theta for every record under fixed M, P and alpha.
void fit_times_and_thetas(const std::vector<encoding::RecordCounts>& counts,
                          const encoding::PowerTable& table, const IndelModel& p,
                          const TimeBinnedDirichlets& alphas, const SearchConfig& cfg,
                          std::vector<int>& times, std::vector<TransitionParams>& thetas);

// Refits every populated bin; empty bins copy the nearest populated one.
// Theta is replaced by the per-bin estimates. Bin b uses rng.fork(b).
void fit_all_bins(const std::vector<encoding::RecordCounts>& counts, ModelBundle& bundle,
                  const SearchConfig& cfg, const Rng& rng);

// Encodes a benchmark under a fixed matrix: times and Theta are fitted for
// every record, then the full report is computed. Shared by encode and rank.
encoding::EncodingReport encode_with_matrix(const Benchmark& data, const StochasticMatrix& m,
                                            const IndelModel& p, const TimeBinnedDirichlets& alphas,
                                            std::size_t threads = 0);

struct EmIteration {
    int iteration = 0;
    double total_bits = 0.0;
    bool accepted = false;
};

struct EmResult {
    ModelBundle bundle;
    std::vector<double> trace;  // totals of the start and of each accepted iteration
    std::vector<EmIteration> iterations;
};

using CheckpointFn = std::function<void(const ModelBundle& best, const EmIteration&)>;
using ProgressFn = std::function<void(const std::string&)>;

// P is fitted once from the indel counts. If `init` lacks times/thetas they
// are fitted first. Never returns a bundle worse than its start.
EmResult run_em(const Benchmark& data, const ModelBundle& init, const SearchConfig& cfg,
                const CheckpointFn& checkpoint = {}, const ProgressFn& progress = {});

}  // namespace subinfo::inference
