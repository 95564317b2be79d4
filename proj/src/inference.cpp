#include "subinfo/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "subinfo/errors.hpp"
#include "subinfo/kernels.hpp"
#include "subinfo/mml.hpp"
#include "subinfo/parallel.hpp"
#include "subinfo/text.hpp"

namespace subinfo::inference {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinKappa = 0.01;
constexpr int kTimeWindow = 8;

bool metropolis_accept(double delta, double temperature, Rng& rng) {
    const double u = rng.uniform();
    if (delta < 0.0) return true;
    if (!std::isfinite(delta)) return false;
    return u < std::exp2(-delta / temperature);
}

// Lowercase keys mapped onto config members.
struct ConfigField {
    const char* key;
    void (*set)(SearchConfig&, std::string_view);
    std::string (*get)(const SearchConfig&);
};

#define SUBINFO_REAL_FIELD(name)                                                              \
    ConfigField {                                                                             \
        #name, [](SearchConfig& c, std::string_view v) { c.name = text::parse_double(v, #name); }, \
            [](const SearchConfig& c) { return text::format_double(c.name); }                 \
    }
#define SUBINFO_INT_FIELD(name, type)                                                         \
    ConfigField {                                                                             \
        #name,                                                                                \
            [](SearchConfig& c, std::string_view v) {                                         \
                c.name = static_cast<type>(text::parse_int(v, #name));                        \
            },                                                                                \
            [](const SearchConfig& c) { return std::to_string(c.name); }                      \
    }

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields = {
        SUBINFO_INT_FIELD(rng_seed, std::uint64_t),
        SUBINFO_REAL_FIELD(sa_temp_init),
        SUBINFO_REAL_FIELD(sa_cool),
        SUBINFO_INT_FIELD(sa_steps_per_temp, int),
        SUBINFO_REAL_FIELD(sa_temp_min),
        SUBINFO_REAL_FIELD(sa_kappa_init),
        SUBINFO_INT_FIELD(mcmc_iters_per_bin, int),
        SUBINFO_REAL_FIELD(mcmc_kappa_bar_match),
        SUBINFO_REAL_FIELD(mcmc_kappa_bar_insert),
        SUBINFO_REAL_FIELD(mcmc_delta_min),
        SUBINFO_REAL_FIELD(mcmc_delta_max),
        SUBINFO_REAL_FIELD(em_epsilon_bits),
        SUBINFO_INT_FIELD(em_max_iterations, int),
        SUBINFO_INT_FIELD(t_min, int),
        SUBINFO_INT_FIELD(t_max, int),
        SUBINFO_INT_FIELD(threads, std::size_t),
    };
    return fields;
}

#undef SUBINFO_REAL_FIELD
#undef SUBINFO_INT_FIELD

}  // namespace

void SearchConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw UsageError(std::string("search config: ") + what);
    };
    need(sa_temp_init > 0.0 && sa_temp_min > 0.0, "temperatures must be positive");
    need(sa_cool > 0.0 && sa_cool < 1.0, "sa_cool must lie in (0, 1)");
    need(sa_steps_per_temp >= 0, "sa_steps_per_temp must be >= 0");
    need(sa_kappa_init > 0.0, "sa_kappa_init must be positive");
    need(mcmc_iters_per_bin >= 0, "mcmc_iters_per_bin must be >= 0");
    need(mcmc_kappa_bar_match > 0.0 && mcmc_kappa_bar_insert > 0.0, "mcmc kappa bars must be positive");
    need(mcmc_delta_min > 0.0 && mcmc_delta_max >= mcmc_delta_min, "mcmc delta range invalid");
    need(em_epsilon_bits > 0.0, "em_epsilon_bits must be positive");
    need(em_max_iterations >= 1, "em_max_iterations must be >= 1");
    need(t_min >= kMinTime && t_max <= kMaxTime && t_min <= t_max, "t range must lie in [1, 1000]");
}

SearchConfig parse_search_config(std::string_view contents, const std::string& source_name,
                                 SearchConfig base) {
    std::size_t line_no = 0;
    for (auto line : text::split_lines(contents)) {
        ++line_no;
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(where + ": expected 'key = value'");
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        const auto& fields = config_fields();
        const auto it = std::find_if(fields.begin(), fields.end(),
                                     [&](const ConfigField& f) { return key == f.key; });
        if (it == fields.end()) throw ParseError(where + ": unknown key '" + std::string(key) + "'");
        try {
            it->set(base, value);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

std::string format_search_config(const SearchConfig& cfg) {
    std::string s;
    for (const auto& f : config_fields()) s += std::string(f.key) + " = " + f.get(cfg) + "\n";
    return s;
}

double time_objective(const encoding::RecordCounts& c, const encoding::PowerTable& table,
                      const Vector20& indel_log_costs, const TimeBinnedDirichlets& alphas, int t) {
    const auto& bin = alphas.at(t);
    const auto theta = encoding::estimate_theta(c, bin);
    return encoding::theta_cost(c, theta, bin) + encoding::state_cost(c, theta) +
           encoding::match_cost(c, table.log_costs(t)) + encoding::indel_cost(c, indel_log_costs);
}

TimeFit infer_time(const encoding::RecordCounts& c, const encoding::PowerTable& table,
                   const Vector20& indel_log_costs, const TimeBinnedDirichlets& alphas, int t_lo,
                   int t_hi) {
    check_time(t_lo);
    check_time(t_hi);
    if (t_lo > t_hi) throw DomainError("infer_time: empty time range");
    std::vector<double> memo(static_cast<std::size_t>(t_hi - t_lo + 1), kInf);
    std::vector<bool> seen(memo.size(), false);
    auto f = [&](int t) {
        const auto k = static_cast<std::size_t>(t - t_lo);
        if (!seen[k]) {
            memo[k] = time_objective(c, table, indel_log_costs, alphas, t);
            seen[k] = true;
        }
        return memo[k];
    };

    int lo = t_lo, hi = t_hi;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (f(mid) <= f(mid + 1)) hi = mid;
        else lo = mid + 1;
    }
    for (int t = std::max(t_lo, lo - kTimeWindow); t <= std::min(t_hi, lo + kTimeWindow); ++t) f(t);
    f(t_lo);
    f(t_hi);
    for (int t = 1; t <= t_hi; t *= 2)
        if (t >= t_lo) f(t);

    TimeFit best;
    best.objective = kInf;
    for (std::size_t k = 0; k < memo.size(); ++k)
        if (seen[k] && memo[k] < best.objective) {
            best.objective = memo[k];
            best.t = t_lo + static_cast<int>(k);
        }
    best.theta = encoding::estimate_theta(c, alphas.at(best.t));
    return best;
}

int infer_time(const AlignmentRecord& rec, const StochasticMatrix& m, const IndelModel& p,
               const TimeBinnedDirichlets& alphas) {
    const encoding::PowerTable table(m);
    return infer_time(encoding::count_record(rec), table, encoding::indel_costs(p), alphas).t;
}

DirichletParams perturb_dirichlet(const DirichletParams& alpha, StateKind kind,
                                  const SearchConfig& cfg, Rng& rng) {
    if (rng.bernoulli(0.5)) {
        const double kbar =
            kind == StateKind::Match ? cfg.mcmc_kappa_bar_match : cfg.mcmc_kappa_bar_insert;
        std::vector<double> a(alpha.mean());
        for (double& x : a) x *= kbar;
        const auto mean = sample_dirichlet(a, rng);
        return DirichletParams::from_kappa_mean(alpha.kappa(), mean);
    }
    const double delta = rng.uniform(cfg.mcmc_delta_min, cfg.mcmc_delta_max);
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double kappa = std::max(alpha.kappa() + sign * delta, kMinKappa);
    return DirichletParams::from_kappa_mean(kappa, alpha.mean());
}

double bin_objective(const std::vector<const encoding::RecordCounts*>& bin, const BinDirichlets& alpha) {
    if (bin.empty()) return 0.0;
    // The estimate must exist for a record with no transitions, since any
    // record may later be scored at this bin's time.
    if (alpha.match.kappa() <= 1.0 || alpha.insert.kappa() <= 1.5) return kInf;
    try {
        const double n = static_cast<double>(bin.size());
        double bits = mml::msglen_alpha(alpha.match, n, StateKind::Match).bits() +
                      mml::msglen_alpha(alpha.insert, n, StateKind::Insert).bits();
        for (const auto* c : bin) {
            const auto theta = encoding::estimate_theta(*c, alpha);
            bits += encoding::theta_cost(*c, theta, alpha) + encoding::state_cost(*c, theta);
        }
        return std::isfinite(bits) ? bits : kInf;
    } catch (const Error&) {
        return kInf;
    }
}

BinFit fit_bin_dirichlets(const std::vector<const encoding::RecordCounts*>& bin,
                          const BinDirichlets& alpha0, const SearchConfig& cfg, Rng& rng) {
    if (bin.empty()) throw DomainError("fit_bin_dirichlets: empty bin");
    BinDirichlets current = alpha0;
    double current_obj = bin_objective(bin, current);
    BinFit fit{alpha0, {}, current_obj, current_obj, {}, 0};
    fit.best_trace.reserve(static_cast<std::size_t>(cfg.mcmc_iters_per_bin));
    for (int it = 0; it < cfg.mcmc_iters_per_bin; ++it) {
        for (StateKind kind : {StateKind::Match, StateKind::Insert}) {
            BinDirichlets proposal = current;
            if (kind == StateKind::Match)
                proposal.match = perturb_dirichlet(current.match, kind, cfg, rng);
            else
                proposal.insert = perturb_dirichlet(current.insert, kind, cfg, rng);
            const double obj = bin_objective(bin, proposal);
            if (metropolis_accept(obj - current_obj, 1.0, rng)) {
                current = std::move(proposal);
                current_obj = obj;
                ++fit.accepted;
                if (current_obj < fit.objective) {
                    fit.objective = current_obj;
                    fit.alpha = current;
                }
            }
        }
        fit.best_trace.push_back(fit.objective);
    }
    fit.thetas.reserve(bin.size());
    for (const auto* c : bin) fit.thetas.push_back(encoding::estimate_theta(*c, fit.alpha));
    return fit;
}

std::vector<std::pair<int, Matrix20>> pairs_by_time(const std::vector<encoding::RecordCounts>& counts,
                                                    const std::vector<int>& times) {
    if (counts.size() != times.size())
        throw DomainError("pairs_by_time: one time per record required");
    std::map<int, Matrix20> agg;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        auto [it, inserted] = agg.try_emplace(times[r]);
        if (inserted) it->second.fill(0.0);
        for (std::size_t k = 0; k < kMatrixCells; ++k) it->second[k] += counts[r].pairs[k];
    }
    return {agg.begin(), agg.end()};
}

double matrix_objective(const StochasticMatrix& m, const Vector20& column_counts,
                        const std::vector<std::pair<int, Matrix20>>& by_time) {
    std::vector<int> ts;
    ts.reserve(by_time.size());
    for (const auto& [t, _] : by_time) ts.push_back(t);
    const encoding::PowerTable table(m, ts);
    double bits = encoding::msglen_matrix(m, column_counts).bits();
    for (const auto& [t, pairs] : by_time)
        bits += kernels::dot(pairs.data(), table.log_costs(t).data(), kMatrixCells);
    return bits;
}

SaResult fit_matrix_sa(const std::vector<encoding::RecordCounts>& counts, const ModelBundle& bundle,
                       const SearchConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto by_time = pairs_by_time(counts, bundle.times);
    const Vector20 column_counts = encoding::matrix_column_counts(counts);
    StochasticMatrix current = bundle.matrix;
    double current_obj = matrix_objective(current, column_counts, by_time);
    SaResult res{current, current_obj, current_obj, 0, 0};

    double kappa = cfg.sa_kappa_init;
    for (double temp = cfg.sa_temp_init; temp >= cfg.sa_temp_min;
         temp *= cfg.sa_cool, kappa /= cfg.sa_cool) {
        for (int step = 0; step < cfg.sa_steps_per_temp; ++step) {
            ++res.proposals;
            const std::size_t j = rng.categorical(current.stationary());
            std::vector<double> a(kAlphabetSize);
            for (std::size_t i = 0; i < kAlphabetSize; ++i)
                a[i] = std::max(kappa * current(i, j), 1e-300);
            const auto column = sample_dirichlet(a, rng);
            Matrix20 entries = current.entries();
            std::copy(column.begin(), column.end(), entries.begin() + static_cast<std::ptrdiff_t>(j * kAlphabetSize));
            double obj = kInf;
            std::optional<StochasticMatrix> proposal;
            try {
                proposal.emplace(StochasticMatrix::normalized(entries, &current.stationary()));
                obj = matrix_objective(*proposal, column_counts, by_time);
            } catch (const Error&) {
                obj = kInf;
            }
            if (proposal && metropolis_accept(obj - current_obj, temp, rng)) {
                current = std::move(*proposal);
                current_obj = obj;
                ++res.accepted;
                if (current_obj < res.objective) {
                    res.objective = current_obj;
                    res.matrix = current;
                }
            }
        }
    }
    return res;
}

StochasticMatrix fit_matrix_sa(const Benchmark& data, const ModelBundle& bundle,
                               const SearchConfig& cfg, Rng& rng) {
    return fit_matrix_sa(encoding::count_all(data, cfg.threads), bundle, cfg, rng).matrix;
}

void fit_times_and_thetas(const std::vector<encoding::RecordCounts>& counts,
                          const encoding::PowerTable& table, const IndelModel& p,
                          const TimeBinnedDirichlets& alphas, const SearchConfig& cfg,
                          std::vector<int>& times, std::vector<TransitionParams>& thetas) {
    const Vector20 indel = encoding::indel_costs(p);
    std::vector<TimeFit> fits(counts.size());
    parallel_for(
        counts.size(),
        [&](std::size_t r) { fits[r] = infer_time(counts[r], table, indel, alphas, cfg.t_min, cfg.t_max); },
        cfg.threads);
    times.clear();
    thetas.clear();
    for (const auto& f : fits) {
        times.push_back(f.t);
        thetas.push_back(f.theta);
    }
}

void fit_all_bins(const std::vector<encoding::RecordCounts>& counts, ModelBundle& bundle,
                  const SearchConfig& cfg, const Rng& rng) {
    if (counts.empty()) return;
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t r = 0; r < counts.size(); ++r) members[bundle.times[r]].push_back(r);
    std::vector<int> bins;
    for (const auto& [t, _] : members) bins.push_back(t);

    std::vector<std::optional<BinFit>> fits(bins.size());
    parallel_for(
        bins.size(),
        [&](std::size_t b) {
            const int t = bins[b];
            std::vector<const encoding::RecordCounts*> group;
            for (auto r : members.at(t)) group.push_back(&counts[r]);
            Rng stream = rng.fork(static_cast<std::uint64_t>(t));
            fits[b] = fit_bin_dirichlets(group, bundle.dirichlets.at(t), cfg, stream);
        },
        cfg.threads);

    std::vector<bool> populated(kTimeBins, false);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const int t = bins[b];
        bundle.dirichlets.at(t) = fits[b]->alpha;
        populated[static_cast<std::size_t>(t - kMinTime)] = true;
        const auto& rs = members.at(t);
        for (std::size_t k = 0; k < rs.size(); ++k) bundle.thetas[rs[k]] = fits[b]->thetas[k];
    }
    fill_empty_bins(bundle.dirichlets, populated);
}

encoding::EncodingReport encode_with_matrix(const Benchmark& data, const StochasticMatrix& m,
                                            const IndelModel& p, const TimeBinnedDirichlets& alphas,
                                            std::size_t threads) {
    const auto counts = encoding::count_all(data, threads);
    const encoding::PowerTable table(m);
    SearchConfig cfg;
    cfg.threads = threads;
    ModelBundle bundle{m, p, alphas, {}, {}, 0.0};
    fit_times_and_thetas(counts, table, p, alphas, cfg, bundle.times, bundle.thetas);
    return encoding::total_message_length(data, counts, bundle, table, threads);
}

EmResult run_em(const Benchmark& data, const ModelBundle& init, const SearchConfig& cfg,
                const CheckpointFn& checkpoint, const ProgressFn& progress) {
    cfg.validate();
    auto say = [&](const std::string& msg) {
        if (progress) progress(msg);
    };
    const auto counts = encoding::count_all(data, cfg.threads);
    auto total_of = [&](const ModelBundle& b) {
        const encoding::PowerTable table(b.matrix, b.times);
        const double total = encoding::total_message_length(data, counts, b, table, cfg.threads).total;
        if (!std::isfinite(total))
            throw NumericError("non-finite total message length during inference");
        return total;
    };

    ModelBundle best = init;
    best.indel = encoding::fit_indel_model(encoding::indel_residue_counts(counts));
    if (best.times.size() != data.size() || best.thetas.size() != data.size()) {
        say("fitting initial times");
        const encoding::PowerTable table(best.matrix);
        fit_times_and_thetas(counts, table, best.indel, best.dirichlets, cfg, best.times, best.thetas);
    }
    double best_total = total_of(best);
    best.total_message_length_bits = best_total;

    EmResult result{best, {best_total}, {}};
    say("start: " + text::format_fixed(best_total, 2) + " bits");
    const Rng master(cfg.rng_seed);
    for (int iter = 1; iter <= cfg.em_max_iterations; ++iter) {
        const Rng stream = master.fork(static_cast<std::uint64_t>(iter));
        ModelBundle candidate = best;

        Rng sa_rng = stream.fork(0);
        const auto sa = fit_matrix_sa(counts, candidate, cfg, sa_rng);
        candidate.matrix = sa.matrix;

        const encoding::PowerTable table(candidate.matrix);
        fit_times_and_thetas(counts, table, candidate.indel, candidate.dirichlets, cfg,
                             candidate.times, candidate.thetas);
        fit_all_bins(counts, candidate, cfg, stream.fork(1));

        const double total = total_of(candidate);
        EmIteration info{iter, total, total < best_total};
        double improvement = 0.0;
        if (info.accepted) {
            improvement = best_total - total;
            best = std::move(candidate);
            best_total = total;
            best.total_message_length_bits = best_total;
            result.trace.push_back(best_total);
        }
        result.iterations.push_back(info);
        say("iteration " + std::to_string(iter) + ": " + text::format_fixed(total, 2) + " bits" +
            (info.accepted ? "" : " (rejected)"));
        if (checkpoint) checkpoint(best, info);
        if (!info.accepted || improvement < cfg.em_epsilon_bits) break;
    }
    result.bundle = best;
    return result;
}

}  // namespace subinfo::inference
