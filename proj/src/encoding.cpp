#include "subinfo/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/kernels.hpp"
#include "subinfo/parallel.hpp"
#include "subinfo/text.hpp"

namespace subinfo::encoding {

namespace {

constexpr std::size_t N = kAlphabetSize;
constexpr int kSquarings = 10;  // 2^10 > kMaxTime

double surprisal(double p) { return -std::log2(std::max(p, kProbabilityFloor)); }

double round_bits(double x) { return std::round(x * 100.0) / 100.0; }

std::size_t idx(State s) { return static_cast<std::size_t>(s); }

}  // namespace

RecordCounts count_record(const AlignmentRecord& rec) {
    rec.validate();
    RecordCounts c;
    c.length = rec.states.size();
    c.first = rec.states.front();
    std::size_t k = 0, l = 0;
    for (std::size_t n = 0; n < rec.states.size(); ++n) {
        const State s = rec.states[n];
        switch (s) {
        case State::Match:
            c.pairs[cell(rec.target[l].index, rec.source[k].index)] += 1.0;
            ++k;
            ++l;
            break;
        case State::Insert:
            c.inserted[rec.target[l].index] += 1.0;
            ++l;
            break;
        case State::Delete:
            c.deleted[rec.source[k].index] += 1.0;
            ++k;
            break;
        }
        if (n > 0) c.transitions[idx(rec.states[n - 1])][idx(s)] += 1.0;
    }
    return c;
}

std::array<double, 2> match_transition_counts(const RecordCounts& c) noexcept {
    const auto& n = c.transitions;
    constexpr auto M = 0, I = 1, D = 2;
    return {n[M][M], n[M][I] + n[M][D]};
}

std::array<double, 3> insert_transition_counts(const RecordCounts& c) noexcept {
    const auto& n = c.transitions;
    constexpr auto M = 0, I = 1, D = 2;
    return {n[I][I] + n[D][D], n[I][M] + n[D][M], n[I][D] + n[D][I]};
}

PowerTable::PowerTable(const StochasticMatrix& m) : matrix_(m), slot_(kTimeBins, -1) {
    std::vector<int> all(kTimeBins);
    for (std::size_t k = 0; k < kTimeBins; ++k) all[k] = static_cast<int>(k) + kMinTime;
    build(all);
}

PowerTable::PowerTable(const StochasticMatrix& m, std::span<const int> times)
    : matrix_(m), slot_(kTimeBins, -1) {
    std::vector<int> ts(times.begin(), times.end());
    for (int t : ts) check_time(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    build(ts);
}

void PowerTable::build(std::span<const int> sorted_times) {
    // M^t is always assembled from the same binary expansion, so a given t
    // yields bit-identical costs whichever other times share the table.
    std::array<Matrix20, kSquarings> squares;
    squares[0] = matrix_.entries();
    for (int s = 1; s < kSquarings; ++s) {
        kernels::matmul20(squares[s - 1].data(), squares[s - 1].data(), squares[s].data());
        normalize_columns(squares[s], 0.0);
    }
    const Vector20& pi = matrix_.stationary();
    Vector20 pi_cost;
    for (std::size_t j = 0; j < N; ++j) pi_cost[j] = surprisal(pi[j]);
    costs_.resize(sorted_times.size());
    for (std::size_t n = 0; n < sorted_times.size(); ++n) {
        const int t = sorted_times[n];
        Matrix20 p{};
        bool have = false;
        for (int b = 0; b < kSquarings; ++b) {
            if (!((t >> b) & 1)) continue;
            if (!have) {
                p = squares[b];
                have = true;
            } else {
                Matrix20 tmp;
                kernels::matmul20(squares[b].data(), p.data(), tmp.data());
                p = tmp;
            }
        }
        normalize_columns(p, 0.0);
        Matrix20& out = costs_[n];
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t i = 0; i < N; ++i)
                out[cell(i, j)] = pi_cost[j] + surprisal(p[cell(i, j)]);
        slot_[static_cast<std::size_t>(t - kMinTime)] = static_cast<int>(n);
    }
}

bool PowerTable::has(int t) const noexcept {
    return t >= kMinTime && t <= kMaxTime && slot_[static_cast<std::size_t>(t - kMinTime)] >= 0;
}

const Matrix20& PowerTable::log_costs(int t) const {
    if (!has(t)) throw DomainError("power table has no entry for t = " + std::to_string(t));
    return costs_[static_cast<std::size_t>(slot_[static_cast<std::size_t>(t - kMinTime)])];
}

Vector20 indel_costs(const IndelModel& p) {
    Vector20 c;
    for (std::size_t i = 0; i < N; ++i) c[i] = surprisal(p[i]);
    return c;
}

mml::MessageLength msglen_matrix(const StochasticMatrix& m, const Vector20& column_counts) {
    mml::MessageLength total;
    std::vector<double> col(N);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < N; ++i) col[i] = std::max(m(i, j), kProbabilityFloor);
        mml::clamp_simplex(col);
        total += mml::msglen_simplex_vector_uniform_prior(col, column_counts[j]);
    }
    return total;
}

mml::MessageLength msglen_indel_model(const IndelModel& p, const Vector20& indel_counts) {
    double n = 0.0;
    for (double x : indel_counts) n += x;
    std::vector<double> theta(p.probs().begin(), p.probs().end());
    mml::clamp_simplex(theta);
    return mml::msglen_simplex_vector_uniform_prior(theta, n);
}

IndelModel fit_indel_model(const Vector20& indel_counts) {
    const std::vector<double> ones(N, 1.0);
    const auto theta = mml::mml_multinomial_estimate(indel_counts, DirichletParams(ones));
    Vector20 p;
    std::copy(theta.begin(), theta.end(), p.begin());
    return IndelModel(p);
}

mml::MessageLength msglen_alignment_states(std::span<const State> states,
                                           const TransitionParams& theta) {
    if (states.empty()) throw DomainError("msglen_alignment_states: empty state string");
    const auto table = derive_full_transitions(theta);
    const auto start = state_stationary(theta);
    auto cost = [](double p) {
        if (!(p > 0.0)) throw NumericError("zero-probability transition in state string");
        return -std::log2(p);
    };
    double bits = cost(start[idx(states[0])]);
    for (std::size_t n = 1; n < states.size(); ++n)
        bits += cost(table[idx(states[n - 1])][idx(states[n])]);
    return mml::MessageLength(bits);
}

double state_cost(const RecordCounts& c, const TransitionParams& theta) {
    const auto table = derive_full_transitions(theta);
    const auto start = state_stationary(theta);
    double bits = -std::log2(start[idx(c.first)]);
    for (std::size_t a = 0; a < kStateCount; ++a)
        for (std::size_t b = 0; b < kStateCount; ++b) {
            const double n = c.transitions[a][b];
            if (n == 0.0) continue;
            if (!(table[a][b] > 0.0))
                throw NumericError("zero-probability transition in state string");
            bits -= n * std::log2(table[a][b]);
        }
    return bits;
}

mml::MessageLength msglen_sequences_given_alignment(const AlignmentRecord& rec,
                                                    const StochasticMatrix& m_t,
                                                    const IndelModel& p) {
    rec.validate();
    const auto& pi = m_t.stationary();
    double bits = 0.0;
    std::size_t k = 0, l = 0;
    for (State s : rec.states) {
        switch (s) {
        case State::Match: {
            const auto j = rec.source[k++].index;
            const auto i = rec.target[l++].index;
            bits += surprisal(pi[j]) + surprisal(m_t(i, j));
            break;
        }
        case State::Insert: bits += surprisal(p[rec.target[l++].index]); break;
        case State::Delete: bits += surprisal(p[rec.source[k++].index]); break;
        }
    }
    return mml::MessageLength(bits);
}

mml::MessageLength msglen_time(int t) {
    check_time(t);
    return mml::MessageLength(std::log2(static_cast<double>(kTimeBins)));
}

TimeBinnedDirichlets default_dirichlets() {
    const double match[] = {18.0, 2.0};
    const double insert[] = {6.0, 3.5, 0.5};
    return TimeBinnedDirichlets(BinDirichlets{DirichletParams(match), DirichletParams(insert)});
}

double theta_cost(const RecordCounts& c, const TransitionParams& theta, const BinDirichlets& alpha) {
    const auto nm = match_transition_counts(c);
    const auto ni = insert_transition_counts(c);
    const auto ms = theta.match_simplex();
    const auto is = theta.insert_simplex();
    return mml::msglen_theta_given_alpha(ms, alpha.match, nm[0] + nm[1]).bits() +
           mml::msglen_theta_given_alpha(is, alpha.insert, ni[0] + ni[1] + ni[2]).bits();
}

TransitionParams estimate_theta(const RecordCounts& c, const BinDirichlets& alpha) {
    const auto nm = match_transition_counts(c);
    const auto ni = insert_transition_counts(c);
    const auto m = mml::mml_multinomial_estimate(nm, alpha.match);
    const auto i = mml::mml_multinomial_estimate(ni, alpha.insert);
    return TransitionParams::from_simplices(m, i);
}

double match_cost(const RecordCounts& c, const Matrix20& log_costs) {
    return kernels::dot(c.pairs.data(), log_costs.data(), kMatrixCells);
}

double indel_cost(const RecordCounts& c, const Vector20& indel_log_costs) {
    return kernels::dot(c.inserted.data(), indel_log_costs.data(), N) +
           kernels::dot(c.deleted.data(), indel_log_costs.data(), N);
}

Vector20 matrix_column_counts(const std::vector<RecordCounts>& counts) {
    Vector20 out{};
    for (const auto& c : counts)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t i = 0; i < N; ++i) out[j] += c.pairs[cell(i, j)];
    return out;
}

Vector20 indel_residue_counts(const std::vector<RecordCounts>& counts) {
    Vector20 out{};
    for (const auto& c : counts)
        for (std::size_t i = 0; i < N; ++i) out[i] += c.inserted[i] + c.deleted[i];
    return out;
}

std::vector<RecordCounts> count_all(const Benchmark& data, std::size_t threads) {
    std::vector<RecordCounts> out(data.size());
    parallel_for(data.size(), [&](std::size_t r) { out[r] = count_record(data[r]); }, threads);
    return out;
}

EncodingReport total_message_length(const Benchmark& data, const ModelBundle& bundle,
                                    std::size_t threads) {
    const auto counts = count_all(data, threads);
    const PowerTable table(bundle.matrix, bundle.times);
    return total_message_length(data, counts, bundle, table, threads);
}

EncodingReport total_message_length(const Benchmark& data, const std::vector<RecordCounts>& counts,
                                    const ModelBundle& bundle, const PowerTable& table,
                                    std::size_t threads) {
    if (bundle.times.size() != data.size() || bundle.thetas.size() != data.size() ||
        counts.size() != data.size())
        throw DomainError("incomplete model bundle: " + std::to_string(data.size()) +
                          " records but " + std::to_string(bundle.times.size()) + " times and " +
                          std::to_string(bundle.thetas.size()) + " transition parameter sets");
    EncodingReport report;
    report.i_matrix = msglen_matrix(bundle.matrix, matrix_column_counts(counts)).bits();
    report.i_indel_model = msglen_indel_model(bundle.indel, indel_residue_counts(counts)).bits();

    std::map<int, double> bin_sizes;
    for (int t : bundle.times) {
        check_time(t);
        bin_sizes[t] += 1.0;
    }
    for (const auto& [t, n] : bin_sizes) {
        const auto& a = bundle.dirichlets.at(t);
        report.i_alphas += mml::msglen_alpha(a.match, n, StateKind::Match).bits() +
                           mml::msglen_alpha(a.insert, n, StateKind::Insert).bits();
    }
    report.populated_bins = bin_sizes.size();

    const Vector20 indel = indel_costs(bundle.indel);
    report.records.resize(data.size());
    parallel_for(
        data.size(),
        [&](std::size_t r) {
            const auto& c = counts[r];
            const int t = bundle.times[r];
            const auto& theta = bundle.thetas[r];
            RecordReport& rr = report.records[r];
            rr.id = data[r].id;
            rr.t = t;
            rr.p_mm = theta.match_to_match();
            rr.p_ii = theta.insert_to_insert();
            rr.p_mi = theta.insert_to_match();
            rr.i_time = msglen_time(t).bits();
            rr.i_theta = theta_cost(c, theta, bundle.dirichlets.at(t));
            rr.i_states = state_cost(c, theta);
            rr.i_match = match_cost(c, table.log_costs(t));
            rr.i_insert = kernels::dot(c.inserted.data(), indel.data(), N);
            rr.i_delete = kernels::dot(c.deleted.data(), indel.data(), N);
        },
        threads);

    double total = report.i_matrix + report.i_indel_model + report.i_alphas;
    for (const auto& rr : report.records) total += rr.total();
    if (!std::isfinite(total)) throw NumericError("total message length is not finite");
    report.total = total;
    return report;
}

std::string report_json(const EncodingReport& r) {
    nlohmann::ordered_json j;
    j["total_bits"] = round_bits(r.total);
    j["i_matrix"] = round_bits(r.i_matrix);
    j["i_indel_model"] = round_bits(r.i_indel_model);
    j["i_alphas"] = round_bits(r.i_alphas);
    j["populated_bins"] = r.populated_bins;
    j["n_records"] = r.records.size();
    auto& recs = j["records"] = nlohmann::ordered_json::array();
    for (const auto& rr : r.records) {
        nlohmann::ordered_json o;
        o["id"] = rr.id;
        o["t"] = rr.t;
        o["theta"] = {{"p_mm", rr.p_mm}, {"p_ii", rr.p_ii}, {"p_mi", rr.p_mi}};
        o["i_time"] = round_bits(rr.i_time);
        o["i_theta"] = round_bits(rr.i_theta);
        o["i_states"] = round_bits(rr.i_states);
        o["i_match"] = round_bits(rr.i_match);
        o["i_insert"] = round_bits(rr.i_insert);
        o["i_delete"] = round_bits(rr.i_delete);
        o["total"] = round_bits(rr.total());
        recs.push_back(std::move(o));
    }
    return j.dump(2) + "\n";
}

std::string report_csv(const EncodingReport& r) {
    std::string s = "id,t,p_mm,p_ii,p_mi,i_time,i_theta,i_states,i_match,i_insert,i_delete,total\n";
    auto bits = [](double x) { return text::format_fixed(x, 2); };
    for (const auto& rr : r.records) {
        s += text::csv_field(rr.id) + ',' + std::to_string(rr.t) + ',' + text::format_double(rr.p_mm) + ',' +
             text::format_double(rr.p_ii) + ',' + text::format_double(rr.p_mi) + ',' +
             bits(rr.i_time) + ',' + bits(rr.i_theta) + ',' + bits(rr.i_states) + ',' +
             bits(rr.i_match) + ',' + bits(rr.i_insert) + ',' + bits(rr.i_delete) + ',' +
             bits(rr.total()) + '\n';
    }
    return s;
}

}  // namespace subinfo::encoding
