#include "subinfo/benchmark_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/markov.hpp"
#include "subinfo/parallel.hpp"
#include "subinfo/text.hpp"

namespace subinfo::bench {

namespace {

constexpr double kThetaFloor = 1e-10;

std::vector<double> floored_simplex(std::vector<double> v) {
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(x, kThetaFloor);
        sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
}

std::size_t draw_length(const LengthDistribution& d, Rng& rng) {
    if (d.kind == LengthDistribution::Kind::Fixed)
        return static_cast<std::size_t>(std::max(1.0, std::round(d.mean)));
    if (d.mean <= 1.0) return 1;
    // Geometric on {1, 2, ...} with the requested mean.
    const double q = 1.0 - 1.0 / d.mean;
    return 1 + static_cast<std::size_t>(std::floor(std::log(rng.uniform()) / std::log(q)));
}

int draw_time(const TimeDistribution& d, Rng& rng) {
    if (!d.choices.empty()) return d.choices[rng.uniform_index(d.choices.size())];
    return d.lo + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(d.hi - d.lo + 1)));
}

}  // namespace

Benchmark parse_benchmark(std::string_view contents, const std::string& source_name,
                          const ParseOptions& options) {
    const auto lines = text::split_lines(contents);
    Benchmark out;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (text::trim(lines[i]).empty()) {
            ++i;
            continue;
        }
        const std::size_t header_line = i + 1;
        const std::string where = source_name + ":" + std::to_string(header_line);
        const auto header = text::trim(lines[i]);
        if (header.front() != '>') throw ParseError(where + ": expected '>id' record header");
        if (i + 3 >= lines.size())
            throw ParseError(where + ": truncated record (need id, S, T and alignment lines)");

        AlignmentRecord rec;
        rec.id = std::string(text::trim(header.substr(1)));
        if (rec.id.empty()) throw ParseError(where + ": empty record id");
        auto field = [&](std::size_t offset, auto parse) {
            try {
                return parse(text::trim(lines[i + offset]));
            } catch (const ParseError& e) {
                throw ParseError(source_name + ":" + std::to_string(header_line + offset) +
                                 ": record '" + rec.id + "': " + e.what());
            }
        };
        rec.source = field(1, parse_sequence);
        rec.target = field(2, parse_sequence);
        rec.states = field(3, parse_states);
        i += 4;

        try {
            rec.validate();
        } catch (const DomainError& e) {
            if (options.on_invalid == InvalidRecordPolicy::Abort)
                throw ParseError(where + ": " + e.what());
            if (options.warn) options.warn(where + ": skipped: " + e.what());
            continue;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

Benchmark read_benchmark(const std::string& path, const ParseOptions& options) {
    return parse_benchmark(text::read_file(path), path, options);
}

std::string format_benchmark(const Benchmark& data) {
    std::string s;
    for (const auto& rec : data) {
        s += '>' + rec.id + '\n';
        s += to_string(rec.source) + '\n';
        s += to_string(rec.target) + '\n';
        s += to_string(rec.states) + '\n';
    }
    return s;
}

void write_benchmark(const std::string& path, const Benchmark& data) {
    text::write_file(path, format_benchmark(data));
}

double sequence_identity(const AlignmentRecord& rec) {
    const std::size_t shorter = std::min(rec.source.size(), rec.target.size());
    if (shorter == 0)
        throw DomainError("record '" + rec.id + "': identity undefined for an empty sequence");
    std::size_t s = 0, t = 0, same = 0;
    for (auto st : rec.states) {
        switch (st) {
        case State::Match:
            same += rec.source[s] == rec.target[t] ? 1 : 0;
            ++s;
            ++t;
            break;
        case State::Insert: ++t; break;
        case State::Delete: ++s; break;
        }
    }
    return 100.0 * static_cast<double>(same) / static_cast<double>(shorter);
}

TransitionParams sample_theta(const BinDirichlets& alpha, Rng& rng) {
    const auto match = floored_simplex(sample_dirichlet(alpha.match, rng));
    const auto insert = floored_simplex(sample_dirichlet(alpha.insert, rng));
    return TransitionParams::from_simplices(match, insert);
}

AlignmentRecord sample_record(const StochasticMatrix& m_t, const IndelModel& p,
                              const TransitionParams& theta, std::size_t columns, Rng& rng,
                              std::string id) {
    const auto trans = derive_full_transitions(theta);
    const auto start = state_stationary(theta);
    AlignmentRecord rec;
    rec.id = std::move(id);
    rec.states.reserve(columns);
    auto residue = [](std::size_t k) { return AminoAcid{static_cast<std::uint8_t>(k)}; };
    State s = static_cast<State>(rng.categorical(start));
    for (std::size_t c = 0; c < columns; ++c) {
        if (c > 0) s = static_cast<State>(rng.categorical(trans[static_cast<std::size_t>(s)]));
        rec.states.push_back(s);
        switch (s) {
        case State::Match: {
            const std::size_t j = rng.categorical(m_t.stationary());
            rec.source.push_back(residue(j));
            rec.target.push_back(residue(rng.categorical(m_t.column(j))));
            break;
        }
        case State::Insert: rec.target.push_back(residue(rng.categorical(p.probs()))); break;
        case State::Delete: rec.source.push_back(residue(rng.categorical(p.probs()))); break;
        }
    }
    return rec;
}

SyntheticBenchmark generate_synthetic(const ModelBundle& bundle, const SynthConfig& cfg,
                                      const Rng& rng) {
    for (int t : cfg.time.choices) check_time(t);
    if (cfg.time.choices.empty()) {
        check_time(cfg.time.lo);
        check_time(cfg.time.hi);
        if (cfg.time.lo > cfg.time.hi) throw DomainError("synthetic time range is empty");
    }
    if (!(cfg.length.mean > 0.0)) throw DomainError("synthetic mean length must be positive");

    const std::size_t n = cfg.n_pairs;
    std::vector<Rng> streams;
    std::vector<int> times(n);
    streams.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        streams.push_back(rng.fork(r));
        times[r] = draw_time(cfg.time, streams.back());
    }

    std::vector<int> distinct(times);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::optional<StochasticMatrix>> powers(distinct.size());
    parallel_for(
        distinct.size(),
        [&](std::size_t k) { powers[k] = markov::matrix_power(bundle.matrix, distinct[k]); },
        cfg.threads);
    auto power_of = [&](int t) -> const StochasticMatrix& {
        const auto k = std::lower_bound(distinct.begin(), distinct.end(), t) - distinct.begin();
        return *powers[static_cast<std::size_t>(k)];
    };

    const int width = std::max<int>(1, static_cast<int>(std::to_string(n).size()));
    std::vector<std::optional<AlignmentRecord>> recs(n);
    std::vector<std::optional<TransitionParams>> thetas(n);
    parallel_for(
        n,
        [&](std::size_t r) {
            Rng& g = streams[r];
            thetas[r] = sample_theta(bundle.dirichlets.at(times[r]), g);
            const std::size_t columns = draw_length(cfg.length, g);
            std::string num = std::to_string(r + 1);
            num.insert(0, static_cast<std::size_t>(width) - num.size(), '0');
            recs[r] = sample_record(power_of(times[r]), bundle.indel, *thetas[r], columns, g,
                                    cfg.id_prefix + num);
        },
        cfg.threads);

    SyntheticBenchmark out;
    out.times = std::move(times);
    out.data.reserve(n);
    out.thetas.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        out.data.push_back(std::move(*recs[r]));
        out.thetas.push_back(*thetas[r]);
    }
    return out;
}

BenchmarkStats compute_stats(const Benchmark& data, std::size_t threads) {
    std::vector<double> identity(data.size(), 0.0);
    parallel_for(
        data.size(),
        [&](std::size_t r) {
            const auto& rec = data[r];
            if (!rec.source.empty() && !rec.target.empty()) identity[r] = sequence_identity(rec);
        },
        threads);

    BenchmarkStats s;
    s.n_pairs = data.size();
    double sum = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (auto st : data[r].states) {
            switch (st) {
            case State::Match: ++s.n_match; break;
            case State::Insert: ++s.n_insert; break;
            case State::Delete: ++s.n_delete; break;
            }
        }
        sum += identity[r];
        const auto bin = std::min<std::size_t>(kIdentityBins - 1,
                                               static_cast<std::size_t>(identity[r] / 5.0));
        ++s.identity_histogram[bin];
    }
    if (!data.empty()) s.avg_seq_identity = sum / static_cast<double>(data.size());
    return s;
}

std::string stats_json(const BenchmarkStats& s) {
    nlohmann::ordered_json j;
    j["n_pairs"] = s.n_pairs;
    j["n_match"] = s.n_match;
    j["n_insert"] = s.n_insert;
    j["n_delete"] = s.n_delete;
    j["avg_seq_identity"] = std::round(s.avg_seq_identity * 100.0) / 100.0;
    auto& h = j["identity_histogram"] = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < kIdentityBins; ++b)
        h.push_back({{"lo", 5 * b}, {"hi", 5 * (b + 1)}, {"count", s.identity_histogram[b]}});
    return j.dump(2) + "\n";
}

std::string stats_csv(const BenchmarkStats& s) {
    std::string head = "n_pairs,n_match,n_insert,n_delete,avg_seq_identity";
    std::string row = std::to_string(s.n_pairs) + ',' + std::to_string(s.n_match) + ',' +
                      std::to_string(s.n_insert) + ',' + std::to_string(s.n_delete) + ',' +
                      text::format_fixed(s.avg_seq_identity, 2);
    for (std::size_t b = 0; b < kIdentityBins; ++b) {
        head += ",identity_" + std::to_string(5 * b) + "_" + std::to_string(5 * (b + 1));
        row += ',' + std::to_string(s.identity_histogram[b]);
    }
    return head + '\n' + row + '\n';
}

}  // namespace subinfo::bench
