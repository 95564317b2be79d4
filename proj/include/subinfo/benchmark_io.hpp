#pragma once

// Benchmark files, descriptive statistics and synthetic benchmarks.
//
// A benchmark file is a sequence of 4-line records:
//   >id
//   source sequence S
//   target sequence T
//   alignment string A over {m, i, d}
// Blank lines between records are ignored. S or T may be an empty line when
// the alignment has no residues on that side.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "subinfo/core_types.hpp"
#include "subinfo/rng.hpp"

namespace subinfo::bench {

enum class InvalidRecordPolicy { Abort, Skip };

struct ParseOptions {
    InvalidRecordPolicy on_invalid = InvalidRecordPolicy::Abort;
    std::function<void(const std::string&)> warn;  // receives skip notices
};

Benchmark parse_benchmark(std::string_view contents, const std::string& source_name,
                          const ParseOptions& options = {});
Benchmark read_benchmark(const std::string& path, const ParseOptions& options = {});
std::string format_benchmark(const Benchmark& data);
void write_benchmark(const std::string& path, const Benchmark& data);

// 100 * identical matched columns / min(|S|, |T|).
double sequence_identity(const AlignmentRecord& rec);

struct LengthDistribution {
    enum class Kind { Geometric, Fixed };
    Kind kind = Kind::Geometric;
    double mean = 200.0;  // alignment columns
};

// Uniform over the listed times, or over [lo, hi] when the list is empty.
struct TimeDistribution {
    std::vector<int> choices;
    int lo = kMinTime;
    int hi = kMaxTime;
};

struct SynthConfig {
    std::size_t n_pairs = 0;
    LengthDistribution length;
    TimeDistribution time;
    std::string id_prefix = "syn";
    std::size_t threads = 0;
};

struct SyntheticBenchmark {
    Benchmark data;
    std::vector<int> times;
    std::vector<TransitionParams> thetas;
};

// Record r draws from rng.fork(r), so the output does not depend on the
// thread count.
SyntheticBenchmark generate_synthetic(const ModelBundle& bundle, const SynthConfig& cfg,
                                      const Rng& rng);

// One record of fixed time and Theta.
AlignmentRecord sample_record(const StochasticMatrix& m_t, const IndelModel& p,
                              const TransitionParams& theta, std::size_t columns, Rng& rng,
                              std::string id);

// Theta drawn from a bin's Dirichlets, kept strictly inside the domain.
TransitionParams sample_theta(const BinDirichlets& alpha, Rng& rng);

inline constexpr std::size_t kIdentityBins = 20;

struct BenchmarkStats {
    std::size_t n_pairs = 0;
    std::size_t n_match = 0;
    std::size_t n_insert = 0;
    std::size_t n_delete = 0;
    double avg_seq_identity = 0.0;  // percent
    std::array<std::size_t, kIdentityBins> identity_histogram{};  // 5% wide bins
};

// Records with an empty side count as 0% identity.
BenchmarkStats compute_stats(const Benchmark& data, std::size_t threads = 0);

std::string stats_json(const BenchmarkStats& s);
std::string stats_csv(const BenchmarkStats& s);

}  // namespace subinfo::bench
