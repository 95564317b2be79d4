#include "subinfo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "subinfo/benchmark_io.hpp"
#include "subinfo/bundle_io.hpp"
#include "subinfo/encoding.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/inference.hpp"
#include "subinfo/markov.hpp"
#include "subinfo/matrix_io.hpp"
#include "subinfo/parallel.hpp"
#include "subinfo/text.hpp"

namespace subinfo::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::size_t threads = 0;
    bool quiet = false;

    void note(const std::string& msg) const {
        if (!quiet) err << msg << '\n';
    }
};

void emit(const Context& ctx, const std::string& path, const std::string& contents) {
    if (path == "-") ctx.out << contents;
    else text::write_file(path, contents);
}

bool wants_csv(const std::string& format, const std::string& path) {
    if (format == "csv") return true;
    if (format == "json") return false;
    return fs::path(path).extension() == ".csv";
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

// Options for reading a matrix that may hold log-odds scores.
struct MatrixInput {
    std::string scale_text;
    std::string freqs_path;

    std::optional<double> scale() const {
        if (scale_text.empty()) return std::nullopt;
        return text::parse_double(scale_text, "--input-scale");
    }
    std::optional<Vector20> freqs() const {
        if (freqs_path.empty()) return std::nullopt;
        return io::read_frequencies(freqs_path);
    }
};

markov::BaseMatrixResult convert_scores(const io::MatrixFile& file, const std::string& path,
                                        std::optional<double> scale,
                                        const std::optional<Vector20>& freqs, const Context& ctx) {
    const auto sc = io::to_scoring(file, scale, path);
    const auto cond = markov::logodds_to_conditional(sc, freqs);
    if (cond.max_column_drift > 0.01)
        ctx.note(path + ": columns drift up to " + text::format_double(cond.max_column_drift) +
                 " from 1 before renormalisation");
    auto base = markov::find_base_matrix(cond.entries);
    for (const auto& w : base.warnings) ctx.note(path + ": " + w);
    return base;
}

// Conditional matrices are used as they are; log-odds matrices are converted
// to their base matrix first.
StochasticMatrix load_matrix(const std::string& path, const MatrixInput& in, const Context& ctx) {
    const auto file = io::read_matrix(path);
    if (file.kind == io::MatrixKind::Conditional) return io::to_stochastic(file, path);
    auto base = convert_scores(file, path, in.scale(), in.freqs(), ctx);
    ctx.note(path + ": converted log-odds scores, k = " + std::to_string(base.k));
    return base.matrix;
}

TimeBinnedDirichlets load_alphas(const std::string& path) {
    return path.empty() ? encoding::default_dirichlets() : io::read_alphas(path);
}

bench::ParseOptions parse_options(bool skip_invalid, const Context& ctx) {
    bench::ParseOptions o;
    o.on_invalid = skip_invalid ? bench::InvalidRecordPolicy::Skip : bench::InvalidRecordPolicy::Abort;
    o.warn = [&ctx](const std::string& w) { ctx.note(w); };
    return o;
}

IndelModel choose_indel(const std::string& source, const std::string& file, const Benchmark& data,
                        const StochasticMatrix& m, std::size_t threads) {
    if (source == "stationary") return IndelModel(m.stationary());
    if (source == "file") {
        if (file.empty()) throw UsageError("--indel-source file needs --indel-file");
        return IndelModel(io::read_frequencies(file));
    }
    const auto counts = encoding::count_all(data, threads);
    return encoding::fit_indel_model(encoding::indel_residue_counts(counts));
}

// ---- convert ----------------------------------------------------------------

struct ConvertArgs {
    std::string scores, out, freqs;
    std::string scale;
};

int cmd_convert(const ConvertArgs& a, const Context& ctx) {
    const auto file = io::read_matrix(a.scores);
    if (file.kind != io::MatrixKind::LogOdds)
        throw UsageError(a.scores + ": expected a log-odds matrix ('# type: logodds')");
    std::optional<double> scale;
    if (!a.scale.empty()) scale = text::parse_double(a.scale, "--scale");
    std::optional<Vector20> freqs;
    if (!a.freqs.empty()) freqs = io::read_frequencies(a.freqs);
    const auto base = convert_scores(file, a.scores, scale, freqs, ctx);

    auto outfile = io::from_stochastic(base.matrix);
    outfile.metadata = {{"source", fs::path(a.scores).filename().string()},
                        {"k", std::to_string(base.k)},
                        {"expected_change", text::format_double(base.expected_change)},
                        {"clipped_mass", text::format_double(base.clipped_mass)}};
    emit(ctx, a.out, io::format_matrix(outfile));

    ordered_json j;
    j["k"] = base.k;
    j["expected_change"] = base.expected_change;
    j["clipped_mass"] = base.clipped_mass;
    j["max_column_clipped"] = base.max_column_clipped;
    j["degenerate"] = base.degenerate;
    j["warnings"] = base.warnings;
    if (a.out != "-") ctx.out << j.dump(2) << '\n';
    return 0;
}

// ---- encode -----------------------------------------------------------------

struct EncodeArgs {
    std::string benchmark, matrix, alphas, out, format = "auto";
    std::string indel_source = "fit", indel_file;
    bool skip_invalid = false;
    MatrixInput input;
};

int cmd_encode(const EncodeArgs& a, const Context& ctx) {
    const auto data = bench::read_benchmark(a.benchmark, parse_options(a.skip_invalid, ctx));
    const auto m = load_matrix(a.matrix, a.input, ctx);
    const auto alphas = load_alphas(a.alphas);
    const auto p = choose_indel(a.indel_source, a.indel_file, data, m, ctx.threads);
    const auto report = inference::encode_with_matrix(data, m, p, alphas, ctx.threads);
    emit(ctx, a.out, wants_csv(a.format, a.out) ? encoding::report_csv(report) : encoding::report_json(report));
    ctx.note(a.benchmark + ": " + text::format_fixed(report.total, 2) + " bits over " +
             std::to_string(data.size()) + " records");
    return 0;
}

// ---- infer ------------------------------------------------------------------

struct InferArgs {
    std::string benchmark, init_matrix, init_alphas, config, resume, out;
    std::uint64_t seed = 0;
    bool skip_invalid = false;
    MatrixInput input;
};

int cmd_infer(const InferArgs& a, const Context& ctx) {
    inference::SearchConfig cfg;
    if (!a.config.empty()) cfg = inference::parse_search_config(text::read_file(a.config), a.config);
    cfg.rng_seed = a.seed;
    cfg.threads = ctx.threads;
    cfg.validate();

    const auto data = bench::read_benchmark(a.benchmark, parse_options(a.skip_invalid, ctx));
    ModelBundle init = a.resume.empty()
                           ? ModelBundle{load_matrix(a.init_matrix, a.input, ctx), IndelModel::uniform(),
                                         load_alphas(a.init_alphas), {}, {}, 0.0}
                           : io::read_bundle(a.resume);
    if (!a.resume.empty() && init.times.size() != data.size()) {
        ctx.note(a.resume + ": record count differs from the benchmark; refitting times");
        init.times.clear();
        init.thetas.clear();
    }

    fs::create_directories(a.out);
    const auto dir = fs::path(a.out);
    auto path = [&](const char* name) { return (dir / name).string(); };
    text::write_file(path("config.txt"), inference::format_search_config(cfg));

    std::string trace = "iteration,total_bits,accepted\n";
    auto checkpoint = [&](const ModelBundle& best, const inference::EmIteration& it) {
        io::write_bundle(path("checkpoint.json"), best);
        trace += std::to_string(it.iteration) + ',' + text::format_fixed(it.total_bits, 2) + ',' +
                 (it.accepted ? "1" : "0") + '\n';
    };
    auto progress = [&](const std::string& msg) { ctx.note(msg); };

    auto res = [&] {
        try {
            return inference::run_em(data, init, cfg, checkpoint, progress);
        } catch (const NumericError& e) {
            std::string dump = std::string("error: ") + e.what() + "\n";
            dump += "last checkpoint: " + path("checkpoint.json") + "\n\n" + inference::format_search_config(cfg);
            text::write_file(path("diagnostic.txt"), dump);
            throw;
        }
    }();

    trace.insert(trace.find('\n') + 1,
                 "0," + text::format_fixed(res.trace.front(), 2) + ",1\n");
    text::write_file(path("trace.csv"), trace);
    io::write_bundle(path("bundle.json"), res.bundle);
    auto mf = io::from_stochastic(res.bundle.matrix);
    mf.metadata = {{"total_bits", text::format_fixed(res.bundle.total_message_length_bits, 2)}};
    io::write_matrix(path("matrix.txt"), mf);
    io::write_alphas(path("alphas.txt"), res.bundle.dirichlets);
    const auto report = encoding::total_message_length(data, res.bundle, ctx.threads);
    text::write_file(path("report.json"), encoding::report_json(report));
    ctx.note("final: " + text::format_fixed(res.bundle.total_message_length_bits, 2) + " bits");
    return 0;
}

// ---- rank -------------------------------------------------------------------

struct RankArgs {
    std::vector<std::string> benchmarks, matrices;
    std::string alphas, out, indel_source = "fit", indel_file;
    bool skip_invalid = false;
    MatrixInput input;
};

int cmd_rank(const RankArgs& a, const Context& ctx) {
    auto unique_names = [](const std::vector<std::string>& paths, const char* what) {
        std::vector<std::string> names;
        for (const auto& p : paths) names.push_back(stem(p));
        auto sorted = names;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw UsageError(std::string("duplicate ") + what + " file names");
        return names;
    };
    const auto mnames = unique_names(a.matrices, "matrix");
    const auto bnames = unique_names(a.benchmarks, "benchmark");
    std::vector<StochasticMatrix> ms;
    for (const auto& p : a.matrices) ms.push_back(load_matrix(p, a.input, ctx));
    const auto alphas = load_alphas(a.alphas);

    const std::size_t nm = ms.size(), nb = a.benchmarks.size();
    std::vector<std::vector<double>> bits(nm, std::vector<double>(nb));
    std::vector<std::vector<int>> rank(nm, std::vector<int>(nb));
    for (std::size_t b = 0; b < nb; ++b) {
        const auto data = bench::read_benchmark(a.benchmarks[b], parse_options(a.skip_invalid, ctx));
        for (std::size_t m = 0; m < nm; ++m) {
            const auto p = choose_indel(a.indel_source, a.indel_file, data, ms[m], ctx.threads);
            bits[m][b] = inference::encode_with_matrix(data, ms[m], p, alphas, ctx.threads).total;
        }
        std::vector<std::size_t> order(nm);
        for (std::size_t m = 0; m < nm; ++m) order[m] = m;
        auto shown = [&](std::size_t m) { return std::round(bits[m][b] * 100.0); };
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (shown(x) != shown(y)) return shown(x) < shown(y);
            return mnames[x] < mnames[y];
        });
        for (std::size_t r = 0; r < nm; ++r) {
            rank[order[r]][b] = static_cast<int>(r + 1);
            if (r > 0 && shown(order[r]) == shown(order[r - 1]))
                ctx.note(bnames[b] + ": tie between " + mnames[order[r - 1]] + " and " +
                         mnames[order[r]] + ", broken by name");
        }
    }

    std::vector<int> ranksum(nm, 0);
    for (std::size_t m = 0; m < nm; ++m)
        for (int r : rank[m]) ranksum[m] += r;
    std::vector<std::size_t> rows(nm);
    for (std::size_t m = 0; m < nm; ++m) rows[m] = m;
    std::sort(rows.begin(), rows.end(), [&](std::size_t x, std::size_t y) {
        if (ranksum[x] != ranksum[y]) return ranksum[x] < ranksum[y];
        return mnames[x] < mnames[y];
    });

    std::string csv = "matrix";
    for (const auto& b : bnames) csv += ',' + text::csv_field(b + "_bits") + ',' + text::csv_field(b + "_rank");
    csv += ",ranksum\n";
    for (auto m : rows) {
        csv += text::csv_field(mnames[m]);
        for (std::size_t b = 0; b < nb; ++b)
            csv += ',' + text::format_fixed(bits[m][b], 2) + ',' + std::to_string(rank[m][b]);
        csv += ',' + std::to_string(ranksum[m]) + '\n';
    }
    emit(ctx, a.out, csv);
    return 0;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
    std::string matrix, out, mode = "conditional";
    int expected_change = 0, convergence = 0, logodds = 0;
    std::vector<std::string> kl;
    std::string scale;
    MatrixInput input;
};

int cmd_analyze(const AnalyzeArgs& a, const Context& ctx) {
    const int chosen = (a.expected_change > 0) + (a.convergence > 0) + (a.logodds > 0) + !a.kl.empty();
    if (chosen != 1)
        throw UsageError("analyze needs exactly one of --expected-change, --kl, --convergence, --logodds");
    const auto m = load_matrix(a.matrix, a.input, ctx);
    std::string s;

    if (a.expected_change > 0) {
        check_time(a.expected_change);
        const auto curve = markov::expected_change_curve(m, a.expected_change);
        s = "t,expected_change\n";
        for (std::size_t t = 0; t < curve.size(); ++t)
            s += std::to_string(t + 1) + ',' + text::format_double(curve[t]) + '\n';
    } else if (a.convergence > 0) {
        check_time(a.convergence);
        const auto series = markov::column_convergence_curve(m, a.convergence);
        s = "t";
        for (char c : kCanonicalOrder) s += std::string(",") + c;
        s += '\n';
        for (int t = 0; t < a.convergence; ++t) {
            s += std::to_string(t + 1);
            for (std::size_t j = 0; j < kAlphabetSize; ++j)
                s += ',' + text::format_double(series[j][static_cast<std::size_t>(t)]);
            s += '\n';
        }
    } else if (a.logodds > 0) {
        if (a.scale.empty()) throw UsageError("--logodds needs --scale");
        const double scale = text::parse_double(a.scale, "--scale");
        const auto mt = markov::matrix_power(m, a.logodds);
        auto f = io::from_scoring(markov::conditional_to_logodds(mt.entries(), scale, m.stationary()));
        f.metadata = {{"t", std::to_string(a.logodds)}};
        s = io::format_matrix(f);
    } else {
        if (a.mode != "joint" && a.mode != "conditional")
            throw UsageError("--mode must be joint or conditional");
        const auto mode = a.mode == "joint" ? markov::KlMode::Joint : markov::KlMode::Conditional;
        std::vector<std::string> names = {stem(a.matrix)};
        std::vector<StochasticMatrix> all = {m};
        for (const auto& p : a.kl) {
            names.push_back(stem(p));
            all.push_back(load_matrix(p, a.input, ctx));
        }
        s = "matrix";
        for (const auto& n : names) s += ',' + text::csv_field(n);
        s += '\n';
        for (std::size_t x = 0; x < all.size(); ++x) {
            s += text::csv_field(names[x]);
            for (std::size_t y = 0; y < all.size(); ++y)
                s += ',' + text::format_double(markov::kl_divergence(all[x], all[y], mode));
            s += '\n';
        }
    }
    emit(ctx, a.out, s);
    return 0;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string matrix, alphas, out, truth, indel_file;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double mean_length = 200.0;
    bool fixed_length = false;
    std::vector<int> times;
    int t_min = kMinTime, t_max = kMaxTime;
    MatrixInput input;
};

int cmd_synth(const SynthArgs& a, const Context& ctx) {
    const auto m = load_matrix(a.matrix, a.input, ctx);
    const IndelModel p = a.indel_file.empty() ? IndelModel(m.stationary())
                                              : IndelModel(io::read_frequencies(a.indel_file));
    const ModelBundle b{m, p, load_alphas(a.alphas), {}, {}, 0.0};
    bench::SynthConfig cfg;
    cfg.n_pairs = a.n;
    cfg.length.mean = a.mean_length;
    if (a.fixed_length) cfg.length.kind = bench::LengthDistribution::Kind::Fixed;
    cfg.time.choices = a.times;
    cfg.time.lo = a.t_min;
    cfg.time.hi = a.t_max;
    cfg.threads = ctx.threads;
    const auto syn = bench::generate_synthetic(b, cfg, Rng(a.seed));
    emit(ctx, a.out, bench::format_benchmark(syn.data));
    if (!a.truth.empty()) {
        std::string s = "id,t,p_mm,p_ii,p_mi\n";
        for (std::size_t r = 0; r < syn.data.size(); ++r) {
            const auto& th = syn.thetas[r];
            s += text::csv_field(syn.data[r].id) + ',' + std::to_string(syn.times[r]) + ',' +
                 text::format_double(th.match_to_match()) + ',' +
                 text::format_double(th.insert_to_insert()) + ',' +
                 text::format_double(th.insert_to_match()) + '\n';
        }
        text::write_file(a.truth, s);
    }
    return 0;
}

// ---- stats ------------------------------------------------------------------

struct StatsArgs {
    std::string benchmark, out, format = "auto";
    bool skip_invalid = false;
};

int cmd_stats(const StatsArgs& a, const Context& ctx) {
    const auto data = bench::read_benchmark(a.benchmark, parse_options(a.skip_invalid, ctx));
    const auto s = bench::compute_stats(data, ctx.threads);
    emit(ctx, a.out, wants_csv(a.format, a.out) ? bench::stats_csv(s) : bench::stats_json(s));
    return 0;
}

void add_matrix_input(CLI::App* cmd, MatrixInput& in) {
    cmd->add_option("--input-scale", in.scale_text,
                    "Scale of log-odds input matrices when their header has none");
    cmd->add_option("--freqs", in.freqs_path,
                    "Background frequencies for log-odds input matrices without a freqs header")
        ->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Information content of protein alignment benchmarks under Markov substitution models",
                 args.empty() ? "subinfo" : fs::path(args[0]).filename().string()};
    app.require_subcommand(1);
    app.fallthrough();
    std::size_t threads = 0;
    bool quiet = false;
    app.add_option("--threads", threads, "Worker threads (default: logical cores)");
    app.add_flag("--quiet", quiet, "Suppress progress messages");

    auto formats = CLI::IsMember({"auto", "json", "csv"});
    auto indel_sources = CLI::IsMember({"fit", "stationary", "file"});

    ConvertArgs convert;
    auto* c = app.add_subcommand("convert", "Convert a log-odds scoring matrix to its base stochastic matrix");
    c->add_option("--scores", convert.scores, "Log-odds matrix file")->required()->check(CLI::ExistingFile);
    c->add_option("--scale", convert.scale, "Score unit c in S = c log2(ratio); overrides the header");
    c->add_option("--freqs", convert.freqs, "Background frequencies file")->check(CLI::ExistingFile);
    c->add_option("--out", convert.out, "Output matrix file")->required();

    EncodeArgs encode;
    auto* e = app.add_subcommand("encode", "Total message length of a benchmark under one matrix");
    e->add_option("--benchmark", encode.benchmark)->required()->check(CLI::ExistingFile);
    e->add_option("--matrix", encode.matrix)->required()->check(CLI::ExistingFile);
    e->add_option("--alphas", encode.alphas, "Per-bin Dirichlet file (default: built-in start point)")
        ->check(CLI::ExistingFile);
    e->add_option("--indel-source", encode.indel_source)->check(indel_sources);
    e->add_option("--indel-file", encode.indel_file)->check(CLI::ExistingFile);
    e->add_option("--out", encode.out, "Report file (.json or .csv)")->required();
    e->add_option("--format", encode.format)->check(formats);
    e->add_flag("--skip-invalid", encode.skip_invalid, "Skip records that fail validation");
    add_matrix_input(e, encode.input);

    InferArgs infer;
    auto* i = app.add_subcommand("infer", "Infer matrix, times and Dirichlets by alternating optimisation");
    i->add_option("--benchmark", infer.benchmark)->required()->check(CLI::ExistingFile);
    i->add_option("--init-matrix", infer.init_matrix)->required()->check(CLI::ExistingFile);
    i->add_option("--init-alphas", infer.init_alphas)->required()->check(CLI::ExistingFile);
    i->add_option("--seed", infer.seed)->required();
    i->add_option("--out", infer.out, "Output directory")->required();
    i->add_option("--config", infer.config, "key = value search settings")->check(CLI::ExistingFile);
    i->add_option("--resume", infer.resume, "Checkpoint to continue from")->check(CLI::ExistingFile);
    i->add_flag("--skip-invalid", infer.skip_invalid);
    add_matrix_input(i, infer.input);

    RankArgs rank;
    auto* r = app.add_subcommand("rank", "Rank matrices by total message length on each benchmark");
    r->add_option("--benchmarks", rank.benchmarks)->required()->check(CLI::ExistingFile);
    r->add_option("--matrices", rank.matrices)->required()->check(CLI::ExistingFile);
    r->add_option("--alphas", rank.alphas)->check(CLI::ExistingFile);
    r->add_option("--indel-source", rank.indel_source)->check(indel_sources);
    r->add_option("--indel-file", rank.indel_file)->check(CLI::ExistingFile);
    r->add_option("--out", rank.out)->required();
    r->add_flag("--skip-invalid", rank.skip_invalid);
    add_matrix_input(r, rank.input);

    AnalyzeArgs analyze;
    auto* an = app.add_subcommand("analyze", "Expected change, KL tables, convergence curves, log-odds export");
    an->add_option("--matrix", analyze.matrix)->required()->check(CLI::ExistingFile);
    an->add_option("--expected-change", analyze.expected_change, "Curve for t = 1..TMAX");
    an->add_option("--kl", analyze.kl, "Other matrices for the pairwise KL table")->check(CLI::ExistingFile);
    an->add_option("--mode", analyze.mode)->check(CLI::IsMember({"joint", "conditional"}));
    an->add_option("--convergence", analyze.convergence, "Per-column KL to stationary for t = 1..TMAX");
    an->add_option("--logodds", analyze.logodds, "Export log-odds scores of M^t");
    an->add_option("--scale", analyze.scale, "Score unit for --logodds");
    an->add_option("--out", analyze.out)->required();
    add_matrix_input(an, analyze.input);

    SynthArgs synth;
    auto* sy = app.add_subcommand("synth", "Generate a synthetic benchmark");
    sy->add_option("--matrix", synth.matrix)->required()->check(CLI::ExistingFile);
    sy->add_option("--alphas", synth.alphas)->check(CLI::ExistingFile);
    sy->add_option("--n", synth.n)->required();
    sy->add_option("--seed", synth.seed)->required();
    sy->add_option("--out", synth.out)->required();
    sy->add_option("--mean-length", synth.mean_length, "Mean alignment length in columns");
    sy->add_flag("--fixed-length", synth.fixed_length, "Every alignment has exactly the mean length");
    sy->add_option("--times", synth.times, "Times drawn uniformly from this list")->delimiter(',');
    sy->add_option("--t-min", synth.t_min);
    sy->add_option("--t-max", synth.t_max);
    sy->add_option("--indel-file", synth.indel_file, "Residue frequencies for gaps (default: stationary)")
        ->check(CLI::ExistingFile);
    sy->add_option("--truth", synth.truth, "CSV of the generating time and Theta per record");
    add_matrix_input(sy, synth.input);

    StatsArgs stats;
    auto* st = app.add_subcommand("stats", "Benchmark composition and sequence identity histogram");
    st->add_option("--benchmark", stats.benchmark)->required()->check(CLI::ExistingFile);
    st->add_option("--out", stats.out)->required();
    st->add_option("--format", stats.format)->check(formats);
    st->add_flag("--skip-invalid", stats.skip_invalid);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("subinfo");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? 0 : exit_code(ErrorKind::Usage);
    }

    Context ctx{out, err, threads, quiet};
    try {
        if (*c) return cmd_convert(convert, ctx);
        if (*e) return cmd_encode(encode, ctx);
        if (*i) return cmd_infer(infer, ctx);
        if (*r) return cmd_rank(rank, ctx);
        if (*an) return cmd_analyze(analyze, ctx);
        if (*sy) return cmd_synth(synth, ctx);
        if (*st) return cmd_stats(stats, ctx);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_code(ex.kind());
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_code(ErrorKind::Usage);
    }
    return exit_code(ErrorKind::Usage);
}

}  // namespace subinfo::cli
