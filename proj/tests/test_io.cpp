#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "subinfo/benchmark_io.hpp"
#include "subinfo/bundle_io.hpp"
#include "subinfo/encoding.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/inference.hpp"
#include "subinfo/matrix_io.hpp"
#include "subinfo/text.hpp"

using namespace subinfo;

namespace {

std::string matrix_text(const Matrix20& m, const std::string& header = "") {
    std::string s = header;
    for (std::size_t i = 0; i < kAlphabetSize; ++i) {
        for (std::size_t j = 0; j < kAlphabetSize; ++j) {
            if (j) s += ' ';
            s += text::format_double(m[cell(i, j)]);
        }
        s += '\n';
    }
    return s;
}

}  // namespace

TEST_CASE("number formatting and parsing") {
    CHECK(text::format_double(0.0) == "0");
    CHECK(text::format_double(0.1) == "0.1");
    CHECK(text::parse_double(text::format_double(1.0 / 3.0), "x") == 1.0 / 3.0);
    CHECK(text::format_fixed(-0.001, 2) == "0.00");
    CHECK(text::format_fixed(12.345, 1) == "12.3");
    CHECK(text::parse_double(" +2.5 ", "x") == 2.5);
    CHECK(text::parse_int("-7", "n") == -7);
    CHECK_THROWS_AS(text::parse_double("1.5x", "x"), ParseError);
    CHECK_THROWS_AS(text::parse_double("", "x"), ParseError);
    CHECK_THROWS_AS(text::parse_double("nan", "x"), ParseError);
    CHECK_THROWS_AS(text::parse_int("3.0", "n"), ParseError);
}

TEST_CASE("csv quoting and splitting") {
    CHECK(text::csv_field("plain") == "plain");
    CHECK(text::csv_field("a,b") == "\"a,b\"");
    CHECK(text::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const auto parts = text::split_ws(" 1,2\t 3 ");
    REQUIRE(parts.size() == 3);
    CHECK(parts[2] == "3");
    const auto lines = text::split_lines("a\r\nb\n\nc");
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "a");
    CHECK(lines[2].empty());
}

TEST_CASE("matrix files") {
    std::mt19937_64 rng(5);
    const Matrix20 m = oracle::random_stochastic(rng);

    SUBCASE("conditional round trip is exact") {
        const auto parsed = io::parse_matrix(matrix_text(m), "m");
        CHECK(parsed.kind == io::MatrixKind::Conditional);
        CHECK(parsed.values == m);
        const auto again = io::parse_matrix(io::format_matrix(parsed), "m2");
        CHECK(again.values == m);
        CHECK(oracle::max_abs_diff(io::to_stochastic(parsed, "m").entries(), m) < 1e-12);
    }

    SUBCASE("order header permutes into canonical order") {
        const std::string order = "VYWTSPFMKLIHGEQCDNRA";
        Matrix20 shuffled;
        for (std::size_t i = 0; i < kAlphabetSize; ++i)
            for (std::size_t j = 0; j < kAlphabetSize; ++j) {
                const auto ci = kCanonicalOrder.find(order[i]);
                const auto cj = kCanonicalOrder.find(order[j]);
                shuffled[cell(i, j)] = m[cell(ci, cj)];
            }
        const auto parsed = io::parse_matrix(matrix_text(shuffled, "# order: " + order + "\n"), "m");
        CHECK(parsed.values == m);
    }

    SUBCASE("log-odds header fields") {
        Matrix20 s{};
        s[cell(0, 0)] = 8;
        const auto parsed = io::parse_matrix(
            matrix_text(s, "# type: logodds\n# scale: 3\n# divisor: 2\n# source: test\n"), "lo");
        CHECK(parsed.kind == io::MatrixKind::LogOdds);
        REQUIRE(parsed.scale.has_value());
        CHECK(*parsed.scale == 3.0);
        const auto sc = io::to_scoring(parsed, std::nullopt, "lo");
        CHECK(sc.scores[cell(0, 0)] == 4.0);
        CHECK(sc.scale == 3.0);
        CHECK(io::to_scoring(parsed, 2.0, "lo").scale == 2.0);
        REQUIRE(parsed.metadata.size() == 1);
        CHECK(parsed.metadata[0].first == "source");
    }

    SUBCASE("malformed input") {
        CHECK_THROWS_AS(io::parse_matrix("1 2 3\n", "short"), ParseError);
        std::string bad = matrix_text(m);
        bad.replace(bad.find(' '), 1, " x");
        CHECK_THROWS_AS(io::parse_matrix(bad, "bad"), ParseError);
        Matrix20 off = m;
        off[0] += 0.01;
        CHECK_THROWS(io::to_stochastic(io::parse_matrix(matrix_text(off), "off"), "off"));
    }
}

TEST_CASE("alpha files") {
    const auto a = io::parse_alphas("# t am1 am2 ai1 ai2 ai3\n10 9 1 5 4 1\n20 30 2 3 3 3\n", "a");
    CHECK(a.at(1).match.alpha(0) == 9.0);    // below the first listed bin
    CHECK(a.at(15).match.alpha(0) == 9.0);   // tie goes to the lower bin
    CHECK(a.at(16).match.alpha(0) == 30.0);
    CHECK(a.at(1000).insert.alpha(2) == 3.0);

    const auto again = io::parse_alphas(io::format_alphas(a), "a2");
    for (int t = kMinTime; t <= kMaxTime; ++t) {
        CHECK(again.at(t).match == a.at(t).match);
        CHECK(again.at(t).insert == a.at(t).insert);
    }
    CHECK_THROWS_AS(io::parse_alphas("", "empty"), ParseError);
    CHECK_THROWS_AS(io::parse_alphas("5 1 1 1 1\n", "short"), ParseError);
    CHECK_THROWS_AS(io::parse_alphas("1001 1 1 1 1 1\n", "range"), ParseError);
    CHECK_THROWS_AS(io::parse_alphas("3 1 1 1 1 1\n3 2 2 2 2 2\n", "dup"), ParseError);
    CHECK_THROWS(io::parse_alphas("3 1 -1 1 1 1\n", "neg"));
}

TEST_CASE("frequency files") {
    std::string text;
    for (int i = 0; i < 20; ++i) text += "0.05\n";
    const auto f = io::parse_frequencies(text, "f");
    for (double x : f) CHECK(x == doctest::Approx(0.05));
    CHECK_THROWS_AS(io::parse_frequencies("0.5 0.5\n", "short"), ParseError);
}

TEST_CASE("bundle JSON round trip is exact") {
    std::mt19937_64 rng(9);
    const StochasticMatrix m(oracle::random_stochastic(rng));
    const Vector20 p = oracle::random_simplex(rng);
    auto dirs = encoding::default_dirichlets();
    const double am[] = {3.25, 0.75};
    dirs.at(17).match = DirichletParams(am);
    ModelBundle b{m, IndelModel(p), dirs, {TransitionParams(0.9, 0.3, 0.6), TransitionParams(0.5, 0.1, 0.2)}, {17, 400}, 1234.5678};
    const auto back = io::parse_bundle_json(io::bundle_json(b), "b");
    CHECK(back.matrix.entries() == m.entries());
    CHECK(back.matrix.stationary() == m.stationary());
    CHECK(back.indel.probs() == b.indel.probs());
    CHECK(back.dirichlets.at(17).match == dirs.at(17).match);
    CHECK(back.times == b.times);
    CHECK(back.thetas[1].insert_to_match() == 0.2);
    CHECK(back.total_message_length_bits == b.total_message_length_bits);
    CHECK(io::bundle_json(back) == io::bundle_json(b));
    CHECK_THROWS_AS(io::parse_bundle_json("{\"order\": 1}", "bad"), ParseError);
}

TEST_CASE("search config files") {
    const auto cfg = inference::parse_search_config(
        "# comment\nsa_cool = 0.5\nmcmc_iters_per_bin=10 # inline\nrng_seed = 42\n", "cfg");
    CHECK(cfg.sa_cool == 0.5);
    CHECK(cfg.mcmc_iters_per_bin == 10);
    CHECK(cfg.rng_seed == 42u);
    CHECK(cfg.sa_temp_init == 10000.0);
    const auto again = inference::parse_search_config(inference::format_search_config(cfg), "again");
    CHECK(inference::format_search_config(again) == inference::format_search_config(cfg));
    CHECK_THROWS_AS(inference::parse_search_config("bogus = 1\n", "c"), ParseError);
    CHECK_THROWS_AS(inference::parse_search_config("sa_cool 1\n", "c"), ParseError);
    CHECK_THROWS_AS(inference::parse_search_config("sa_cool = 1.5\n", "c"), UsageError);
    CHECK_THROWS_AS(inference::parse_search_config("t_max = 2000\n", "c"), UsageError);
}

TEST_CASE("benchmark parsing") {
    const std::string two = ">p1\nARND\nARNE\nmmmm\n\n>p2\nAC\nC\nmd\n";
    const auto data = bench::parse_benchmark(two, "two");
    REQUIRE(data.size() == 2);
    CHECK(data[1].id == "p2");
    CHECK(bench::format_benchmark(data) == ">p1\nARND\nARNE\nmmmm\n>p2\nAC\nC\nmd\n");
    CHECK(bench::parse_benchmark("", "empty").empty());

    SUBCASE("lower case and empty sides") {
        const auto d = bench::parse_benchmark(">x\n\nacd\niii\n", "x");
        REQUIRE(d.size() == 1);
        CHECK(d[0].source.empty());
        CHECK(to_string(d[0].target) == "ACD");
    }

    SUBCASE("count mismatch names the record") {
        const std::string bad = ">ok\nA\nA\nm\n>broken\nAR\nA\nm\n";
        try {
            bench::parse_benchmark(bad, "bad.txt");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            const std::string what = e.what();
            CHECK(what.find("broken") != std::string::npos);
            CHECK(what.find("bad.txt:5") != std::string::npos);
        }
        std::vector<std::string> warnings;
        bench::ParseOptions skip{bench::InvalidRecordPolicy::Skip,
                                 [&](const std::string& w) { warnings.push_back(w); }};
        const auto kept = bench::parse_benchmark(bad, "bad.txt", skip);
        CHECK(kept.size() == 1);
        CHECK(warnings.size() == 1);
    }

    SUBCASE("malformed records report line numbers") {
        try {
            bench::parse_benchmark(">a\nAR\nAX\nmm\n", "f");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("f:3") != std::string::npos);
        }
        CHECK_THROWS_AS(bench::parse_benchmark("AR\n", "f"), ParseError);
        CHECK_THROWS_AS(bench::parse_benchmark(">a\nAR\nAR\n", "f"), ParseError);
        CHECK_THROWS_AS(bench::parse_benchmark(">a\nA\nA\nx\n", "f"), ParseError);
    }
}

TEST_CASE("sequence identity") {
    auto rec = [](const char* s, const char* t, const char* a) {
        return AlignmentRecord{"r", parse_sequence(s), parse_sequence(t), parse_states(a)};
    };
    CHECK(bench::sequence_identity(rec("ARND", "ARND", "mmmm")) == 100.0);
    CHECK(bench::sequence_identity(rec("AR", "AN", "mm")) == 50.0);
    CHECK(bench::sequence_identity(rec("AR", "NN", "ddii")) == 0.0);
    CHECK(bench::sequence_identity(rec("ARN", "A", "mdd")) == 100.0);
    CHECK_THROWS_AS(bench::sequence_identity(rec("", "AA", "ii")), DomainError);
}

TEST_CASE("benchmark statistics") {
    const auto data = bench::parse_benchmark(">a\nARND\nARNE\nmmmm\n>b\nAC\nC\nmd\n>c\n\nWW\nii\n", "s");
    const auto s = bench::compute_stats(data);
    CHECK(s.n_pairs == 3);
    CHECK(s.n_match == 5);
    CHECK(s.n_insert == 2);
    CHECK(s.n_delete == 1);
    // identities 75, 0 (A vs C), 0 (empty side)
    CHECK(s.avg_seq_identity == doctest::Approx(25.0));
    CHECK(s.identity_histogram[15] == 1);
    CHECK(s.identity_histogram[0] == 2);

    const auto empty = bench::compute_stats({});
    CHECK(empty.n_pairs == 0);
    CHECK(empty.avg_seq_identity == 0.0);
    std::size_t total = 0;
    for (auto c : empty.identity_histogram) total += c;
    CHECK(total == 0);

    const auto csv = bench::stats_csv(s);
    CHECK(csv.rfind("n_pairs,n_match,n_insert,n_delete,avg_seq_identity,identity_0_5", 0) == 0);
    CHECK(csv.find("\n3,5,2,1,25.00,2,") != std::string::npos);
    CHECK(bench::stats_json(s).find("\"n_pairs\": 3") != std::string::npos);
}
