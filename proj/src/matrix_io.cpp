#include "subinfo/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "subinfo/errors.hpp"
#include "subinfo/text.hpp"

namespace subinfo::io {

namespace {

constexpr std::size_t N = kAlphabetSize;

// perm[file_index] = canonical index
std::array<std::size_t, N> parse_order(std::string_view order, const std::string& where) {
    const auto letters = text::trim(order);
    if (letters.size() != N)
        throw ParseError(where + ": order must list the 20 amino acids, got '" +
                         std::string(letters) + "'");
    std::array<std::size_t, N> perm{};
    std::array<bool, N> seen{};
    for (std::size_t k = 0; k < N; ++k) {
        const auto aa = AminoAcid::try_from_letter(letters[k]);
        if (!aa) throw ParseError(where + ": invalid letter '" + std::string(1, letters[k]) + "' in order");
        if (seen[aa->index])
            throw ParseError(where + ": letter '" + std::string(1, letters[k]) + "' repeated in order");
        seen[aa->index] = true;
        perm[k] = aa->index;
    }
    return perm;
}

Vector20 parse_vector20(const std::vector<std::string_view>& tokens, const std::string& where) {
    if (tokens.size() != N)
        throw ParseError(where + ": expected 20 values, found " + std::to_string(tokens.size()));
    Vector20 v;
    for (std::size_t k = 0; k < N; ++k) v[k] = text::parse_double(tokens[k], where);
    return v;
}

Vector20 permute(const Vector20& v, const std::array<std::size_t, N>& perm) {
    Vector20 out;
    for (std::size_t k = 0; k < N; ++k) out[perm[k]] = v[k];
    return out;
}

Vector20 checked_frequencies(Vector20 f, const std::string& where) {
    double s = 0.0;
    for (double x : f) {
        if (!(x > 0.0)) throw DomainError(where + ": frequencies must be positive");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-6)
        throw DomainError(where + ": frequencies sum to " + text::format_double(s));
    for (double& x : f) x /= s;
    return f;
}

std::string join(const Vector20& v) {
    std::string s;
    for (std::size_t k = 0; k < N; ++k) {
        if (k) s += ' ';
        s += text::format_double(v[k]);
    }
    return s;
}

}  // namespace

MatrixFile parse_matrix(std::string_view contents, const std::string& source_name) {
    MatrixFile out;
    std::array<std::size_t, N> perm{};
    for (std::size_t k = 0; k < N; ++k) perm[k] = k;
    std::optional<Vector20> raw_freqs;
    std::vector<Vector20> rows;
    std::size_t line_no = 0;
    for (auto line : text::split_lines(contents)) {
        ++line_no;
        const std::string where = source_name + ":" + std::to_string(line_no);
        line = text::trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = text::trim(line.substr(1));
            const auto colon = body.find(':');
            if (colon == std::string_view::npos) continue;
            std::string key(text::trim(body.substr(0, colon)));
            std::transform(key.begin(), key.end(), key.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            const auto value = text::trim(body.substr(colon + 1));
            if (key == "order") {
                perm = parse_order(value, where);
            } else if (key == "type") {
                if (value == "conditional") out.kind = MatrixKind::Conditional;
                else if (value == "logodds" || value == "log-odds") out.kind = MatrixKind::LogOdds;
                else throw ParseError(where + ": unknown matrix type '" + std::string(value) + "'");
            } else if (key == "scale") {
                out.scale = text::parse_double(value, "scale");
                if (!(*out.scale > 0.0)) throw ParseError(where + ": scale must be positive");
            } else if (key == "divisor") {
                out.divisor = text::parse_double(value, "divisor");
                if (!(out.divisor > 0.0)) throw ParseError(where + ": divisor must be positive");
            } else if (key == "freqs") {
                raw_freqs = parse_vector20(text::split_ws(value), where);
            } else {
                out.metadata.emplace_back(key, std::string(value));
            }
            continue;
        }
        if (rows.size() == N) throw ParseError(where + ": more than 20 matrix rows");
        rows.push_back(parse_vector20(text::split_ws(line), where));
    }
    if (rows.size() != N)
        throw ParseError(source_name + ": expected 20 matrix rows, found " +
                         std::to_string(rows.size()));
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) out.values[cell(perm[r], perm[c])] = rows[r][c];
    if (raw_freqs) out.freqs = checked_frequencies(permute(*raw_freqs, perm), source_name);
    return out;
}

MatrixFile read_matrix(const std::string& path) { return parse_matrix(text::read_file(path), path); }

std::string format_matrix(const MatrixFile& file) {
    std::string s = "# order: " + std::string(kCanonicalOrder) + "\n";
    s += std::string("# type: ") + (file.kind == MatrixKind::Conditional ? "conditional" : "logodds") + "\n";
    if (file.scale) s += "# scale: " + text::format_double(*file.scale) + "\n";
    if (file.divisor != 1.0) s += "# divisor: " + text::format_double(file.divisor) + "\n";
    if (file.freqs) s += "# freqs: " + join(*file.freqs) + "\n";
    for (const auto& [k, v] : file.metadata) s += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            if (j) s += ' ';
            s += text::format_double(file.values[cell(i, j)]);
        }
        s += '\n';
    }
    return s;
}

void write_matrix(const std::string& path, const MatrixFile& file) {
    text::write_file(path, format_matrix(file));
}

StochasticMatrix to_stochastic(const MatrixFile& file, const std::string& source_name) {
    if (file.kind != MatrixKind::Conditional)
        throw UsageError(source_name + ": expected a conditional-probability matrix, found log-odds "
                         "scores (convert it first)");
    Matrix20 m = file.values;
    for (std::size_t j = 0; j < N; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            if (!(m[cell(i, j)] >= 0.0))
                throw DomainError(source_name + ": negative probability in column " +
                                  std::string(1, kCanonicalOrder[j]));
            s += m[cell(i, j)];
        }
        if (std::abs(s - 1.0) > 1e-6)
            throw DomainError(source_name + ": column " + std::string(1, kCanonicalOrder[j]) +
                              " sums to " + text::format_double(s));
    }
    return StochasticMatrix::normalized(m, file.freqs ? &*file.freqs : nullptr);
}

StochasticMatrix read_stochastic_matrix(const std::string& path) {
    return to_stochastic(read_matrix(path), path);
}

markov::ScoringMatrix to_scoring(const MatrixFile& file, std::optional<double> scale_override,
                                 const std::string& source_name) {
    if (file.kind != MatrixKind::LogOdds)
        throw UsageError(source_name + ": expected a log-odds matrix (# type: logodds)");
    markov::ScoringMatrix sc;
    const auto scale = scale_override ? scale_override : file.scale;
    if (!scale) throw UsageError(source_name + ": log-odds scale not given (use --scale or '# scale:')");
    sc.scale = *scale;
    for (std::size_t k = 0; k < sc.scores.size(); ++k) sc.scores[k] = file.values[k] / file.divisor;
    sc.background = file.freqs;
    sc.validate();
    return sc;
}

MatrixFile from_stochastic(const StochasticMatrix& m) {
    MatrixFile f;
    f.kind = MatrixKind::Conditional;
    f.values = m.entries();
    f.freqs = m.stationary();
    return f;
}

MatrixFile from_scoring(const markov::ScoringMatrix& sc) {
    MatrixFile f;
    f.kind = MatrixKind::LogOdds;
    f.values = sc.scores;
    f.scale = sc.scale;
    f.freqs = sc.background;
    return f;
}

Vector20 parse_frequencies(std::string_view contents, const std::string& source_name) {
    std::array<std::size_t, N> perm{};
    for (std::size_t k = 0; k < N; ++k) perm[k] = k;
    std::vector<std::string_view> tokens;
    std::size_t line_no = 0;
    for (auto line : text::split_lines(contents)) {
        ++line_no;
        line = text::trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = text::trim(line.substr(1));
            if (body.substr(0, 6) == "order:")
                perm = parse_order(body.substr(6), source_name + ":" + std::to_string(line_no));
            continue;
        }
        for (auto t : text::split_ws(line)) tokens.push_back(t);
    }
    return checked_frequencies(permute(parse_vector20(tokens, source_name), perm), source_name);
}

Vector20 read_frequencies(const std::string& path) {
    return parse_frequencies(text::read_file(path), path);
}

TimeBinnedDirichlets parse_alphas(std::string_view contents, const std::string& source_name) {
    std::vector<std::optional<BinDirichlets>> bins(kTimeBins);
    std::vector<bool> populated(kTimeBins, false);
    std::size_t line_no = 0;
    std::size_t count = 0;
    for (auto line : text::split_lines(contents)) {
        ++line_no;
        const std::string where = source_name + ":" + std::to_string(line_no);
        line = text::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto tok = text::split_ws(line);
        if (tok.size() != 6)
            throw ParseError(where + ": expected 't am1 am2 ai1 ai2 ai3', found " +
                             std::to_string(tok.size()) + " fields");
        const auto t = text::parse_int(tok[0], "time bin");
        if (t < kMinTime || t > kMaxTime) throw ParseError(where + ": time bin outside [1, 1000]");
        const auto idx = static_cast<std::size_t>(t - kMinTime);
        if (populated[idx]) throw ParseError(where + ": time bin " + std::to_string(t) + " repeated");
        std::array<double, 5> a{};
        for (std::size_t k = 0; k < 5; ++k) {
            a[k] = text::parse_double(tok[k + 1], "alpha");
            if (!(a[k] > 0.0)) throw ParseError(where + ": alpha values must be positive");
        }
        bins[idx] = BinDirichlets{DirichletParams(std::span<const double>(a.data(), 2)),
                                  DirichletParams(std::span<const double>(a.data() + 2, 3))};
        populated[idx] = true;
        ++count;
    }
    if (count == 0) throw ParseError(source_name + ": no alpha lines");
    const auto first = static_cast<std::size_t>(
        std::find(populated.begin(), populated.end(), true) - populated.begin());
    TimeBinnedDirichlets out(*bins[first]);
    for (std::size_t b = 0; b < kTimeBins; ++b)
        if (bins[b]) out.at(static_cast<int>(b) + kMinTime) = *bins[b];
    fill_empty_bins(out, populated);
    return out;
}

TimeBinnedDirichlets read_alphas(const std::string& path) {
    return parse_alphas(text::read_file(path), path);
}

std::string format_alphas(const TimeBinnedDirichlets& alphas) {
    std::string s = "# t am1 am2 ai1 ai2 ai3\n";
    for (int t = kMinTime; t <= kMaxTime; ++t) {
        const auto& b = alphas.at(t);
        s += std::to_string(t);
        for (double a : b.match.alpha()) s += ' ' + text::format_double(a);
        for (double a : b.insert.alpha()) s += ' ' + text::format_double(a);
        s += '\n';
    }
    return s;
}

void write_alphas(const std::string& path, const TimeBinnedDirichlets& alphas) {
    text::write_file(path, format_alphas(alphas));
}

}  // namespace subinfo::io
