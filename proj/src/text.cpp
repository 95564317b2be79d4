#include "subinfo/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "subinfo/errors.hpp"

namespace subinfo::text {

std::string format_double(double x) {
    if (x == 0.0) return "0";
    std::array<char, 64> buf;
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), r.ptr);
}

std::string format_fixed(double x, int decimals) {
    std::array<char, 400> buf;
    if (std::abs(x) < 0.5 * std::pow(10.0, -decimals)) x = 0.0;  // no "-0.00"
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::fixed, decimals);
    return std::string(buf.data(), r.ptr);
}

double parse_double(std::string_view token, std::string_view what) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto r = std::from_chars(token.data(), end, v);
    if (token.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
        throw ParseError("invalid number '" + std::string(token) + "' for " + std::string(what));
    return v;
}

long long parse_int(std::string_view token, std::string_view what) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    long long v = 0;
    const auto* end = token.data() + token.size();
    const auto r = std::from_chars(token.data(), end, v);
    if (token.empty() || r.ec != std::errc() || r.ptr != end)
        throw ParseError("invalid integer '" + std::string(token) + "' for " + std::string(what));
    return v;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string_view trim(std::string_view s) noexcept {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == ','))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r' && s[j] != ',') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < s.size()) {
        auto nl = s.find('\n', start);
        if (nl == std::string_view::npos) nl = s.size();
        auto line = s.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        start = nl + 1;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot open '" + path + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw UsageError("failed writing '" + path + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw UsageError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace subinfo::text
