#include "subinfo/bundle_io.hpp"

#include "json.hpp"
#include "subinfo/errors.hpp"
#include "subinfo/text.hpp"

namespace subinfo::io {

using nlohmann::ordered_json;

std::string bundle_json(const ModelBundle& b) {
    ordered_json j;
    j["order"] = std::string(kCanonicalOrder);
    j["total_bits"] = b.total_message_length_bits;
    auto& rows = j["matrix"] = ordered_json::array();
    for (std::size_t i = 0; i < kAlphabetSize; ++i) {
        auto row = ordered_json::array();
        for (std::size_t c = 0; c < kAlphabetSize; ++c) row.push_back(b.matrix(i, c));
        rows.push_back(std::move(row));
    }
    j["stationary"] = b.matrix.stationary();
    j["indel"] = b.indel.probs();
    auto& alphas = j["alphas"] = ordered_json::array();
    for (int t = kMinTime; t <= kMaxTime; ++t) {
        const auto& bin = b.dirichlets.at(t);
        alphas.push_back({t, bin.match.alpha(), bin.insert.alpha()});
    }
    auto& recs = j["records"] = ordered_json::array();
    for (std::size_t r = 0; r < b.thetas.size(); ++r) {
        const auto& th = b.thetas[r];
        recs.push_back({{"t", r < b.times.size() ? b.times[r] : 0},
                        {"p_mm", th.match_to_match()},
                        {"p_ii", th.insert_to_insert()},
                        {"p_mi", th.insert_to_match()}});
    }
    return j.dump(1) + "\n";
}

ModelBundle parse_bundle_json(std::string_view contents, const std::string& source_name) {
    try {
        const auto j = ordered_json::parse(contents);
        if (j.at("order").get<std::string>() != kCanonicalOrder)
            throw ParseError(source_name + ": bundle must use the canonical residue order");

        Matrix20 m{};
        const auto& rows = j.at("matrix");
        if (rows.size() != kAlphabetSize) throw ParseError(source_name + ": matrix needs 20 rows");
        for (std::size_t i = 0; i < kAlphabetSize; ++i) {
            const auto row = rows.at(i).get<std::vector<double>>();
            if (row.size() != kAlphabetSize)
                throw ParseError(source_name + ": matrix row " + std::to_string(i + 1) +
                                 " needs 20 values");
            for (std::size_t c = 0; c < kAlphabetSize; ++c) m[cell(i, c)] = row[c];
        }
        const auto pi = j.at("stationary").get<Vector20>();
        StochasticMatrix matrix(m, &pi);
        IndelModel indel(j.at("indel").get<Vector20>());

        const auto& alphas = j.at("alphas");
        if (alphas.size() != kTimeBins)
            throw ParseError(source_name + ": alphas need one entry per time bin");
        std::vector<BinDirichlets> bins;
        bins.reserve(kTimeBins);
        for (std::size_t k = 0; k < kTimeBins; ++k) {
            const auto& e = alphas.at(k);
            if (e.at(0).get<int>() != static_cast<int>(k) + kMinTime)
                throw ParseError(source_name + ": alphas out of order at entry " + std::to_string(k + 1));
            bins.push_back({DirichletParams(e.at(1).get<std::vector<double>>()),
                            DirichletParams(e.at(2).get<std::vector<double>>())});
        }

        ModelBundle b{std::move(matrix), std::move(indel), TimeBinnedDirichlets(std::move(bins)), {}, {}, 0.0};
        for (const auto& r : j.at("records")) {
            const int t = r.at("t").get<int>();
            check_time(t);
            b.times.push_back(t);
            b.thetas.emplace_back(r.at("p_mm").get<double>(), r.at("p_ii").get<double>(),
                                  r.at("p_mi").get<double>());
        }
        b.total_message_length_bits = j.at("total_bits").get<double>();
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source_name + ": " + e.what());
    } catch (const DomainError& e) {
        throw ParseError(source_name + ": " + e.what());
    }
}

ModelBundle read_bundle(const std::string& path) {
    return parse_bundle_json(text::read_file(path), path);
}

void write_bundle(const std::string& path, const ModelBundle& bundle) {
    text::write_file(path, bundle_json(bundle));
}

}  // namespace subinfo::io
