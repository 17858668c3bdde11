#include "citeclass/cli.hpp"

#include "citeclass/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>

namespace citeclass::cli {

const std::vector<DatasetSchema>& dataset_schemas() {
    static const std::vector<DatasetSchema> schemas = {
        {"Figure 1", "ref_stats_by_year.csv", "indicators",
         {"year", "documents", "below_threshold", "pct_below_threshold"},
         {"year", "documents", "below_threshold", "pct_below_threshold"}},
        {"Figure 2", "common_unique_area.csv", "compare",
         {"class", "common", "only_asjc", "only_u1", "size_asjc", "size_u1"},
         {"common", "only_asjc", "only_u1", "size_asjc", "size_u1"}},
        {"Figure 3", "network.json", "network", {"nodes", "edges"}, {}},
        {"Figure 4", "class_stats_area.csv", "compare",
         {"class", "size_asjc", "size_u1", "common", "incoming", "outgoing", "pct_in", "pct_out"},
         {"size_asjc", "size_u1", "common", "incoming", "outgoing", "pct_in", "pct_out"}},
        {"Figure 5", "composition_area.csv", "compare",
         {"class", "system", "documents", "single", "pct_single", "mean_weight", "size"},
         {"documents", "single", "pct_single", "mean_weight", "size"}},
        {"Figure 6", "histogram_category.csv", "compare",
         {"system", "lower", "upper", "count", "pct"},
         {"lower", "upper", "count", "pct"}},
        {"Figure 7", "ni_diff_by_year.csv", "indicators",
         {"year", "documents", "mean_abs_diff"},
         {"year", "documents", "mean_abs_diff"}},
        {"Figure 8", "ni_std_by_area.csv", "indicators",
         {"area", "std_ni_asjc", "std_ni_u1"},
         {"std_ni_asjc", "std_ni_u1"}},
        {"Figure 9", "excellence_overlap_p10.csv", "indicators",
         {"area", "pct_common", "pct_only_u1", "pct_only_asjc"},
         {"pct_common", "pct_only_u1", "pct_only_asjc"}},
        {"Figure 10", "excellence_overlap_p01.csv", "indicators",
         {"area", "pct_common", "pct_only_u1", "pct_only_asjc"},
         {"pct_common", "pct_only_u1", "pct_only_asjc"}},
        {"Table 1", "top_links_area.csv", "compare",
         {"from", "from_name", "to", "to_name", "weight"},
         {"weight"}},
        {"Table 2", "summary_flows_category.csv", "compare",
         {"variable", "mean", "std", "cv_pct"},
         {"mean", "std", "cv_pct"}},
        {"Table 3", "top_links_category.csv", "compare",
         {"from", "from_name", "to", "to_name", "weight"},
         {"weight"}},
        {"Table 4", "summary_weights_category.csv", "compare",
         {"system", "variable", "mean", "std", "cv_pct"},
         {"mean", "std", "cv_pct"}},
    };
    return schemas;
}

namespace {

bool numeric(const std::string& s) {
    if (s == "NA") return true;
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

void validate_json(const DatasetSchema& schema, std::ifstream& in, std::vector<std::string>& problems) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        problems.push_back(schema.file + ": invalid JSON: " + e.what());
        return;
    }
    for (const auto& key : schema.columns)
        if (!j.contains(key) || !j[key].is_array()) problems.push_back(schema.file + ": missing array '" + key + "'");
    if (!problems.empty()) return;
    for (const auto& n : j["nodes"])
        for (const char* k : {"id", "size", "community", "x", "y"})
            if (!n.contains(k)) {
                problems.push_back(schema.file + ": node without '" + k + "'");
                return;
            }
    for (const auto& e : j["edges"])
        for (const char* k : {"from", "to", "weight"})
            if (!e.contains(k)) {
                problems.push_back(schema.file + ": edge without '" + k + "'");
                return;
            }
}

} // namespace

std::vector<std::string> validate_dataset(const DatasetSchema& schema, const std::filesystem::path& dir) {
    std::vector<std::string> problems;
    std::ifstream in(dir / schema.file, std::ios::binary);
    if (!in) {
        problems.push_back(schema.file + ": missing");
        return problems;
    }
    if (schema.file.ends_with(".json")) {
        validate_json(schema, in, problems);
        return problems;
    }
    try {
        csv::Reader reader(in, schema.file);
        csv::Row row;
        if (!reader.next(row)) {
            problems.push_back(schema.file + ": empty");
            return problems;
        }
        if (row.fields != schema.columns) {
            problems.push_back(schema.file + ": header mismatch");
            return problems;
        }
        std::vector<std::size_t> numeric_cols;
        for (std::size_t i = 0; i < schema.columns.size(); ++i)
            if (std::find(schema.numeric.begin(), schema.numeric.end(), schema.columns[i]) != schema.numeric.end())
                numeric_cols.push_back(i);
        while (reader.next(row)) {
            if (row.fields.size() != schema.columns.size()) {
                problems.push_back(schema.file + ":" + std::to_string(row.line) + ": wrong field count");
                continue;
            }
            for (auto i : numeric_cols)
                if (!numeric(row.fields[i]))
                    problems.push_back(schema.file + ":" + std::to_string(row.line) + ": '" + schema.columns[i] +
                                       "' is not numeric");
        }
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    return problems;
}

} // namespace citeclass::cli
