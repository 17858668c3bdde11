#include "citeclass/cli.hpp"

#include "citeclass/error.hpp"

#include <charconv>
#include <fstream>

namespace citeclass::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string& key, const std::string& v) {
    T out{};
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw UsageError("invalid value '" + v + "' for " + key);
    return out;
}

std::optional<int> window(const std::string& key, const std::string& v) {
    if (v == "none" || v.empty()) return std::nullopt;
    return number<int>(key, v);
}

bool flag(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("invalid boolean '" + v + "' for " + key);
}

} // namespace

KeyValues read_key_values(std::istream& in, const std::string& source) {
    KeyValues kv;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(source, n, 1, "expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ParseError(source, n, 1, "empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    return read_key_values(in, path.string());
}

void apply(RunConfig& c, const KeyValues& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "scheme") c.scheme = v;
        else if (k == "journals") c.journals = v;
        else if (k == "documents") c.documents = v;
        else if (k == "out") c.out = v;
        else if (k == "year_min") c.year_min = number<int>(k, v);
        else if (k == "year_max") c.year_max = number<int>(k, v);
        else if (k == "theta") c.theta = number<double>(k, v);
        else if (k == "max_categories") c.max_categories = number<int>(k, v);
        else if (k == "min_references") c.min_references = number<int>(k, v);
        else if (k == "citer_window") c.citer_window = window(k, v);
        else if (k == "citation_window") c.citation_window = window(k, v);
        else if (k == "bin_width") c.bin_width = number<double>(k, v);
        else if (k == "area_link_min") c.area_link_min = number<double>(k, v);
        else if (k == "category_link_min") c.category_link_min = number<double>(k, v);
        else if (k == "edge_epsilon") c.edge_epsilon = number<double>(k, v);
        else if (k == "drop_last_year") c.drop_last_year = flag(k, v);
        else if (k == "format") c.graph_format = v;
        else if (k == "layout_iterations") c.layout_iterations = number<int>(k, v);
        else if (k == "repulsion") c.repulsion = v;
        else if (k == "seed") c.seed = number<std::uint64_t>(k, v);
        else if (k == "workers") c.workers = number<unsigned>(k, v);
        else throw UsageError("unknown config key '" + k + "'");
    }
}

void RunConfig::validate() const {
    if (year_min && year_max && *year_min > *year_max) throw UsageError("year_min > year_max");
    if (!(bin_width > 0.0)) throw UsageError("bin_width must be > 0");
    if (!(theta > 0.0 && theta <= 1.0)) throw UsageError("theta must lie in (0, 1]");
    if (max_categories < 1) throw UsageError("max_categories must be >= 1");
    if (min_references < 0) throw UsageError("min_references must be >= 0");
    if (citer_window && *citer_window < 0) throw UsageError("citer_window must be >= 0");
    if (citation_window && *citation_window < 0) throw UsageError("citation_window must be >= 0");
    if (graph_format != "json" && graph_format != "graphml") throw UsageError("format must be json or graphml");
    if (repulsion != "degree" && repulsion != "uniform") throw UsageError("repulsion must be degree or uniform");
    if (layout_iterations < 0) throw UsageError("layout_iterations must be >= 0");
}

} // namespace citeclass::cli
