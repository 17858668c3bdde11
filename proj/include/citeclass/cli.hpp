#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace citeclass::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// A stage ran before the stage it depends on. Exit code 1.
class UpstreamMissing : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad option value or unknown config key. Exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` text, `#` starts a comment. Throws ParseError.
KeyValues read_key_values(std::istream& in, const std::string& source);
KeyValues read_key_values(const std::filesystem::path& path);

struct RunConfig {
    std::filesystem::path scheme;
    std::filesystem::path journals;
    std::filesystem::path documents;
    std::filesystem::path out = "out";

    std::optional<int> year_min;
    std::optional<int> year_max;

    double theta = 0.8;
    int max_categories = 5;
    int min_references = 3;
    std::optional<int> citer_window;    // years; unset = unbounded
    std::optional<int> citation_window; // years; unset = unbounded

    double bin_width = 100000.0;
    double area_link_min = 0.0;
    double category_link_min = 0.0;
    double edge_epsilon = 1e-6;
    bool drop_last_year = true;

    std::string graph_format = "json";
    int layout_iterations = 5000;
    std::string repulsion = "degree";
    std::uint64_t seed = 1;
    unsigned workers = 0;

    /// Throws UsageError on inconsistent values.
    void validate() const;
};

/// Applies config keys on top of `config`. Unknown keys throw UsageError.
void apply(RunConfig& config, const KeyValues& kv);

// Stage entry points. Each returns an exit code and reports to `log`.
int cmd_ingest(const RunConfig& config, std::ostream& log);
int cmd_classify(const RunConfig& config, const std::vector<std::string>& systems, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);
int cmd_indicators(const RunConfig& config, std::ostream& log);
int cmd_network(const RunConfig& config, std::ostream& log);
int cmd_report(const RunConfig& config, std::ostream& log);
int cmd_syngen(const KeyValues& params, const std::filesystem::path& out, std::ostream& log);

/// One figure/table dataset and the columns its CSV carries (JSON datasets
/// list their top-level keys).
struct DatasetSchema {
    std::string artifact; // "Figure 1", "Table 3", ...
    std::string file;
    std::string stage;    // producing subcommand
    std::vector<std::string> columns;
    std::vector<std::string> numeric; // subset of columns; "NA" allowed
};

const std::vector<DatasetSchema>& dataset_schemas();

/// Checks one dataset file against its schema; returns the problems found.
std::vector<std::string> validate_dataset(const DatasetSchema& schema, const std::filesystem::path& dir);

/// Full command line (argv[0] excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace citeclass::cli
