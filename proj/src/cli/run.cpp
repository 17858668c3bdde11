#include "citeclass/cli.hpp"

#include "citeclass/error.hpp"

#include <CLI11.hpp>

namespace citeclass::cli {

namespace {

void opt(CLI::App* app, KeyValues& kv, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&kv, key](const std::string& v) { kv[key] = v; }, help);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subject classification of documents from the origin of their citers"};
    app.name("citeclass");
    app.require_subcommand(1, 1);
    app.fallthrough(); // inherited: global flags may follow the subcommand

    std::string config_path;
    KeyValues flags;
    app.add_option("--config", config_path, "flat key = value config file");
    opt(&app, flags, "--out", "out", "output directory");
    opt(&app, flags, "--seed", "seed", "random seed");

    auto* ingest = app.add_subcommand("ingest", "load and validate the corpus");
    opt(ingest, flags, "--scheme", "scheme", "scheme CSV");
    opt(ingest, flags, "--journals", "journals", "journals JSONL");
    opt(ingest, flags, "--documents", "documents", "documents JSONL");
    opt(ingest, flags, "--year-min", "year_min", "first year of the period");
    opt(ingest, flags, "--year-max", "year_max", "last year of the period");

    std::vector<std::string> systems;
    auto* classify = app.add_subcommand("classify", "write assignments for one or both systems");
    classify->add_option("--system", systems, "asjc-frac, u1f08 or both (default both)")
        ->check(CLI::IsMember({"asjc-frac", "u1f08", "both"}));
    opt(classify, flags, "--theta", "theta", "relative threshold");
    opt(classify, flags, "--max-categories", "max_categories", "category cap");
    opt(classify, flags, "--min-references", "min_references", "fewest references for reclassification");
    opt(classify, flags, "--citer-window", "citer_window", "years after the reference a citer may appear");
    opt(classify, flags, "--workers", "workers", "worker threads (0 = all cores)");

    auto* compare = app.add_subcommand("compare", "flows between the two systems");
    opt(compare, flags, "--bin-width", "bin_width", "histogram bin width in documents");
    opt(compare, flags, "--area-link-min", "area_link_min", "smallest area link listed");
    opt(compare, flags, "--category-link-min", "category_link_min", "smallest category link listed");

    auto* indicators = app.add_subcommand("indicators", "normalized impact and excellence");
    opt(indicators, flags, "--citation-window", "citation_window", "citation window in years");
    indicators->add_flag_callback("--drop-last-year", [&] { flags["drop_last_year"] = "true"; },
                                  "leave the final year out of the NI difference series (default)");
    indicators->add_flag_callback("--keep-last-year", [&] { flags["drop_last_year"] = "false"; });

    auto* network = app.add_subcommand("network", "area flow graph with communities and layout");
    network->add_option_function<std::string>(
               "--format", [&](const std::string& v) { flags["format"] = v; }, "json or graphml")
        ->check(CLI::IsMember({"json", "graphml"}));
    opt(network, flags, "--iterations", "layout_iterations", "layout iteration cap");
    opt(network, flags, "--repulsion", "repulsion", "degree or uniform");

    app.add_subcommand("report", "validate datasets and write the manifest");

    std::vector<std::string> params;
    auto* syn = app.add_subcommand("syngen", "write a synthetic corpus");
    syn->add_option("--param", params, "key=value generator parameter (repeatable)");


    std::vector<std::string> argv_store{"citeclass"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        KeyValues file;
        if (!config_path.empty()) file = read_key_values(std::filesystem::path(config_path));

        if (syn->parsed()) {
            KeyValues p = file;
            std::filesystem::path dir = "out";
            if (auto it = p.find("out"); it != p.end()) {
                dir = it->second;
                p.erase(it);
            }
            for (const auto& kv : params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
                p[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            if (auto it = flags.find("seed"); it != flags.end()) p["seed"] = it->second;
            if (auto it = flags.find("out"); it != flags.end()) dir = it->second;
            return cmd_syngen(p, dir, err);
        }

        RunConfig config;
        cli::apply(config, file);
        cli::apply(config, flags);
        config.validate();

        if (ingest->parsed()) return cmd_ingest(config, err);
        if (classify->parsed()) return cmd_classify(config, systems.empty() ? std::vector<std::string>{"both"} : systems, err);
        if (compare->parsed()) return cmd_compare(config, err);
        if (indicators->parsed()) return cmd_indicators(config, err);
        if (network->parsed()) return cmd_network(config, err);
        return cmd_report(config, err);
    } catch (const UsageError& e) {
        err << "citeclass: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "citeclass: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "citeclass: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace citeclass::cli
