#include "citeclass/cli.hpp"

#include "citeclass/asjc.hpp"
#include "citeclass/assignment_io.hpp"
#include "citeclass/citer.hpp"
#include "citeclass/corpus.hpp"
#include "citeclass/csv.hpp"
#include "citeclass/error.hpp"
#include "citeclass/flow.hpp"
#include "citeclass/indicators.hpp"
#include "citeclass/netgraph.hpp"
#include "citeclass/scheme.hpp"
#include "citeclass/syngen.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>

namespace citeclass::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kIngested = "ingested";
constexpr const char* kSummary = "corpus_summary.json";
constexpr const char* kAsjcFile = "assignments_asjc.jsonl";
constexpr const char* kU1File = "assignments_u1f08.jsonl";

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void require(const fs::path& path, const std::string& stage) {
    if (!fs::exists(path)) throw UpstreamMissing("missing '" + path.string() + "'; run '" + stage + "' first");
}

// Runs a stage body and maps failures onto the exit-code convention.
int guarded(std::ostream& log, const char* stage, const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const UpstreamMissing& e) {
        log << stage << ": " << e.what() << '\n';
        return kExitDomain;
    } catch (const ValidationError& e) {
        log << stage << ": validation error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ParseError& e) {
        log << stage << ": parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        log << stage << ": I/O error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        log << stage << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        log << stage << ": " << e.what() << '\n';
        return kExitDomain;
    }
}

struct Ingested {
    Scheme scheme;
    Corpus corpus;
};

Ingested load_ingested(const RunConfig& config) {
    require(config.out / kSummary, "ingest");
    const fs::path dir = config.out / kIngested;
    Scheme scheme = load_scheme(dir / "scheme.csv");
    Corpus corpus = load_corpus(dir / "journals.jsonl", dir / "documents.jsonl", scheme);
    return {std::move(scheme), std::move(corpus)};
}

ThresholdPolicy policy_of(const RunConfig& c) {
    ThresholdPolicy p;
    p.theta = c.theta;
    p.max_categories = c.max_categories;
    p.min_references = c.min_references;
    return p;
}

std::string num(double v) { return csv::fixed(v); }

std::string name_of(const Scheme& scheme, Level level, ClassIndex c) {
    return csv::escape(class_label(scheme, level, c));
}

void write_level(const FlowMatrix& m, const Ingested& in, const AssignmentSet& asjc, const AssignmentSet& u1,
                 const RunConfig& config, const fs::path& dir) {
    const Scheme& scheme = in.scheme;
    const Level level = m.level();
    const std::string suffix = std::string("_") + level_name(level) + ".csv";
    const auto classes = class_universe(m, scheme);
    auto code = [&](ClassIndex c) { return csv::escape(class_code(scheme, level, c)); };

    {
        auto f = open_out(dir / ("flows" + suffix));
        f << "level,from,to,weight\n";
        for (auto i : classes)
            for (auto j : classes)
                if (i != j && m.flow(i, j) > 0.0)
                    f << level_name(level) << ',' << code(i) << ',' << code(j) << ',' << num(m.flow(i, j)) << '\n';
    }

    const auto stats = class_flow_stats(m, classes);
    {
        auto f = open_out(dir / ("class_stats" + suffix));
        f << "class,size_asjc,size_u1,common,incoming,outgoing,pct_in,pct_out\n";
        for (const auto& s : stats)
            f << code(s.cls) << ',' << num(s.size_a) << ','
              << num(s.size_b) << ',' << num(s.common) << ',' << num(s.incoming) << ',' << num(s.outgoing) << ','
              << num(s.pct_incoming) << ',' << num(s.pct_outgoing) << '\n';
    }
    {
        auto f = open_out(dir / ("common_unique" + suffix));
        f << "class,common,only_asjc,only_u1,size_asjc,size_u1\n";
        for (const auto& s : stats)
            f << code(s.cls) << ',' << num(s.common) << ','
              << num(std::max(s.size_a - s.common, 0.0)) << ',' << num(std::max(s.size_b - s.common, 0.0)) << ','
              << num(s.size_a) << ',' << num(s.size_b) << '\n';
    }
    {
        const double min = level == Level::area ? config.area_link_min : config.category_link_min;
        auto f = open_out(dir / ("top_links" + suffix));
        f << "from,from_name,to,to_name,weight\n";
        for (const auto& l : top_links(m, min))
            f << code(l.from) << ',' << name_of(scheme, level, l.from) << ',' << code(l.to) << ','
              << name_of(scheme, level, l.to) << ',' << num(l.weight) << '\n';
    }

    const auto comp_a = class_composition(asjc, level, scheme, classes);
    const auto comp_b = class_composition(u1, level, scheme, classes);
    {
        auto f = open_out(dir / ("composition" + suffix));
        f << "class,system,documents,single,pct_single,mean_weight,size\n";
        for (std::size_t i = 0; i < classes.size(); ++i)
            for (const auto* row : {&comp_a[i], &comp_b[i]}) {
                const char* sys = row == &comp_a[i] ? "ASJC-FRAC" : "U1-F-0.8";
                f << code(row->cls) << ',' << sys << ','
                  << row->documents << ',' << row->single << ',' << num(row->pct_single) << ','
                  << num(row->mean_weight) << ',' << num(row->size) << '\n';
            }
    }

    std::vector<double> size_a, size_b, in_flow, out_flow, pct_in, pct_out;
    for (const auto& s : stats) {
        size_a.push_back(s.size_a);
        size_b.push_back(s.size_b);
        in_flow.push_back(s.incoming);
        out_flow.push_back(s.outgoing);
        if (std::isfinite(s.pct_incoming)) pct_in.push_back(s.pct_incoming);
        if (std::isfinite(s.pct_outgoing)) pct_out.push_back(s.pct_outgoing);
    }
    {
        auto h = size_histogram(size_a, config.bin_width);
        auto g = size_histogram(size_b, config.bin_width);
        const std::size_t bins = std::max(h.size(), g.size());
        h = size_histogram(size_a, config.bin_width, bins);
        g = size_histogram(size_b, config.bin_width, bins);
        auto f = open_out(dir / ("histogram" + suffix));
        f << "system,lower,upper,count,pct\n";
        for (const auto& b : h)
            f << "ASJC-FRAC," << num(b.lower) << ',' << num(b.upper) << ',' << b.count << ',' << num(b.pct) << '\n';
        for (const auto& b : g)
            f << "U1-F-0.8," << num(b.lower) << ',' << num(b.upper) << ',' << b.count << ',' << num(b.pct) << '\n';
    }

    auto stat_row = [](std::ostream& f, const std::vector<double>& v) {
        if (v.empty()) {
            f << "NA,NA,NA\n";
            return;
        }
        const auto s = summary_stats(v);
        f << num(s.mean) << ',' << num(s.std) << ',' << num(s.cv_pct) << '\n';
    };
    {
        auto f = open_out(dir / ("summary_flows" + suffix));
        f << "variable,mean,std,cv_pct\n";
        const std::pair<const char*, const std::vector<double>*> rows[] = {
            {"size_asjc", &size_a}, {"size_u1", &size_b},    {"outgoing", &out_flow},
            {"pct_outgoing", &pct_out}, {"incoming", &in_flow}, {"pct_incoming", &pct_in}};
        for (const auto& [name, v] : rows) {
            f << name << ',';
            stat_row(f, *v);
        }
    }
    {
        auto f = open_out(dir / ("summary_weights" + suffix));
        f << "system,variable,mean,std,cv_pct\n";
        for (const auto* comp : {&comp_a, &comp_b}) {
            const char* sys = comp == &comp_a ? "ASJC-FRAC" : "U1-F-0.8";
            std::vector<double> mean_w, single;
            for (const auto& c : *comp) {
                if (std::isfinite(c.mean_weight)) mean_w.push_back(c.mean_weight);
                if (std::isfinite(c.pct_single)) single.push_back(c.pct_single);
            }
            f << sys << ",mean_weight,";
            stat_row(f, mean_w);
            f << sys << ",pct_single,";
            stat_row(f, single);
        }
    }
}

double parse_real(const csv::Row& row, std::size_t i, const std::string& source) {
    const auto& s = row.fields.at(i);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(source, row.line, row.columns.at(i), "expected a number, got '" + s + "'");
    return v;
}

csv::Row expect_header(csv::Reader& reader, const std::vector<std::string>& header, const std::string& source) {
    csv::Row row;
    if (!reader.next(row) || row.fields != header) throw ParseError(source, 1, 1, "unexpected header");
    return row;
}

} // namespace

int cmd_ingest(const RunConfig& config, std::ostream& log) {
    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec) {
        log << "ingest: cannot create '" << config.out.string() << "'\n";
        return kExitUsage;
    }
    fs::remove(config.out / kSummary, ec);

    std::vector<std::string> report;
    const int code = guarded(log, "ingest", [&] {
        if (config.scheme.empty() || config.journals.empty() || config.documents.empty())
            throw UsageError("ingest needs scheme, journals and documents paths");
        YearBounds bounds;
        if (config.year_min) bounds.min = *config.year_min;
        if (config.year_max) bounds.max = *config.year_max;
        try {
            Scheme scheme = load_scheme(config.scheme);
            Corpus corpus = load_corpus(config.journals, config.documents, scheme, bounds);

            const fs::path dir = config.out / kIngested;
            fs::create_directories(dir);
            {
                auto f = open_out(dir / "scheme.csv");
                write_scheme(scheme, f);
            }
            {
                auto f = open_out(dir / "journals.jsonl");
                write_journals(corpus, f);
            }
            {
                auto f = open_out(dir / "documents.jsonl");
                write_documents(corpus, f);
            }

            std::size_t below = 0;
            for (DocIndex d = 0; d < corpus.size(); ++d)
                if (corpus.reference_count(d) < static_cast<std::size_t>(config.min_references)) ++below;
            const auto& r = corpus.load_report();
            report.push_back("status: ok");
            report.push_back("documents: " + std::to_string(corpus.size()));
            report.push_back("journals: " + std::to_string(corpus.journal_count()));
            report.push_back("references: " + std::to_string(corpus.total_references()));
            report.push_back("external_references: " + std::to_string(r.external_references));
            report.push_back("duplicate_references_dropped: " + std::to_string(r.duplicate_references_dropped));
            report.push_back("documents_below_min_references: " + std::to_string(below));

            json summary = {{"documents", corpus.size()},
                            {"journals", corpus.journal_count()},
                            {"references", corpus.total_references()},
                            {"external_references", r.external_references},
                            {"duplicate_references_dropped", r.duplicate_references_dropped},
                            {"documents_below_min_references", below},
                            {"min_year", corpus.min_year()},
                            {"max_year", corpus.max_year()},
                            {"categories", scheme.category_count()},
                            {"areas", scheme.area_count()}};
            auto f = open_out(config.out / kSummary);
            f << summary.dump(2) << '\n';
        } catch (const std::exception& e) {
            report.push_back("status: failed");
            report.push_back(std::string("error: ") + e.what());
            throw;
        }
    });
    try {
        auto f = open_out(config.out / "validation_report.txt");
        for (const auto& line : report) f << line << '\n';
    } catch (const IoError& e) {
        log << "ingest: " << e.what() << '\n';
        return kExitUsage;
    }
    if (code == kExitOk) log << "ingest: " << report[1] << ", " << report[3] << '\n';
    return code;
}

int cmd_classify(const RunConfig& config, const std::vector<std::string>& systems, std::ostream& log) {
    return guarded(log, "classify", [&] {
        bool want_asjc = false, want_u1 = false;
        for (const auto& s : systems) {
            if (s == "asjc-frac") want_asjc = true;
            else if (s == "u1f08") want_u1 = true;
            else if (s == "both") want_asjc = want_u1 = true;
            else throw UsageError("unknown system '" + s + "'");
        }
        const auto in = load_ingested(config);
        const AssignmentSet asjc = classify_asjc_all(in.corpus, in.scheme);
        if (want_asjc) {
            write_assignments(asjc, in.corpus, in.scheme, config.out / kAsjcFile);
            log << "classify: ASJC-FRAC -> " << kAsjcFile << '\n';
        }
        if (want_u1) {
            CiterOptions options;
            options.policy = policy_of(config);
            options.citer_window = config.citer_window;
            options.workers = config.workers;
            const CitationIndex index(in.corpus, std::nullopt);
            const AssignmentSet u1 = classify_u1f08(in.corpus, index, asjc, options);
            write_assignments(u1, in.corpus, in.scheme, config.out / kU1File);
            log << "classify: U1-F-0.8 -> " << kU1File << '\n';
        }
    });
}

int cmd_compare(const RunConfig& config, std::ostream& log) {
    return guarded(log, "compare", [&] {
        require(config.out / kAsjcFile, "classify");
        require(config.out / kU1File, "classify");
        const auto in = load_ingested(config);
        const AssignmentSet asjc = read_assignments(config.out / kAsjcFile, in.corpus, in.scheme);
        const AssignmentSet u1 = read_assignments(config.out / kU1File, in.corpus, in.scheme);
        for (Level level : {Level::area, Level::category}) {
            const FlowMatrix m = flow_matrix(asjc, u1, level, in.scheme);
            write_level(m, in, asjc, u1, config, config.out);
        }
        log << "compare: " << in.corpus.size() << " documents\n";
    });
}

int cmd_indicators(const RunConfig& config, std::ostream& log) {
    return guarded(log, "indicators", [&] {
        require(config.out / kAsjcFile, "classify");
        require(config.out / kU1File, "classify");
        const auto in = load_ingested(config);
        const Corpus& corpus = in.corpus;
        const Scheme& scheme = in.scheme;
        const AssignmentSet asjc = read_assignments(config.out / kAsjcFile, corpus, scheme);
        const AssignmentSet u1 = read_assignments(config.out / kU1File, corpus, scheme);
        const CitationIndex index(corpus, config.citation_window);
        const auto& cit = index.citation_counts();

        const auto base_a = category_baselines(corpus, asjc, cit);
        const auto base_b = category_baselines(corpus, u1, cit);
        const auto ni_a = normalized_impacts(corpus, asjc, cit, base_a);
        const auto ni_b = normalized_impacts(corpus, u1, cit, base_b);

        const auto thr10_a = excellence_thresholds(corpus, asjc, cit, 0.10, scheme);
        const auto thr10_b = excellence_thresholds(corpus, u1, cit, 0.10, scheme);
        const auto thr1_a = excellence_thresholds(corpus, asjc, cit, 0.01, scheme);
        const auto thr1_b = excellence_thresholds(corpus, u1, cit, 0.01, scheme);
        const auto ex10_a = excellence_flags(corpus, asjc, cit, thr10_a, scheme);
        const auto ex10_b = excellence_flags(corpus, u1, cit, thr10_b, scheme);
        const auto ex1_a = excellence_flags(corpus, asjc, cit, thr1_a, scheme);
        const auto ex1_b = excellence_flags(corpus, u1, cit, thr1_b, scheme);

        {
            auto f = open_out(config.out / "indicators.csv");
            f << "doc_id,system,ni,exc10,exc1\n";
            std::string line;
            for (DocIndex d = 0; d < corpus.size(); ++d) {
                const std::string id = csv::escape(corpus.doc_id(d));
                line = id + ",ASJC-FRAC," + num(ni_a.ni[d]) + (ex10_a[d] ? ",1" : ",0") + (ex1_a[d] ? ",1\n" : ",0\n");
                line += id + ",U1-F-0.8," + num(ni_b.ni[d]) + (ex10_b[d] ? ",1" : ",0") + (ex1_b[d] ? ",1\n" : ",0\n");
                f << line;
            }
        }
        auto write_baselines = [&](const BaselineTable& t, const char* file) {
            auto f = open_out(config.out / file);
            f << "doc_type,year,class,mean_citations,cell_weight\n";
            for (const auto& c : t.cells())
                f << csv::escape(corpus.type_name(c.key.type)) << ',' << c.key.year << ','
                  << csv::escape(scheme.categories()[c.key.cls].code) << ',' << num(c.mean_citations()) << ','
                  << num(c.weight) << '\n';
        };
        write_baselines(base_a, "baselines_asjc.csv");
        write_baselines(base_b, "baselines_u1f08.csv");

        {
            auto f = open_out(config.out / "ni_diff_by_year.csv");
            f << "year,documents,mean_abs_diff\n";
            for (const auto& y : ni_abs_diff_series(ni_a.ni, ni_b.ni, corpus, config.drop_last_year))
                f << y.year << ',' << y.documents << ',' << num(y.mean_abs_diff) << '\n';
        }
        {
            const auto sa = ni_std_by_area(ni_a.ni, asjc, scheme);
            const auto sb = ni_std_by_area(ni_b.ni, u1, scheme);
            auto lookup = [](const std::vector<AreaSpread>& v, ClassIndex a) {
                for (const auto& s : v)
                    if (s.area == a) return s.weighted_std;
                return kUndefined;
            };
            auto f = open_out(config.out / "ni_std_by_area.csv");
            f << "area,std_ni_asjc,std_ni_u1\n";
            for (auto a : scheme.regular_areas())
                f << csv::escape(scheme.areas()[a].code) << ',' << num(lookup(sa, a)) << ',' << num(lookup(sb, a)) << '\n';
        }
        auto write_overlap = [&](const std::vector<char>& fa, const std::vector<char>& fb, const char* file) {
            auto f = open_out(config.out / file);
            f << "area,pct_common,pct_only_u1,pct_only_asjc\n";
            for (const auto& o : excellence_overlap(fa, fb, u1, scheme))
                f << csv::escape(scheme.areas()[o.area].code) << ',' << num(o.pct_common) << ',' << num(o.pct_only_b) << ',' << num(o.pct_only_a) << '\n';
        };
        write_overlap(ex10_a, ex10_b, "excellence_overlap_p10.csv");
        write_overlap(ex1_a, ex1_b, "excellence_overlap_p01.csv");

        {
            auto f = open_out(config.out / "ref_stats_by_year.csv");
            f << "year,documents,below_threshold,pct_below_threshold\n";
            for (const auto& y : ref_stats_by_year(corpus, static_cast<std::size_t>(config.min_references)))
                f << y.year << ',' << y.documents << ',' << y.below_threshold << ',' << num(y.pct_below_threshold)
                  << '\n';
        }
        log << "indicators: " << corpus.size() << " documents, " << ni_a.zero_mean_terms + ni_b.zero_mean_terms
            << " zero-mean category terms\n";
    });
}

int cmd_network(const RunConfig& config, std::ostream& log) {
    return guarded(log, "network", [&] {
        const fs::path stats_path = config.out / "class_stats_area.csv";
        const fs::path flows_path = config.out / "flows_area.csv";
        require(stats_path, "compare");
        require(flows_path, "compare");
        require(config.out / kIngested / "scheme.csv", "ingest");
        const Scheme scheme = load_scheme(config.out / kIngested / "scheme.csv");

        FlowMatrix m(Level::area, scheme.area_count());
        std::vector<ClassIndex> classes;
        auto area = [&](const csv::Row& row, std::size_t i, const std::string& source) {
            auto a = scheme.find_area(row.fields.at(i));
            if (!a) throw ParseError(source, row.line, row.columns.at(i), "unknown area '" + row.fields[i] + "'");
            return *a;
        };
        {
            std::ifstream f(stats_path, std::ios::binary);
            csv::Reader reader(f, stats_path.string());
            expect_header(reader,
                          {"class", "size_asjc", "size_u1", "common", "incoming", "outgoing", "pct_in", "pct_out"},
                          stats_path.string());
            csv::Row row;
            while (reader.next(row)) {
                if (row.fields.size() != 8) throw ParseError(stats_path.string(), row.line, 1, "expected 8 fields");
                const ClassIndex a = area(row, 0, stats_path.string());
                classes.push_back(a);
                m.set_sizes(a, parse_real(row, 1, stats_path.string()), parse_real(row, 2, stats_path.string()),
                            parse_real(row, 3, stats_path.string()));
            }
        }
        {
            std::ifstream f(flows_path, std::ios::binary);
            csv::Reader reader(f, flows_path.string());
            expect_header(reader, {"level", "from", "to", "weight"}, flows_path.string());
            csv::Row row;
            while (reader.next(row)) {
                if (row.fields.size() != 4) throw ParseError(flows_path.string(), row.line, 1, "expected 4 fields");
                m.set_flow(area(row, 1, flows_path.string()), area(row, 2, flows_path.string()),
                           parse_real(row, 3, flows_path.string()));
            }
        }
        if (classes.empty()) throw ValidationError("class_stats_area.csv lists no classes");

        const FlowGraph graph = build_flow_graph(m, classes, scheme, config.edge_epsilon);
        const Partition partition = detect_communities(graph);
        LayoutParams params;
        params.iterations = config.layout_iterations;
        params.seed = config.seed;
        params.repulsion = config.repulsion == "uniform" ? Repulsion::uniform : Repulsion::degree;
        const Layout layout = linlog_layout(graph, params);
        const GraphFormat format = parse_graph_format(config.graph_format);
        const char* file = format == GraphFormat::json ? "network.json" : "network.graphml";
        export_graph(graph, partition, layout, format, config.out / file);
        log << "network: " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges, "
            << partition.communities() << " communities, Q=" << csv::fixed(partition.q) << '\n';
    });
}

int cmd_report(const RunConfig& config, std::ostream& log) {
    int code = kExitOk;
    const int rc = guarded(log, "report", [&] {
        json manifest;
        manifest["datasets"] = json::array();
        for (const auto& schema : dataset_schemas()) {
            const auto problems = validate_dataset(schema, config.out);
            for (const auto& p : problems) log << "report: " << p << '\n';
            if (!problems.empty()) code = kExitDomain;
            manifest["datasets"].push_back({{"artifact", schema.artifact},
                                            {"file", schema.file},
                                            {"stage", schema.stage},
                                            {"columns", schema.columns},
                                            {"valid", problems.empty()}});
        }
        auto f = open_out(config.out / "manifest.json");
        f << manifest.dump(2) << '\n';
        log << "report: " << dataset_schemas().size() << " datasets, manifest.json written\n";
    });
    return rc != kExitOk ? rc : code;
}

int cmd_syngen(const KeyValues& params, const fs::path& out, std::ostream& log) {
    syngen::SynParams p;
    try {
        p = syngen::parse_params(params);
    } catch (const std::invalid_argument& e) {
        log << "syngen: " << e.what() << '\n';
        return kExitUsage;
    }
    return guarded(log, "syngen", [&] {
        const auto records = syngen::generate_records(p);
        syngen::write_records(records, out);
        std::size_t refs = 0;
        for (const auto& d : records.documents) refs += d.references.size();
        log << "syngen: " << records.documents.size() << " documents, " << refs << " references -> "
            << out.string() << '\n';
    });
}

} // namespace citeclass::cli
