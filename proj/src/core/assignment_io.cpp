#include "citeclass/assignment_io.hpp"

#include "citeclass/error.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>

namespace citeclass {

using nlohmann::json;

std::string format_weight(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

namespace {

std::string class_code(const Scheme& scheme, ClassIndex c) {
    if (c < scheme.category_count()) return scheme.categories()[c].code;
    if (c == scheme.multi_index() && scheme.multidisciplinary_area())
        return scheme.areas()[*scheme.multidisciplinary_area()].code;
    throw ValidationError("class index " + std::to_string(c) + " outside the scheme");
}

AssignmentSet::System parse_system(const std::string& s, const std::string& source, std::size_t line) {
    if (s == "ASJC-FRAC") return AssignmentSet::System::asjc_frac;
    if (s == "U1-F-0.8") return AssignmentSet::System::u1f08;
    throw ParseError(source, line, 1, "unknown system '" + s + "'");
}

} // namespace

void write_assignments(const AssignmentSet& set, const Corpus& corpus, const Scheme& scheme, std::ostream& out) {
    if (set.size() != corpus.size()) throw ValidationError("assignment set does not match corpus size");
    const std::string system = json(system_name(set.system())).dump();
    std::string line;
    for (DocIndex d = 0; d < corpus.size(); ++d) {
        line.clear();
        line += "{\"doc_id\":";
        line += json(corpus.doc_id(d)).dump();
        line += ",\"system\":";
        line += system;
        line += ",\"weights\":{";
        bool first = true;
        for (const auto& e : set.row(d)) {
            if (!first) line += ',';
            first = false;
            line += json(class_code(scheme, e.cls)).dump();
            line += ':';
            line += format_weight(e.weight);
        }
        line += "}}\n";
        out << line;
    }
}

void write_assignments(const AssignmentSet& set, const Corpus& corpus, const Scheme& scheme,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    write_assignments(set, corpus, scheme, out);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

AssignmentSet read_assignments(std::istream& in, const Corpus& corpus, const Scheme& scheme,
                               const std::string& source) {
    std::vector<std::vector<WeightEntry>> rows(corpus.size());
    std::vector<char> seen(corpus.size(), 0);
    std::optional<AssignmentSet::System> system;

    std::string line;
    std::size_t lineno = 0;
    std::vector<WeightEntry> entries;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, lineno, e.byte == 0 ? 1 : e.byte, "invalid JSON");
        }
        try {
            const auto id = obj.at("doc_id").get<std::string>();
            const auto sys = parse_system(obj.at("system").get<std::string>(), source, lineno);
            if (system && *system != sys) throw ParseError(source, lineno, 1, "mixed systems in one file");
            system = sys;
            auto d = corpus.find(id);
            if (!d) throw ValidationError("assignment for unknown doc_id '" + id + "'");
            if (seen[*d]) throw ValidationError("duplicate assignment for doc_id '" + id + "'");
            seen[*d] = 1;
            entries.clear();
            for (const auto& [code, w] : obj.at("weights").items()) {
                auto c = scheme.resolve_journal_code(code);
                if (!c) throw ValidationError("assignment uses unknown code '" + code + "'");
                entries.push_back({*c, w.get<double>()});
            }
            auto v = CategoryVector::from_entries(entries);
            rows[*d].assign(v.entries().begin(), v.entries().end());
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, 1, std::string("malformed assignment: ") + e.what());
        }
    }
    for (DocIndex d = 0; d < corpus.size(); ++d)
        if (!seen[d]) throw ValidationError("no assignment for doc_id '" + corpus.doc_id(d) + "'");

    AssignmentSet out(system.value_or(AssignmentSet::System::asjc_frac));
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    out.reserve(rows.size(), total);
    for (const auto& r : rows) out.append(r);
    return out;
}

AssignmentSet read_assignments(const std::filesystem::path& path, const Corpus& corpus, const Scheme& scheme) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open assignments '" + path.string() + "'");
    return read_assignments(in, corpus, scheme, path.string());
}

} // namespace citeclass
