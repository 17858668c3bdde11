#include "citeclass/corpus.hpp"

#include "citeclass/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace citeclass {

using nlohmann::json;

Corpus::Corpus(std::vector<Journal> journals, std::vector<DocumentRecord> documents, YearBounds bounds)
    : journals_(std::move(journals)) {
    std::sort(journals_.begin(), journals_.end(),
              [](const Journal& a, const Journal& b) { return a.journal_id < b.journal_id; });
    for (std::size_t i = 1; i < journals_.size(); ++i)
        if (journals_[i - 1].journal_id == journals_[i].journal_id)
            throw ValidationError("duplicate journal_id '" + journals_[i].journal_id + "'");

    std::sort(documents.begin(), documents.end(),
              [](const DocumentRecord& a, const DocumentRecord& b) { return a.doc_id < b.doc_id; });
    for (std::size_t i = 1; i < documents.size(); ++i)
        if (documents[i - 1].doc_id == documents[i].doc_id)
            throw ValidationError("duplicate doc_id '" + documents[i].doc_id + "'");

    const std::size_t n = documents.size();
    if (n > std::numeric_limits<DocIndex>::max()) throw ValidationError("too many documents");

    doc_ids_.reserve(n);
    for (auto& doc : documents) doc_ids_.push_back(std::move(doc.doc_id));
    std::unordered_map<std::string_view, DocIndex> index;
    index.reserve(n);
    for (DocIndex d = 0; d < n; ++d) index.emplace(doc_ids_[d], d);

    std::map<std::string, std::uint16_t> types;
    for (const auto& doc : documents) types.emplace(doc.doc_type, 0);
    if (types.size() > std::numeric_limits<std::uint16_t>::max()) throw ValidationError("too many doc types");
    for (auto& [name, id] : types) {
        id = static_cast<std::uint16_t>(type_names_.size());
        type_names_.push_back(name);
    }

    journal_of_.reserve(n);
    year_.reserve(n);
    type_of_.reserve(n);
    external_citations_.reserve(n);
    ref_offsets_.reserve(n + 1);
    ref_offsets_.push_back(0);

    std::unordered_map<std::string, std::uint32_t> external_index;
    std::vector<Reference> seen; // per-document duplicate filter
    min_year_ = std::numeric_limits<int>::max();
    max_year_ = std::numeric_limits<int>::min();

    for (DocIndex d = 0; d < n; ++d) {
        auto& doc = documents[d];
        const std::string& id = doc_ids_[d];
        if (id.empty()) throw ValidationError("empty doc_id");
        if (!bounds.contains(doc.year))
            throw ValidationError("document '" + id + "' year " + std::to_string(doc.year) +
                                  " outside period [" + std::to_string(bounds.min) + ", " +
                                  std::to_string(bounds.max) + "]");
        auto j = find_journal(doc.journal_id);
        if (!j)
            throw ValidationError("document '" + id + "' has unknown journal_id '" + doc.journal_id + "'");

        seen.clear();
        for (const auto& ref : doc.references) {
            if (ref == id) throw ValidationError("document '" + id + "' references itself");
            Reference r = Reference::internal(0);
            if (auto it = index.find(ref); it != index.end()) {
                r = Reference::internal(it->second);
            } else {
                auto [eit, fresh] =
                    external_index.try_emplace(ref, static_cast<std::uint32_t>(external_ids_.size()));
                if (fresh) external_ids_.push_back(ref);
                r = Reference::external(eit->second);
            }
            if (std::find(seen.begin(), seen.end(), r) != seen.end()) {
                ++report_.duplicate_references_dropped;
                continue;
            }
            seen.push_back(r);
            if (r.is_external()) ++report_.external_references;
            refs_.push_back(r);
        }
        ref_offsets_.push_back(refs_.size());

        journal_of_.push_back(*j);
        year_.push_back(doc.year);
        type_of_.push_back(types.at(doc.doc_type));
        external_citations_.push_back(doc.external_citations);
        min_year_ = std::min(min_year_, doc.year);
        max_year_ = std::max(max_year_, doc.year);
        doc.references.clear();
        doc.references.shrink_to_fit();
    }
    if (n == 0) min_year_ = max_year_ = 0;
    refs_.shrink_to_fit();
}

std::optional<DocIndex> Corpus::find(const std::string& doc_id) const {
    auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id);
    if (it == doc_ids_.end() || *it != doc_id) return std::nullopt;
    return static_cast<DocIndex>(it - doc_ids_.begin());
}

std::optional<JournalIndex> Corpus::find_journal(const std::string& journal_id) const {
    auto it = std::lower_bound(journals_.begin(), journals_.end(), journal_id,
                               [](const Journal& j, const std::string& id) { return j.journal_id < id; });
    if (it == journals_.end() || it->journal_id != journal_id) return std::nullopt;
    return static_cast<JournalIndex>(it - journals_.begin());
}

namespace {

template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, lineno, e.byte == 0 ? 1 : e.byte, "invalid JSON");
        }
        if (!obj.is_object()) throw ParseError(source, lineno, 1, "record is not a JSON object");
        try {
            fn(obj, lineno);
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, 1, std::string("malformed record: ") + e.what());
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& source, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(source, line, 1, std::string("missing field '") + key + "'");
    return *it;
}

} // namespace

std::vector<Journal> parse_journals(std::istream& in, const Scheme& scheme, const std::string& source) {
    std::vector<Journal> out;
    for_each_json_line(in, source, [&](const json& obj, std::size_t line) {
        Journal j;
        j.journal_id = require(obj, "journal_id", source, line).get<std::string>();
        const auto& codes = require(obj, "asjc_codes", source, line);
        if (!codes.is_array()) throw ParseError(source, line, 1, "asjc_codes must be an array");
        for (const auto& c : codes) j.asjc_codes.push_back(c.get<std::string>());
        if (j.asjc_codes.empty())
            throw ValidationError("journal '" + j.journal_id + "' has an empty code list (line " +
                                  std::to_string(line) + ")");
        for (const auto& code : j.asjc_codes) {
            auto r = scheme.resolve_journal_code(code);
            if (!r)
                throw ValidationError("journal '" + j.journal_id + "' has unknown code '" + code + "' (line " +
                                      std::to_string(line) + ")");
            j.resolved.push_back(*r);
        }
        out.push_back(std::move(j));
    });
    return out;
}

std::vector<Corpus::DocumentRecord> parse_documents(std::istream& in, const std::string& source) {
    std::vector<Corpus::DocumentRecord> out;
    for_each_json_line(in, source, [&](const json& obj, std::size_t line) {
        Corpus::DocumentRecord d;
        d.doc_id = require(obj, "doc_id", source, line).get<std::string>();
        d.journal_id = require(obj, "journal_id", source, line).get<std::string>();
        d.year = require(obj, "year", source, line).get<int>();
        d.doc_type = require(obj, "doc_type", source, line).get<std::string>();
        const auto& refs = require(obj, "references", source, line);
        if (!refs.is_array()) throw ParseError(source, line, 1, "references must be an array");
        d.references.reserve(refs.size());
        for (const auto& r : refs) d.references.push_back(r.get<std::string>());
        if (auto it = obj.find("external_citations"); it != obj.end() && !it->is_null()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
                throw ParseError(source, line, 1, "external_citations must be a non-negative integer");
            d.external_citations = it->get<std::uint64_t>();
        }
        out.push_back(std::move(d));
    });
    return out;
}

Corpus load_corpus(const std::filesystem::path& journals, const std::filesystem::path& documents,
                   const Scheme& scheme, YearBounds bounds) {
    std::ifstream jin(journals);
    if (!jin) throw IoError("cannot open journals file '" + journals.string() + "'");
    std::ifstream din(documents);
    if (!din) throw IoError("cannot open documents file '" + documents.string() + "'");
    auto js = parse_journals(jin, scheme, journals.string());
    auto ds = parse_documents(din, documents.string());
    return Corpus(std::move(js), std::move(ds), bounds);
}

void write_journals(const Corpus& corpus, std::ostream& out) {
    for (const auto& j : corpus.journals()) {
        json obj = json::object();
        obj["journal_id"] = j.journal_id;
        obj["asjc_codes"] = j.asjc_codes;
        out << obj.dump() << '\n';
    }
}

void write_documents(const Corpus& corpus, std::ostream& out) {
    for (DocIndex d = 0; d < corpus.size(); ++d) {
        // Fixed key order (not alphabetical) matches the documented record layout.
        out << "{\"doc_id\":" << json(corpus.doc_id(d)).dump()
            << ",\"journal_id\":" << json(corpus.journal(corpus.journal_of(d)).journal_id).dump()
            << ",\"year\":" << corpus.year(d) << ",\"doc_type\":" << json(corpus.type_name(corpus.type_of(d))).dump()
            << ",\"references\":[";
        bool first = true;
        for (auto r : corpus.references(d)) {
            if (!first) out << ',';
            first = false;
            out << json(r.is_external() ? corpus.external_id(r.external_index()) : corpus.doc_id(r.doc())).dump();
        }
        out << ']';
        if (corpus.external_citations(d) > 0) out << ",\"external_citations\":" << corpus.external_citations(d);
        out << "}\n";
    }
}

CitationIndex::CitationIndex(const Corpus& corpus, CitationWindow window) : window_(window) {
    const std::size_t n = corpus.size();
    offsets_.assign(n + 1, 0);
    for (DocIndex d = 0; d < n; ++d)
        for (auto r : corpus.references(d))
            if (!r.is_external()) ++offsets_[r.doc() + 1];
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];

    citers_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Visiting citers in ascending order keeps each list sorted.
    for (DocIndex d = 0; d < n; ++d)
        for (auto r : corpus.references(d))
            if (!r.is_external()) citers_[cursor[r.doc()]++] = d;

    counts_.resize(n);
    for (DocIndex r = 0; r < n; ++r) {
        std::uint64_t c = corpus.external_citations(r);
        for (auto d : citers(r))
            if (!window || corpus.year(d) - corpus.year(r) <= *window) ++c;
        counts_[r] = c;
    }
}

std::vector<YearRefStat> ref_stats_by_year(const Corpus& corpus, std::size_t threshold) {
    std::map<int, YearRefStat> by_year;
    for (DocIndex d = 0; d < corpus.size(); ++d) {
        auto& s = by_year[corpus.year(d)];
        s.year = corpus.year(d);
        ++s.documents;
        if (corpus.reference_count(d) < threshold) ++s.below_threshold;
    }
    std::vector<YearRefStat> out;
    for (auto& [y, s] : by_year) {
        s.pct_below_threshold = 100.0 * static_cast<double>(s.below_threshold) / static_cast<double>(s.documents);
        out.push_back(s);
    }
    return out;
}

} // namespace citeclass
