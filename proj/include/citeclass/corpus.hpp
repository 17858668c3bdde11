#pragma once

#include "citeclass/scheme.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace citeclass {

using DocIndex = std::uint32_t;
using JournalIndex = std::uint32_t;

struct Journal {
    std::string journal_id;
    std::vector<std::string> asjc_codes;    // as given in the input
    std::vector<ClassIndex> resolved;       // same order; multi_index() for the multidisciplinary code
};

/// A reference is either an in-corpus document or an external id (a citation
/// to something the corpus does not contain). External references count
/// toward a document's reference total but carry no citers.
class Reference {
public:
    static Reference internal(DocIndex doc) { return Reference(static_cast<std::int64_t>(doc)); }
    static Reference external(std::uint32_t pool_index) {
        return Reference(-static_cast<std::int64_t>(pool_index) - 1);
    }

    bool is_external() const noexcept { return raw_ < 0; }
    DocIndex doc() const noexcept { return static_cast<DocIndex>(raw_); }
    std::uint32_t external_index() const noexcept { return static_cast<std::uint32_t>(-raw_ - 1); }

    friend bool operator==(Reference, Reference) = default;

private:
    explicit Reference(std::int64_t raw) : raw_(raw) {}
    std::int64_t raw_;
};

struct YearBounds {
    int min = std::numeric_limits<int>::min();
    int max = std::numeric_limits<int>::max();
    bool contains(int y) const noexcept { return y >= min && y <= max; }
};

struct LoadReport {
    std::size_t duplicate_references_dropped = 0;
    std::size_t external_references = 0;
};

/// Immutable after construction. Documents are ordered by doc_id, journals by
/// journal_id; the reference order inside a document is preserved.
class Corpus {
public:
    struct DocumentRecord {
        std::string doc_id;
        std::string journal_id;
        int year = 0;
        std::string doc_type;
        std::vector<std::string> references;
        std::uint64_t external_citations = 0;
    };

    /// Validates and indexes raw records. Throws ValidationError on duplicate
    /// ids, unresolved journals, self references, years outside `bounds`.
    Corpus(std::vector<Journal> journals, std::vector<DocumentRecord> documents, YearBounds bounds = {});

    std::size_t size() const noexcept { return doc_ids_.size(); }
    std::size_t journal_count() const noexcept { return journals_.size(); }

    const std::string& doc_id(DocIndex d) const { return doc_ids_[d]; }
    JournalIndex journal_of(DocIndex d) const { return journal_of_[d]; }
    int year(DocIndex d) const { return year_[d]; }
    std::uint16_t type_of(DocIndex d) const { return type_of_[d]; }
    const std::string& type_name(std::uint16_t t) const { return type_names_[t]; }
    std::size_t type_count() const noexcept { return type_names_.size(); }
    std::uint64_t external_citations(DocIndex d) const { return external_citations_[d]; }

    std::span<const Reference> references(DocIndex d) const {
        return {refs_.data() + ref_offsets_[d], refs_.data() + ref_offsets_[d + 1]};
    }
    std::size_t reference_count(DocIndex d) const { return ref_offsets_[d + 1] - ref_offsets_[d]; }
    std::size_t total_references() const noexcept { return refs_.size(); }
    const std::string& external_id(std::uint32_t i) const { return external_ids_[i]; }

    const std::vector<Journal>& journals() const noexcept { return journals_; }
    const Journal& journal(JournalIndex j) const { return journals_[j]; }

    std::optional<DocIndex> find(const std::string& doc_id) const;
    std::optional<JournalIndex> find_journal(const std::string& journal_id) const;

    int min_year() const noexcept { return min_year_; }
    int max_year() const noexcept { return max_year_; }

    const LoadReport& load_report() const noexcept { return report_; }

private:
    std::vector<Journal> journals_;
    std::vector<std::string> doc_ids_;
    std::vector<JournalIndex> journal_of_;
    std::vector<int> year_;
    std::vector<std::uint16_t> type_of_;
    std::vector<std::string> type_names_;
    std::vector<std::uint64_t> external_citations_;
    std::vector<std::size_t> ref_offsets_;
    std::vector<Reference> refs_;
    std::vector<std::string> external_ids_;
    int min_year_ = 0;
    int max_year_ = 0;
    LoadReport report_;
};

/// Journals JSONL: {"journal_id": "...", "asjc_codes": ["...", ...]}
std::vector<Journal> parse_journals(std::istream& in, const Scheme& scheme, const std::string& source = "<journals>");

/// Documents JSONL: {"doc_id", "journal_id", "year", "doc_type", "references": [...], "external_citations"?}
std::vector<Corpus::DocumentRecord> parse_documents(std::istream& in, const std::string& source = "<documents>");

Corpus load_corpus(const std::filesystem::path& journals, const std::filesystem::path& documents,
                   const Scheme& scheme, YearBounds bounds = {});

/// Canonical serialization (ids sorted, keys in fixed order, no whitespace).
void write_journals(const Corpus& corpus, std::ostream& out);
void write_documents(const Corpus& corpus, std::ostream& out);

/// Year-window filter for citation counts. `std::nullopt` means unbounded.
using CitationWindow = std::optional<int>;

/// Inverse of the reference lists plus windowed citation counts.
class CitationIndex {
public:
    CitationIndex(const Corpus& corpus, CitationWindow window);

    /// Citing documents, ascending (== doc_id order). Never window-filtered.
    std::span<const DocIndex> citers(DocIndex d) const {
        return {citers_.data() + offsets_[d], citers_.data() + offsets_[d + 1]};
    }
    /// In-window in-corpus citers plus external citations.
    std::uint64_t citation_count(DocIndex d) const { return counts_[d]; }
    const std::vector<std::uint64_t>& citation_counts() const noexcept { return counts_; }
    CitationWindow window() const noexcept { return window_; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<DocIndex> citers_;
    std::vector<std::uint64_t> counts_;
    CitationWindow window_;
};

inline CitationIndex build_citation_index(const Corpus& corpus, CitationWindow window) {
    return CitationIndex(corpus, window);
}

struct YearRefStat {
    int year = 0;
    std::size_t documents = 0;
    std::size_t below_threshold = 0;
    double pct_below_threshold = 0.0;
};

/// Share of documents per year with fewer than `threshold` references
/// (external references included). Years without documents are omitted.
std::vector<YearRefStat> ref_stats_by_year(const Corpus& corpus, std::size_t threshold = 3);

} // namespace citeclass
