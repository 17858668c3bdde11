#pragma once

// Seeded synthetic corpora with planted category structure, plus brute-force
// reference implementations used by the test suites. The oracles share no
// code with the production path; they read only the raw corpus and scheme.

#include "citeclass/category_vector.hpp"
#include "citeclass/citer.hpp"
#include "citeclass/corpus.hpp"
#include "citeclass/flow.hpp"
#include "citeclass/scheme.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace citeclass::syngen {

struct SynParams {
    std::size_t n_docs = 1000;
    std::size_t n_journals = 100;

    // Scheme shape.
    std::size_t areas = 6;
    std::size_t categories_per_area = 5;     // regular categories
    bool misc_categories = true;             // one misc category per area
    bool multidisciplinary_area = true;

    // Journal code lists.
    std::size_t max_journal_codes = 3;       // 1..3 codes per journal
    double misc_share = 0.2;                 // chance a journal lists its area's misc category
    double multidisciplinary_share = 0.05;   // share of purely multidisciplinary journals

    int year_min = 2012;
    int year_max = 2023;
    std::size_t refs_min = 3;
    std::size_t refs_max = 12;
    double intra_category_citation_prob = 0.8;
    std::uint64_t max_external_citations = 0;
    std::uint64_t seed = 42;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Reads flat `key = value` text (# comments). Unknown keys are an error.
SynParams parse_params(std::istream& in);
SynParams parse_params(const std::map<std::string, std::string>& kv);

struct SyntheticRecords {
    Scheme scheme;
    std::vector<Journal> journals;
    std::vector<Corpus::DocumentRecord> documents; // ascending doc_id == ascending year
    std::vector<ClassIndex> planted;               // per document, a regular category
};

/// Pure function of params. Documents cite strictly earlier years; documents
/// of the first year cite external ids only. With probability
/// intra_category_citation_prob a reference targets a document of the same
/// planted category; when that pool is exhausted the slot becomes an external
/// reference, so the in-corpus part never leaves the category. Throws
/// std::runtime_error when a later-year document has fewer than refs_min
/// earlier documents to cite.
SyntheticRecords generate_records(const SynParams& params);

struct SyntheticCorpus {
    Scheme scheme;
    Corpus corpus;
    std::vector<ClassIndex> planted; // per DocIndex
};

SyntheticCorpus generate_corpus(const SynParams& params);

/// Writes scheme.csv, journals.jsonl, documents.jsonl and planted.csv.
void write_records(const SyntheticRecords& records, const std::filesystem::path& dir);

/// Nested-loop U1-F-0.8 with dense vectors. Refuses corpora above 10,000 documents.
AssignmentSet oracle_classify(const Corpus& corpus, const Scheme& scheme, const ThresholdPolicy& policy);

/// Dense ASJC-FRAC by direct definition (used by oracle_classify).
AssignmentSet oracle_asjc(const Corpus& corpus, const Scheme& scheme);

/// Enumerates deficits and surpluses over at most 10 classes.
DocFlow oracle_flow(const CategoryVector& a, const CategoryVector& b);

} // namespace citeclass::syngen
