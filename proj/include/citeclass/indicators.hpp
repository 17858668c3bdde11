#pragma once

#include "citeclass/category_vector.hpp"
#include "citeclass/corpus.hpp"
#include "citeclass/scheme.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace citeclass {

/// (doc_type, year, class) cell. `cls` is a category for baselines and an
/// area for excellence thresholds. Ordering is type index, year, class.
struct CellKey {
    std::uint16_t type = 0;
    int year = 0;
    ClassIndex cls = 0;
    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct BaselineCell {
    CellKey key;
    double weighted_citations = 0.0; // sum of w * cit
    double weight = 0.0;             // sum of w
    double mean_citations() const noexcept { return weight > 0.0 ? weighted_citations / weight : 0.0; }
};

/// Weighted mean citations per (type, year, category).
class BaselineTable {
public:
    BaselineTable() = default;
    explicit BaselineTable(std::vector<BaselineCell> cells); // sorted by key

    const BaselineCell* find(const CellKey& key) const;
    std::span<const BaselineCell> cells() const noexcept { return cells_; }

private:
    std::vector<BaselineCell> cells_;
};

BaselineTable category_baselines(const Corpus& corpus, const AssignmentSet& set,
                                 std::span<const std::uint64_t> citations);

struct NormalizedImpact {
    std::vector<double> ni;           // per document
    std::size_t zero_mean_terms = 0;  // category terms skipped because the cell mean was 0
};

/// NI(d) = sum_c w_dc * cit(d) / mean(type, year, c). Zero-mean cells add 0.
double normalized_impact(DocIndex doc, std::span<const WeightEntry> weights, std::uint64_t citations,
                         const Corpus& corpus, const BaselineTable& baselines, std::size_t* zero_mean_terms = nullptr);

NormalizedImpact normalized_impacts(const Corpus& corpus, const AssignmentSet& set,
                                    std::span<const std::uint64_t> citations, const BaselineTable& baselines);

struct YearDiff {
    int year = 0;
    double mean_abs_diff = 0.0;
    std::size_t documents = 0;
};

/// Per year, unweighted mean of |NI_A - NI_B|. With drop_last_year the
/// corpus' final year is left out of the series.
std::vector<YearDiff> ni_abs_diff_series(std::span<const double> ni_a, std::span<const double> ni_b,
                                         const Corpus& corpus, bool drop_last_year);

struct AreaSpread {
    ClassIndex area = 0;
    double weighted_std = 0.0;
    double weighted_mean = 0.0;
    double weight = 0.0;
};

/// Population std of NI weighted by each document's area weight. Areas with
/// no weight are omitted.
std::vector<AreaSpread> ni_std_by_area(std::span<const double> ni, const AssignmentSet& set, const Scheme& scheme);

struct ExcellenceCell {
    CellKey key;                      // cls = area
    std::uint64_t cut = 0;            // documents with citations >= cut are excellent
    double weight = 0.0;              // area weight in the cell
    double excellent_weight = 0.0;    // weight with citations >= cut
    double share() const noexcept { return weight > 0.0 ? excellent_weight / weight : 0.0; }
};

class ExcellenceThresholds {
public:
    ExcellenceThresholds(double p, std::vector<ExcellenceCell> cells);

    double p() const noexcept { return p_; }
    std::span<const ExcellenceCell> cells() const noexcept { return cells_; }
    const ExcellenceCell* find(const CellKey& key) const;

private:
    double p_;
    std::vector<ExcellenceCell> cells_;
};

/// Smallest integer cut per (type, year, area) whose weighted share of
/// documents at or above it does not exceed p.
ExcellenceThresholds excellence_thresholds(const Corpus& corpus, const AssignmentSet& set,
                                           std::span<const std::uint64_t> citations, double p, const Scheme& scheme);

/// Minimal cut for one cell from (citations, weight) pairs; exposed for tests.
ExcellenceCell excellence_cut(std::vector<std::pair<std::uint64_t, double>> docs, double p);

/// 1 when a document clears the cut in at least one area where it has weight.
std::vector<char> excellence_flags(const Corpus& corpus, const AssignmentSet& set,
                                   std::span<const std::uint64_t> citations, const ExcellenceThresholds& thresholds,
                                   const Scheme& scheme);

struct AreaOverlap {
    ClassIndex area = 0;
    double pct_common = 0.0;
    double pct_only_b = 0.0;
    double pct_only_a = 0.0;
};

/// Per area (weights from system B), share of B-size excellent in both
/// systems, only in B, only in A.
std::vector<AreaOverlap> excellence_overlap(std::span<const char> flags_a, std::span<const char> flags_b,
                                            const AssignmentSet& set_b, const Scheme& scheme);

} // namespace citeclass
