#pragma once

// Item-by-item classification from the origin of citers (U1-F-0.8).
//
// A document is described by its references; each reference is described by
// the journals of the documents that cite it. One pass, no iteration:
//
//   profile(r)   = mean ASJC-FRAC vector of r's citers, the document being
//                  classified excluded; r's own journal vector when nobody
//                  else cites it; empty for references outside the corpus
//   aggregate(d) = mean of the non-empty profiles of d's references
//   result(d)    = categories within theta of the heaviest, at most
//                  max_categories of them, weights renormalized
//
// Documents with fewer than min_references references, or whose aggregate is
// empty, keep their ASJC-FRAC vector.

#include "citeclass/category_vector.hpp"
#include "citeclass/corpus.hpp"
#include "citeclass/scheme.hpp"

#include <optional>
#include <span>

namespace citeclass {

struct ThresholdPolicy {
    double theta = 0.8;
    int max_categories = 5;
    int min_references = 3;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Two weights count as equal when they agree to this fraction of the maximum
/// weight; used for the theta cut and for cap tie-breaking so that rounding
/// noise cannot reorder exactly tied categories.
inline constexpr double kThresholdResolution = 1e-12;

/// Category profile of a reference as seen by `citing_doc`.
///
/// `asjc` holds the ASJC-FRAC vector of every document. `citer_window`, when
/// set, only admits citers at most that many years younger than the reference.
CategoryVector reference_profile(Reference ref, DocIndex citing_doc, const Corpus& corpus,
                                 const CitationIndex& index, const AssignmentSet& asjc,
                                 CitationWindow citer_window = std::nullopt);

/// Normalized mean of the non-empty profiles; empty when all are empty.
CategoryVector aggregate_references(std::span<const CategoryVector> profiles);

/// theta * max cut, cap at max_categories (heaviest first, ties by class
/// index, which is the code order), proportional renormalization.
/// Throws std::invalid_argument on an empty vector.
CategoryVector apply_threshold(const CategoryVector& vector, const ThresholdPolicy& policy);

struct CiterOptions {
    ThresholdPolicy policy;
    CitationWindow citer_window; // unbounded by default
    unsigned workers = 0;        // 0 = hardware concurrency
};

/// Classifies the whole corpus. Output is identical for any worker count.
AssignmentSet classify_u1f08(const Corpus& corpus, const CitationIndex& index, const AssignmentSet& asjc,
                             const CiterOptions& options = {});

} // namespace citeclass
