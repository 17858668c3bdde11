#pragma once

#include "citeclass/category_vector.hpp"
#include "citeclass/corpus.hpp"
#include "citeclass/scheme.hpp"

namespace citeclass {

/// Uniform 1/k weights over a journal's k codes. The multidisciplinary area
/// code lands on scheme.multi_index(). Throws ValidationError on an empty list.
CategoryVector journal_base_weights(const Journal& journal, const Scheme& scheme);

/// Moves multidisciplinary weight evenly onto every regular category, then
/// each misc category's weight evenly onto the regular categories of its own
/// area, and normalizes. A vector that is already pure and normalized is
/// returned unchanged, so the operation is exactly idempotent.
CategoryVector redistribute(const CategoryVector& vector, const Scheme& scheme);

/// Fractional journal-based classification of one document.
CategoryVector classify_asjc_fractional(DocIndex doc, const Corpus& corpus, const Scheme& scheme);

/// Per-journal vectors, indexed by JournalIndex.
std::vector<CategoryVector> journal_vectors(const Corpus& corpus, const Scheme& scheme);

/// ASJC-FRAC assignment for every document (documents of one journal share a vector).
AssignmentSet classify_asjc_all(const Corpus& corpus, const Scheme& scheme);

} // namespace citeclass
