#pragma once

#include "citeclass/category_vector.hpp"
#include "citeclass/corpus.hpp"
#include "citeclass/scheme.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

namespace citeclass {

/// One line per document in doc_id order:
///   {"doc_id":"...","system":"U1-F-0.8","weights":{"1101":0.5,...}}
/// Codes ascending, weights with 12 significant digits.
void write_assignments(const AssignmentSet& set, const Corpus& corpus, const Scheme& scheme, std::ostream& out);
void write_assignments(const AssignmentSet& set, const Corpus& corpus, const Scheme& scheme,
                       const std::filesystem::path& path);

/// Reads a JSONL file back into corpus order. Every corpus document must
/// appear exactly once; throws ParseError / ValidationError otherwise.
AssignmentSet read_assignments(std::istream& in, const Corpus& corpus, const Scheme& scheme,
                               const std::string& source = "<assignments>");
AssignmentSet read_assignments(const std::filesystem::path& path, const Corpus& corpus, const Scheme& scheme);

/// Shortest text of `value` at 12 significant digits.
std::string format_weight(double value);

} // namespace citeclass
