#pragma once

// Minimal RFC 4180 reader/writer helpers. Category and area names carry commas
// ("Biochemistry, Genetics and Molecular Biology"), so quoting matters.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace citeclass::csv {

struct Row {
    std::vector<std::string> fields;
    std::vector<std::size_t> columns; // 1-based start column of each field
    std::size_t line = 0;             // 1-based line where the row starts
};

class Reader {
public:
    Reader(std::istream& in, std::string source_name);

    /// Reads the next row; returns false at end of input. Throws ParseError on
    /// an unterminated quote or stray characters after a closing quote.
    bool next(Row& row);

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
};

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

/// Fixed-point formatting with `decimals` digits; "NA" for non-finite values.
std::string fixed(double value, int decimals = 6);

} // namespace citeclass::csv
