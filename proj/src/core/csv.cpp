#include "citeclass/csv.hpp"

#include "citeclass/error.hpp"

#include <charconv>
#include <cmath>

namespace citeclass::csv {

Reader::Reader(std::istream& in, std::string source_name) : in_(in), source_(std::move(source_name)) {}

bool Reader::next(Row& row) {
    row.fields.clear();
    row.columns.clear();

    std::string line;
    // Skip blank lines entirely.
    do {
        if (!std::getline(in_, line)) return false;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    } while (line.empty());

    row.line = line_;
    std::string field;
    std::size_t pos = 0;
    std::size_t field_start = 1;
    bool in_quotes = false;
    bool was_quoted = false;

    auto finish_field = [&] {
        row.fields.push_back(std::move(field));
        row.columns.push_back(field_start);
        field.clear();
        was_quoted = false;
    };

    for (;;) {
        if (pos == line.size()) {
            if (in_quotes) {
                // Quoted field spanning lines.
                std::string more;
                if (!std::getline(in_, more))
                    throw ParseError(source_, row.line, field_start, "unterminated quoted field");
                ++line_;
                if (!more.empty() && more.back() == '\r') more.pop_back();
                field.push_back('\n');
                line = std::move(more);
                pos = 0;
                continue;
            }
            finish_field();
            break;
        }
        const char c = line[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < line.size() && line[pos + 1] == '"') {
                    field.push_back('"');
                    pos += 2;
                    continue;
                }
                in_quotes = false;
                ++pos;
                if (pos < line.size() && line[pos] != ',')
                    throw ParseError(source_, line_, pos + 1, "unexpected character after closing quote");
                continue;
            }
            field.push_back(c);
            ++pos;
            continue;
        }
        if (c == ',') {
            finish_field();
            ++pos;
            field_start = pos + 1;
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
            ++pos;
            continue;
        }
        field.push_back(c);
        ++pos;
    }
    return true;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string fixed(double value, int decimals) {
    if (!std::isfinite(value)) return "NA";
    if (value == 0.0) value = 0.0; // fold -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    std::string out(buf, res.ptr);
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

} // namespace citeclass::csv
