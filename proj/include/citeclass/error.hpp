#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citeclass {

/// Malformed input text. Carries the 1-based line (or record) and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column,
               const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                             ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Input parsed fine but breaks a domain invariant (duplicate id, dangling code, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure: missing file, unwritable directory.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace citeclass
