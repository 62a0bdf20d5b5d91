#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parrondo {

/// Input data violates a documented invariant (non-positive price, unknown
/// ticker, out-of-range parameter, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed tabular input. Carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace parrondo
