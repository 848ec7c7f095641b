#ifndef ARITHDYN_ERRORS_HPP
#define ARITHDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace arithdyn {

// Bad user input: malformed text, degree mismatch, zero resultant, ...
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Parse failure with source position (1-based line/column).
struct parse_error : validation_error {
    int line, column;
    parse_error(const std::string& what, int line_, int col_)
        : validation_error(what + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), column(col_) {}
};

// Input is legal but outside what this build can compute (size caps etc).
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to converge or lost too much precision.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace arithdyn

#endif
