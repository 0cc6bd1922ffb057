#pragma once

#include <stdexcept>
#include <string>

namespace meroform {

// Mathematical failure of an otherwise well-posed request: non-closed input,
// degenerate restriction plane, non-convergent quadrature, and friends.
// CLI maps these to exit code 1; malformed input maps to exit code 2.
struct math_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    int line;
    int column;

    parse_error(int line_, int column_, const std::string& what_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + what_),
          line(line_), column(column_)
    {
    }
};

} // namespace meroform
