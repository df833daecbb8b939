#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlmine/formula.hpp"

namespace tlmine {

// Reported with the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at offset " +
                           std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct ParseOptions {
  // Reject literal singleton intervals like [2,2].
  bool strict_intervals = true;
};

// Formula text syntax:
//
//   atoms       name <= e | name >= e | k*name <= e | name in [a,b]x[c,d]...
//               | name | true | false
//   connectives ! f | f /\ f | f \/ f | f -> f
//   temporal    X f | f U_I f | f R_I f | <>_I f | []_I f
//   intervals   [a,b] | (a,b] | [a,b) | (a,b)   with a,b >= 0 or inf;
//               an omitted _I means [0,inf)
//
// Thresholds, box bounds, and interval endpoints may name a declared
// parameter. Box dimensions bind consecutive channels starting at the named
// one. Negation is pushed to the atoms, implication is rewritten as
// !a \/ b, and the result is in negation normal form. Undeclared
// identifiers in scalar positions, malformed intervals, and syntax errors
// raise ParseError. Names listed in param_names must be unique.
Formula parse_formula(const std::string& text,
                      const std::vector<std::string>& param_names = {},
                      const ParseOptions& options = {});

}  // namespace tlmine
