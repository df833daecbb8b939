#pragma once

#include <span>
#include <string>
#include <vector>

#include "tlmine/formula.hpp"

namespace tlmine {

// Axis-aligned parameter domain. names, lower, and upper share one length;
// lower[i] <= upper[i] is required, equality marks a degenerate coordinate.
struct ParamSpace {
  std::vector<std::string> names;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return names.size(); }
  void validate() const;
};

// Componentwise order: a <= b in every coordinate.
bool leq(std::span<const double> a, std::span<const double> b);

// Direction of robustness as a function of each parameter:
//   +1 nondecreasing, -1 nonincreasing, 0 unknown or mixed.
struct Monotonicity {
  std::vector<int> per_param;
  int overall = 0;
};

// Ground copy of f with every parameter reference replaced by its value.
// Instantiated intervals are validated (nonnegative, nonempty); violations
// throw std::invalid_argument naming the parameter.
Formula instantiate(const Formula& f, const ParamSpace& space,
                    std::span<const double> theta);

// Syntactic direction analysis. Each parameter occurrence contributes a
// direction:
//   until upper endpoint, release lower endpoint,
//     or "<= theta" threshold / box upper bound   -> +1
//   until lower endpoint, release upper endpoint,
//     or ">= theta" threshold / box lower bound   -> -1
// and a negated atom flips the contribution. A parameter is classified +1
// or -1 only when all of its occurrences agree; overall is +1 (resp. -1)
// only when every referenced parameter is +1 (resp. -1).
Monotonicity monotonicity(const Formula& f, const ParamSpace& space);

// Affine map of theta onto [0,1]^dim; degenerate coordinates map to 0.
std::vector<double> normalize(const ParamSpace& space,
                              std::span<const double> theta);
std::vector<double> denormalize(const ParamSpace& space,
                                std::span<const double> unit);

}  // namespace tlmine
