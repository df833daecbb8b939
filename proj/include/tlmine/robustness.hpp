#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tlmine/formula.hpp"
#include "tlmine/trace.hpp"

namespace tlmine {

struct EvalOptions {
  // Magnitude assigned to boolean propositions under the discrete metric.
  double rho_bool = 1.0;
};

// Half-open index range [lo, hi).
struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  bool empty() const { return lo >= hi; }
};

// Indices j whose time lies in tau(i) + I. The range is contiguous because
// sample times increase strictly; endpoint openness is honored exactly.
// Requires a ground interval.
IndexRange preimage(const std::vector<double>& times, std::size_t i,
                    const Interval& iv);

// Signed distance of the sample x to the predicate's satisfaction set:
// positive depth inside, negative distance outside. Scalar predicates use
// the one-dimensional distance scaled by the coefficient, boxes the
// Euclidean distance over their dimensions, boolean propositions
// +/- rho_bool. Requires resolved channel indices.
double signed_distance(std::span<const double> x, const Predicate& pred,
                       double rho_bool = 1.0);

// Quantitative satisfaction of a ground formula at sample index i
// (default: the start of the trace). Unrolls to +inf / -inf for the
// constants; conjunction and disjunction take min and max; until and
// release quantify over the interval preimage with the empty-range
// conventions sup {} = -inf and inf {} = +inf; X looks one sample ahead
// and is -inf at the last sample. Throws std::invalid_argument on
// parameterized formulas, unknown channels, or an out-of-range index.
double robustness(const Formula& f, const TimedStateSequence& tss,
                  std::size_t i = 0, const EvalOptions& options = {});

// Robustness at every sample index in one evaluation.
std::vector<double> robustness_series(const Formula& f,
                                      const TimedStateSequence& tss,
                                      const EvalOptions& options = {});

// Reference evaluator: a direct top-down recursion of the same semantics
// with no sharing or windowing. Exponential in nesting depth; intended for
// short traces as a differential oracle against robustness().
double robustness_naive(const Formula& f, const TimedStateSequence& tss,
                        std::size_t i = 0, const EvalOptions& options = {});

}  // namespace tlmine
