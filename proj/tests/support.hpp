#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tlmine/formula.hpp"
#include "tlmine/params.hpp"
#include "tlmine/trace.hpp"

namespace tlmine::testing {

// Columns are per-channel value series; times default to 0,1,2,...
inline TimedStateSequence make_trace(
    const std::vector<std::vector<double>>& columns,
    std::vector<std::string> channels, std::vector<double> times = {}) {
  TimedStateSequence tss;
  tss.channels = std::move(channels);
  std::size_t n = columns.empty() ? 0 : columns.front().size();
  if (times.empty()) {
    for (std::size_t i = 0; i < n; ++i) times.push_back(double(i));
  }
  tss.times = std::move(times);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& col : columns) tss.values.push_back(col[i]);
  }
  tss.validate();
  return tss;
}

inline TimedStateSequence random_trace(std::mt19937_64& rng,
                                       std::size_t max_len = 30,
                                       std::size_t max_channels = 3) {
  std::uniform_int_distribution<std::size_t> len_d(1, max_len);
  std::uniform_int_distribution<std::size_t> ch_d(1, max_channels);
  std::uniform_real_distribution<double> step_d(0.1, 1.5);
  std::uniform_real_distribution<double> val_d(-5.0, 5.0);
  TimedStateSequence tss;
  std::size_t n = len_d(rng), ch = ch_d(rng);
  for (std::size_t c = 0; c < ch; ++c) {
    tss.channels.push_back("ch" + std::to_string(c));
  }
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += step_d(rng);
    tss.times.push_back(t);
    for (std::size_t c = 0; c < ch; ++c) tss.values.push_back(val_d(rng));
  }
  return tss;
}

inline Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lo_d(0.0, 3.0);
  std::uniform_real_distribution<double> width_d(0.2, 4.0);
  std::bernoulli_distribution flag(0.5);
  Interval iv;
  if (flag(rng)) return Interval::zero_to_inf();
  double lo = lo_d(rng);
  iv.lower = Scalar::lit(lo);
  iv.upper = Scalar::lit(lo + width_d(rng));
  iv.lower_closed = flag(rng);
  iv.upper_closed = flag(rng);
  return iv;
}

inline Formula random_atom(std::mt19937_64& rng, std::size_t channels) {
  std::uniform_int_distribution<std::size_t> ch_d(0, channels - 1);
  std::uniform_real_distribution<double> thr_d(-5.0, 5.0);
  std::uniform_int_distribution<int> kind(0, 3);
  std::string ch = "ch" + std::to_string(ch_d(rng));
  Predicate p = kind(rng) % 2 == 0
                    ? Predicate::scalar_le(ch, Scalar::lit(thr_d(rng)))
                    : Predicate::scalar_ge(ch, Scalar::lit(thr_d(rng)));
  return kind(rng) < 2 ? Formula::atom(p) : Formula::neg_atom(p);
}

// Random ground formula in negation normal form. The left operand of
// until/release is kept shallow so the reference evaluator stays
// tractable on 30-sample traces. Next can be excluded for properties
// that need exact negation duality (next is falsity-biased at the end
// of a trace, so rob(!f) == -rob(f) does not hold through it).
inline Formula random_formula(std::mt19937_64& rng, int depth,
                              std::size_t channels, bool with_next = true) {
  std::uniform_int_distribution<int> op_d(0, with_next ? 6 : 5);
  if (depth <= 0) return random_atom(rng, channels);
  switch (op_d(rng)) {
    case 0:
      return Formula::conj(random_formula(rng, depth - 1, channels, with_next),
                           random_formula(rng, depth - 1, channels,
                                          with_next));
    case 1:
      return Formula::disj(random_formula(rng, depth - 1, channels, with_next),
                           random_formula(rng, depth - 1, channels,
                                          with_next));
    case 2:
      return Formula::until(random_interval(rng),
                            random_formula(rng, std::min(depth - 1, 1),
                                           channels, with_next),
                            random_formula(rng, depth - 1, channels,
                                           with_next));
    case 3:
      return Formula::release(random_interval(rng),
                              random_formula(rng, std::min(depth - 1, 1),
                                             channels, with_next),
                              random_formula(rng, depth - 1, channels,
                                             with_next));
    case 4:
      return Formula::eventually(random_interval(rng),
                                 random_formula(rng, depth - 1, channels,
                                                with_next));
    case 5:
      return Formula::always(random_interval(rng),
                             random_formula(rng, depth - 1, channels,
                                            with_next));
    default:
      return Formula::next(random_formula(rng, depth - 1, channels,
                                          with_next));
  }
}

// Random parameterized formula plus a domain, rejection-sampled until the
// analyzer classifies the whole formula +1 or -1. Parameters land in
// scalar thresholds and in upper endpoints of eventually/always windows.
struct RandomPmtl {
  Formula formula;
  ParamSpace space;
  int overall = 0;
};

inline Formula inject_params(const Formula& f, std::mt19937_64& rng,
                             std::size_t dim, int& injected) {
  std::bernoulli_distribution take(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  switch (f.op()) {
    case Formula::Op::Atom:
    case Formula::Op::NegAtom: {
      Predicate p = f.pred();
      if (p.kind == PredKind::Scalar && take(rng)) {
        p.threshold = Scalar::ref(int(pick(rng)));
        ++injected;
      }
      return f.op() == Formula::Op::Atom ? Formula::atom(p)
                                         : Formula::neg_atom(p);
    }
    case Formula::Op::And:
      return Formula::conj(inject_params(f.lhs(), rng, dim, injected),
                           inject_params(f.rhs(), rng, dim, injected));
    case Formula::Op::Or:
      return Formula::disj(inject_params(f.lhs(), rng, dim, injected),
                           inject_params(f.rhs(), rng, dim, injected));
    case Formula::Op::Next:
      return Formula::next(inject_params(f.lhs(), rng, dim, injected));
    case Formula::Op::Until:
    case Formula::Op::Release: {
      Interval iv = f.interval();
      if (f.lhs().is_constant() && !iv.unbounded() && take(rng)) {
        // Anchor the window at 0 so any sampled positive theta keeps the
        // instantiated interval nonempty.
        iv.lower = Scalar::lit(0.0);
        iv.lower_closed = true;
        iv.upper = Scalar::ref(int(pick(rng)));
        iv.upper_closed = true;
        ++injected;
      }
      Formula lhs = inject_params(f.lhs(), rng, dim, injected);
      Formula rhs = inject_params(f.rhs(), rng, dim, injected);
      return f.op() == Formula::Op::Until ? Formula::until(iv, lhs, rhs)
                                          : Formula::release(iv, lhs, rhs);
    }
    default:
      return f;
  }
}

inline RandomPmtl random_monotone_pmtl(std::mt19937_64& rng,
                                       std::size_t channels) {
  std::uniform_int_distribution<std::size_t> dim_d(1, 3);
  for (;;) {
    RandomPmtl out;
    std::size_t dim = dim_d(rng);
    for (std::size_t k = 0; k < dim; ++k) {
      out.space.names.push_back("p" + std::to_string(k));
      out.space.lower.push_back(0.5);
      out.space.upper.push_back(4.0);
    }
    int injected = 0;
    out.formula = inject_params(random_formula(rng, 3, channels), rng, dim,
                                injected);
    if (injected == 0) continue;
    out.overall = monotonicity(out.formula, out.space).overall;
    if (out.overall != 0) return out;
  }
}

}  // namespace tlmine::testing
