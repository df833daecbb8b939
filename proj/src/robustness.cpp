#include "tlmine/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tlmine {

IndexRange preimage(const std::vector<double>& times, std::size_t i,
                    const Interval& iv) {
  if (!iv.is_ground()) {
    throw std::invalid_argument("preimage: interval not instantiated");
  }
  if (i >= times.size()) {
    throw std::invalid_argument("preimage: index out of range");
  }
  const std::size_t n = times.size();
  const double lo_t = times[i] + iv.lower.value;

  std::size_t lo;
  if (iv.lower_closed) {
    lo = std::lower_bound(times.begin(), times.end(), lo_t) - times.begin();
  } else {
    lo = std::upper_bound(times.begin(), times.end(), lo_t) - times.begin();
  }

  std::size_t hi;
  if (iv.unbounded()) {
    hi = n;
  } else {
    const double hi_t = times[i] + iv.upper.value;
    if (iv.upper_closed) {
      hi = std::upper_bound(times.begin(), times.end(), hi_t) - times.begin();
    } else {
      hi = std::lower_bound(times.begin(), times.end(), hi_t) - times.begin();
    }
  }
  if (hi < lo) hi = lo;
  return {lo, hi};
}

double signed_distance(std::span<const double> x, const Predicate& pred,
                       double rho_bool) {
  auto channel_value = [&x](int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= x.size()) {
      throw std::invalid_argument(
          "signed_distance: channel index " + std::to_string(index) +
          " out of range for dimension " + std::to_string(x.size()));
    }
    return x[static_cast<std::size_t>(index)];
  };
  auto literal = [](const Scalar& s) {
    if (s.is_param()) {
      throw std::invalid_argument("signed_distance: unresolved parameter");
    }
    return s.value;
  };

  switch (pred.kind) {
    case PredKind::Bool: {
      bool truth = channel_value(pred.index) >= 0.5;
      return truth ? rho_bool : -rho_bool;
    }
    case PredKind::Scalar: {
      double v = channel_value(pred.index);
      double c = literal(pred.threshold);
      double d = pred.upper_bound ? c - pred.coeff * v : pred.coeff * v - c;
      return d / pred.coeff;
    }
    case PredKind::Box: {
      double dist2 = 0.0;
      double depth = kInf;
      for (const auto& dim : pred.dims) {
        double v = channel_value(dim.index);
        double lo = literal(dim.lower);
        double hi = literal(dim.upper);
        if (v < lo) {
          dist2 += (lo - v) * (lo - v);
        } else if (v > hi) {
          dist2 += (v - hi) * (v - hi);
        } else {
          depth = std::min(depth, std::min(v - lo, hi - v));
        }
      }
      if (dist2 > 0.0) return -std::sqrt(dist2);
      return depth;
    }
  }
  throw std::logic_error("signed_distance: unreachable");
}

namespace {

using Op = Formula::Op;
using Series = std::vector<double>;

// Largest (smallest) rhs value over each index's window, one monotonic
// sweep for all indices; window bounds only move forward because sample
// times increase.
Series sliding_extremum(const Series& b, const std::vector<double>& times,
                        const Interval& iv, bool maximize) {
  const std::size_t n = times.size();
  Series out(n, maximize ? -kInf : kInf);
  std::deque<std::size_t> dq;
  std::size_t added = 0;
  auto better = [&b, maximize](std::size_t incoming, std::size_t resident) {
    return maximize ? b[resident] <= b[incoming] : b[resident] >= b[incoming];
  };
  for (std::size_t i = 0; i < n; ++i) {
    IndexRange win = preimage(times, i, iv);
    if (added < win.lo) {
      dq.clear();
      added = win.lo;
    }
    while (added < win.hi) {
      while (!dq.empty() && better(added, dq.back())) dq.pop_back();
      dq.push_back(added++);
    }
    while (!dq.empty() && dq.front() < win.lo) dq.pop_front();
    if (!dq.empty()) out[i] = b[dq.front()];
  }
  return out;
}

bool starts_at_zero_closed(const Interval& iv) {
  return iv.lower_closed && iv.lower.value == 0.0 && iv.unbounded();
}

Series eval_until(const Series& a, const Series& b,
                  const std::vector<double>& times, const Interval& iv,
                  bool is_until) {
  const std::size_t n = times.size();
  const double empty = is_until ? -kInf : kInf;

  if (starts_at_zero_closed(iv)) {
    // Suffix recurrence over the whole remaining trace.
    Series out(n);
    out[n - 1] = b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      if (is_until) {
        out[i] = std::max(b[i], std::min(a[i], out[i + 1]));
      } else {
        out[i] = std::min(b[i], std::max(a[i], out[i + 1]));
      }
    }
    return out;
  }

  Series out(n, empty);
  for (std::size_t i = 0; i < n; ++i) {
    IndexRange win = preimage(times, i, iv);
    if (win.empty()) continue;
    double run = is_until ? kInf : -kInf;  // lhs over [i, j), empty at j == i
    double best = empty;
    for (std::size_t j = i; j < win.hi; ++j) {
      if (j >= win.lo) {
        if (is_until) {
          best = std::max(best, std::min(b[j], run));
        } else {
          best = std::min(best, std::max(b[j], run));
        }
      }
      run = is_until ? std::min(run, a[j]) : std::max(run, a[j]);
    }
    out[i] = best;
  }
  return out;
}

Series eval_series(const Formula& f, const TimedStateSequence& tss,
                   const EvalOptions& opts) {
  const std::size_t n = tss.size();
  switch (f.op()) {
    case Op::True:
      return Series(n, kInf);
    case Op::False:
      return Series(n, -kInf);
    case Op::Atom:
    case Op::NegAtom: {
      Series out(n);
      double sign = f.op() == Op::Atom ? 1.0 : -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = sign * signed_distance(tss.sample(i), f.pred(), opts.rho_bool);
      }
      return out;
    }
    case Op::And:
    case Op::Or: {
      Series a = eval_series(f.lhs(), tss, opts);
      Series b = eval_series(f.rhs(), tss, opts);
      bool is_and = f.op() == Op::And;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = is_and ? std::min(a[i], b[i]) : std::max(a[i], b[i]);
      }
      return a;
    }
    case Op::Next: {
      Series a = eval_series(f.lhs(), tss, opts);
      for (std::size_t i = 0; i + 1 < n; ++i) a[i] = a[i + 1];
      a[n - 1] = -kInf;
      return a;
    }
    case Op::Until:
    case Op::Release: {
      bool is_until = f.op() == Op::Until;
      // The constant-lhs forms reduce to a windowed extremum of the rhs.
      if (is_until && f.lhs().op() == Op::True) {
        Series b = eval_series(f.rhs(), tss, opts);
        return sliding_extremum(b, tss.times, f.interval(), true);
      }
      if (!is_until && f.lhs().op() == Op::False) {
        Series b = eval_series(f.rhs(), tss, opts);
        return sliding_extremum(b, tss.times, f.interval(), false);
      }
      Series a = eval_series(f.lhs(), tss, opts);
      Series b = eval_series(f.rhs(), tss, opts);
      return eval_until(a, b, tss.times, f.interval(), is_until);
    }
  }
  throw std::logic_error("eval_series: unreachable");
}

void require_ground(const Formula& f) {
  if (!f.is_ground()) {
    throw std::invalid_argument(
        "robustness: formula still has parameter references; instantiate "
        "it first");
  }
}

}  // namespace

std::vector<double> robustness_series(const Formula& f,
                                      const TimedStateSequence& tss,
                                      const EvalOptions& options) {
  require_ground(f);
  tss.validate();
  Formula resolved = resolve_channels(f, tss.channels);
  return eval_series(resolved, tss, options);
}

double robustness(const Formula& f, const TimedStateSequence& tss,
                  std::size_t i, const EvalOptions& options) {
  if (i >= tss.times.size()) {
    throw std::invalid_argument("robustness: index " + std::to_string(i) +
                                " out of range");
  }
  return robustness_series(f, tss, options)[i];
}

namespace {

double naive(const Formula& f, const TimedStateSequence& tss, std::size_t i,
             const EvalOptions& opts) {
  const std::size_t n = tss.size();
  switch (f.op()) {
    case Op::True:
      return kInf;
    case Op::False:
      return -kInf;
    case Op::Atom:
      return signed_distance(tss.sample(i), f.pred(), opts.rho_bool);
    case Op::NegAtom:
      return -signed_distance(tss.sample(i), f.pred(), opts.rho_bool);
    case Op::And:
      return std::min(naive(f.lhs(), tss, i, opts),
                      naive(f.rhs(), tss, i, opts));
    case Op::Or:
      return std::max(naive(f.lhs(), tss, i, opts),
                      naive(f.rhs(), tss, i, opts));
    case Op::Next:
      return i + 1 < n ? naive(f.lhs(), tss, i + 1, opts) : -kInf;
    case Op::Until: {
      IndexRange win = preimage(tss.times, i, f.interval());
      double sup = -kInf;
      for (std::size_t j = win.lo; j < win.hi; ++j) {
        double inner = kInf;
        for (std::size_t k = i; k < j; ++k) {
          inner = std::min(inner, naive(f.lhs(), tss, k, opts));
        }
        sup = std::max(sup, std::min(naive(f.rhs(), tss, j, opts), inner));
      }
      return sup;
    }
    case Op::Release: {
      IndexRange win = preimage(tss.times, i, f.interval());
      double inf = kInf;
      for (std::size_t j = win.lo; j < win.hi; ++j) {
        double inner = -kInf;
        for (std::size_t k = i; k < j; ++k) {
          inner = std::max(inner, naive(f.lhs(), tss, k, opts));
        }
        inf = std::min(inf, std::max(naive(f.rhs(), tss, j, opts), inner));
      }
      return inf;
    }
  }
  throw std::logic_error("robustness_naive: unreachable");
}

}  // namespace

double robustness_naive(const Formula& f, const TimedStateSequence& tss,
                        std::size_t i, const EvalOptions& options) {
  require_ground(f);
  tss.validate();
  if (i >= tss.size()) {
    throw std::invalid_argument("robustness_naive: index " +
                                std::to_string(i) + " out of range");
  }
  Formula resolved = resolve_channels(f, tss.channels);
  return naive(resolved, tss, i, options);
}

}  // namespace tlmine
