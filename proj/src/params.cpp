#include "tlmine/params.hpp"

#include <stdexcept>

#include "text_util.hpp"

namespace tlmine {

void ParamSpace::validate() const {
  if (names.empty()) throw std::invalid_argument("param space: empty");
  if (lower.size() != names.size() || upper.size() != names.size()) {
    throw std::invalid_argument(
        "param space: names/lower/upper lengths differ");
  }
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!(lower[k] <= upper[k])) {
      throw std::invalid_argument("param space: lower > upper for '" +
                                  names[k] + "'");
    }
  }
}

bool leq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("leq: dimension mismatch");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
  }
  return true;
}

namespace {

using Op = Formula::Op;

Scalar subst(const Scalar& s, std::span<const double> theta) {
  if (!s.is_param()) return s;
  auto idx = static_cast<std::size_t>(s.param);
  if (idx >= theta.size()) {
    throw std::invalid_argument("instantiate: parameter index " +
                                std::to_string(s.param) + " unbound");
  }
  return Scalar::lit(theta[idx]);
}

Predicate subst_pred(const Predicate& p, const ParamSpace& space,
                     std::span<const double> theta) {
  Predicate out = p;
  out.threshold = subst(p.threshold, theta);
  for (auto& d : out.dims) {
    d.lower = subst(d.lower, theta);
    d.upper = subst(d.upper, theta);
    if (d.lower.value > d.upper.value) {
      throw std::invalid_argument(
          "instantiate: box bounds reversed after substitution in '" +
          to_string(p, space.names) + "'");
    }
  }
  return out;
}

Interval subst_interval(const Interval& iv, const ParamSpace& space,
                        std::span<const double> theta) {
  Interval out = iv;
  out.lower = subst(iv.lower, theta);
  out.upper = subst(iv.upper, theta);
  try {
    validate_interval(out, false);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(
        "instantiate: degenerate interval from " +
        to_string(iv, space.names) + ": " + e.what());
  }
  return out;
}

}  // namespace

Formula instantiate(const Formula& f, const ParamSpace& space,
                    std::span<const double> theta) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
      return Formula::atom(subst_pred(f.pred(), space, theta));
    case Op::NegAtom:
      return Formula::neg_atom(subst_pred(f.pred(), space, theta));
    case Op::And:
      return Formula::conj(instantiate(f.lhs(), space, theta),
                           instantiate(f.rhs(), space, theta));
    case Op::Or:
      return Formula::disj(instantiate(f.lhs(), space, theta),
                           instantiate(f.rhs(), space, theta));
    case Op::Next:
      return Formula::next(instantiate(f.lhs(), space, theta));
    case Op::Until:
      return Formula::until(subst_interval(f.interval(), space, theta),
                            instantiate(f.lhs(), space, theta),
                            instantiate(f.rhs(), space, theta));
    case Op::Release:
      return Formula::release(subst_interval(f.interval(), space, theta),
                              instantiate(f.lhs(), space, theta),
                              instantiate(f.rhs(), space, theta));
  }
  throw std::logic_error("instantiate: unreachable");
}

namespace {

struct OccurrenceFlags {
  std::vector<bool> up;    // some occurrence is non-decreasing
  std::vector<bool> down;  // some occurrence is non-increasing

  void mark(const Scalar& s, int dir) {
    if (!s.is_param()) return;
    auto idx = static_cast<std::size_t>(s.param);
    if (up.size() <= idx) {
      up.resize(idx + 1, false);
      down.resize(idx + 1, false);
    }
    (dir > 0 ? up : down)[idx] = true;
  }
};

void scan(const Formula& f, OccurrenceFlags& flags) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return;
    case Op::Atom:
    case Op::NegAtom: {
      int polarity = f.op() == Op::Atom ? 1 : -1;
      const Predicate& p = f.pred();
      if (p.kind == PredKind::Scalar) {
        flags.mark(p.threshold, (p.upper_bound ? 1 : -1) * polarity);
      }
      for (const auto& d : p.dims) {
        flags.mark(d.upper, polarity);
        flags.mark(d.lower, -polarity);
      }
      return;
    }
    case Op::Next:
      scan(f.lhs(), flags);
      return;
    case Op::And:
    case Op::Or:
      scan(f.lhs(), flags);
      scan(f.rhs(), flags);
      return;
    case Op::Until:
    case Op::Release: {
      int sign = f.op() == Op::Until ? 1 : -1;
      flags.mark(f.interval().upper, sign);
      flags.mark(f.interval().lower, -sign);
      scan(f.lhs(), flags);
      scan(f.rhs(), flags);
      return;
    }
  }
}

}  // namespace

Monotonicity monotonicity(const Formula& f, const ParamSpace& space) {
  OccurrenceFlags flags;
  scan(f, flags);
  flags.up.resize(space.dim(), false);
  flags.down.resize(space.dim(), false);

  Monotonicity m;
  m.per_param.assign(space.dim(), 0);
  bool any = false;
  bool all_up = true;
  bool all_down = true;
  for (std::size_t k = 0; k < space.dim(); ++k) {
    bool u = flags.up[k];
    bool d = flags.down[k];
    if (u && !d) m.per_param[k] = 1;
    if (d && !u) m.per_param[k] = -1;
    if (u || d) {
      any = true;
      all_up = all_up && m.per_param[k] == 1;
      all_down = all_down && m.per_param[k] == -1;
    }
  }
  if (any && all_up) {
    m.overall = 1;
  } else if (any && all_down) {
    m.overall = -1;
  }
  return m;
}

std::vector<double> normalize(const ParamSpace& space,
                              std::span<const double> theta) {
  if (theta.size() != space.dim()) {
    throw std::invalid_argument("normalize: dimension mismatch");
  }
  std::vector<double> out(space.dim());
  for (std::size_t k = 0; k < space.dim(); ++k) {
    double range = space.upper[k] - space.lower[k];
    out[k] = range > 0.0 ? (theta[k] - space.lower[k]) / range : 0.0;
  }
  return out;
}

std::vector<double> denormalize(const ParamSpace& space,
                                std::span<const double> unit) {
  if (unit.size() != space.dim()) {
    throw std::invalid_argument("denormalize: dimension mismatch");
  }
  std::vector<double> out(space.dim());
  for (std::size_t k = 0; k < space.dim(); ++k) {
    double range = space.upper[k] - space.lower[k];
    out[k] = space.lower[k] + unit[k] * range;
  }
  return out;
}

}  // namespace tlmine
