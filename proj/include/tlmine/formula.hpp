#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace tlmine {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A scalar that is either a literal value or a reference to a declared
// parameter (index into the owning declaration list).
struct Scalar {
  double value = 0.0;
  int param = -1;

  bool is_param() const { return param >= 0; }

  static Scalar lit(double v) { return {v, -1}; }
  static Scalar ref(int index) { return {0.0, index}; }
};

// Time interval attached to a temporal operator. Bounds are nonnegative;
// upper may be +inf (then the openness flag is irrelevant).
struct Interval {
  Scalar lower = Scalar::lit(0.0);
  Scalar upper = Scalar::lit(kInf);
  bool lower_closed = true;
  bool upper_closed = false;

  bool is_ground() const { return !lower.is_param() && !upper.is_param(); }
  bool unbounded() const {
    return !upper.is_param() && upper.value == kInf;
  }

  static Interval zero_to_inf() { return {}; }
  static Interval closed(double lo, double hi) {
    return {Scalar::lit(lo), Scalar::lit(hi), true, true};
  }
};

// Throws std::invalid_argument if a ground interval is empty, has negative
// or reversed bounds, or (when strict) is a singleton.
void validate_interval(const Interval& iv, bool strict_singleton);

enum class PredKind : unsigned char { Scalar, Box, Bool };

// One dimension of a box predicate: channel confined to [lower, upper].
struct BoxDim {
  std::string channel;
  int index = -1;  // resolved against a trace's channel list
  Scalar lower;
  Scalar upper;
};

// Atomic observation predicate over one state sample.
//   Scalar: coeff * channel <= threshold   (or >= when upper_bound false)
//   Box:    conjunction of per-dimension interval memberships
//   Bool:   0/1 channel, true when the sample value rounds to 1
struct Predicate {
  PredKind kind = PredKind::Bool;
  std::string channel;
  int index = -1;
  double coeff = 1.0;
  bool upper_bound = true;
  Scalar threshold;
  std::vector<BoxDim> dims;

  static Predicate scalar_le(std::string channel, Scalar threshold,
                             double coeff = 1.0);
  static Predicate scalar_ge(std::string channel, Scalar threshold,
                             double coeff = 1.0);
  static Predicate box(std::vector<BoxDim> dims);
  static Predicate boolean(std::string channel);
};

// Formula in negation normal form: negation appears only on atoms. The
// sugar forms <>_I f and []_I f are stored as (true U_I f) and
// (false R_I f).
class Formula {
 public:
  enum class Op : unsigned char {
    True,
    False,
    Atom,
    NegAtom,
    And,
    Or,
    Next,
    Until,
    Release,
  };

  struct Node {
    Op op = Op::True;
    Predicate pred;
    Interval interval;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Formula() : node_(true_node()) {}

  static Formula top();
  static Formula bottom();
  static Formula atom(Predicate p);
  static Formula neg_atom(Predicate p);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula until(Interval iv, Formula lhs, Formula rhs);
  static Formula release(Interval iv, Formula lhs, Formula rhs);
  static Formula eventually(Interval iv, Formula f);
  static Formula always(Interval iv, Formula f);

  Op op() const { return node_->op; }
  const Predicate& pred() const { return node_->pred; }
  const Interval& interval() const { return node_->interval; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  const Node* node() const { return node_.get(); }

  bool is_constant() const {
    return node_->op == Op::True || node_->op == Op::False;
  }

  // True when no parameter references remain in thresholds, box bounds, or
  // interval endpoints.
  bool is_ground() const;

  // Flags indexed by parameter; length is the highest referenced index + 1.
  std::vector<bool> params_used() const;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static const std::shared_ptr<const Node>& true_node();
  static const std::shared_ptr<const Node>& false_node();

  std::shared_ptr<const Node> node_;
};

// Dual of f, still in negation normal form. Exact for every operator:
// and/or, until/release, and the atom polarities swap.
Formula negate(const Formula& f);

// Copy of f with every predicate's channel indices resolved against the
// given channel list. Throws std::invalid_argument on unknown channels.
Formula resolve_channels(const Formula& f,
                         const std::vector<std::string>& channels);

// Grammar-compatible rendering; param_names supplies spellings for
// parameter references.
std::string to_string(const Formula& f,
                      const std::vector<std::string>& param_names = {});
std::string to_string(const Interval& iv,
                      const std::vector<std::string>& param_names = {});
std::string to_string(const Predicate& p,
                      const std::vector<std::string>& param_names = {});

}  // namespace tlmine
