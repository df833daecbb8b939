#include "tlmine/formula.hpp"

#include <stdexcept>

#include "text_util.hpp"

namespace tlmine {

void validate_interval(const Interval& iv, bool strict_singleton) {
  if (!iv.is_ground()) return;
  double lo = iv.lower.value;
  double hi = iv.upper.value;
  if (!(lo >= 0.0) || lo == kInf) {
    throw std::invalid_argument("interval: lower endpoint must be a finite "
                                "nonnegative value, got " +
                                format_double(lo));
  }
  if (!(hi >= 0.0)) {
    throw std::invalid_argument("interval: upper endpoint must be "
                                "nonnegative, got " +
                                format_double(hi));
  }
  if (lo > hi) {
    throw std::invalid_argument("interval: reversed bounds [" +
                                format_double(lo) + ", " + format_double(hi) +
                                "]");
  }
  if (lo == hi) {
    if (!iv.lower_closed || !iv.upper_closed) {
      throw std::invalid_argument("interval: empty (equal endpoints with an "
                                  "open side)");
    }
    if (strict_singleton) {
      throw std::invalid_argument("interval: singleton [" + format_double(lo) +
                                  ", " + format_double(hi) +
                                  "] not allowed here");
    }
  }
}

Predicate Predicate::scalar_le(std::string channel, Scalar threshold,
                               double coeff) {
  Predicate p;
  p.kind = PredKind::Scalar;
  p.channel = std::move(channel);
  p.coeff = coeff;
  p.upper_bound = true;
  p.threshold = threshold;
  return p;
}

Predicate Predicate::scalar_ge(std::string channel, Scalar threshold,
                               double coeff) {
  Predicate p = scalar_le(std::move(channel), threshold, coeff);
  p.upper_bound = false;
  return p;
}

Predicate Predicate::box(std::vector<BoxDim> dims) {
  Predicate p;
  p.kind = PredKind::Box;
  p.dims = std::move(dims);
  return p;
}

Predicate Predicate::boolean(std::string channel) {
  Predicate p;
  p.kind = PredKind::Bool;
  p.channel = std::move(channel);
  return p;
}

namespace {

using Node = Formula::Node;
using Op = Formula::Op;

std::shared_ptr<const Node> make_node(Node n) {
  return std::make_shared<const Node>(std::move(n));
}

}  // namespace

const std::shared_ptr<const Node>& Formula::true_node() {
  static const auto node = make_node({Op::True, {}, {}, nullptr, nullptr});
  return node;
}

const std::shared_ptr<const Node>& Formula::false_node() {
  static const auto node = make_node({Op::False, {}, {}, nullptr, nullptr});
  return node;
}

Formula Formula::top() { return Formula(true_node()); }
Formula Formula::bottom() { return Formula(false_node()); }

Formula Formula::atom(Predicate p) {
  return Formula(make_node({Op::Atom, std::move(p), {}, nullptr, nullptr}));
}

Formula Formula::neg_atom(Predicate p) {
  return Formula(make_node({Op::NegAtom, std::move(p), {}, nullptr, nullptr}));
}

Formula Formula::conj(Formula a, Formula b) {
  return Formula(make_node({Op::And, {}, {}, a.node_, b.node_}));
}

Formula Formula::disj(Formula a, Formula b) {
  return Formula(make_node({Op::Or, {}, {}, a.node_, b.node_}));
}

Formula Formula::next(Formula f) {
  return Formula(make_node({Op::Next, {}, {}, f.node_, nullptr}));
}

Formula Formula::until(Interval iv, Formula lhs, Formula rhs) {
  validate_interval(iv, false);
  return Formula(make_node({Op::Until, {}, iv, lhs.node_, rhs.node_}));
}

Formula Formula::release(Interval iv, Formula lhs, Formula rhs) {
  validate_interval(iv, false);
  return Formula(make_node({Op::Release, {}, iv, lhs.node_, rhs.node_}));
}

Formula Formula::eventually(Interval iv, Formula f) {
  return until(iv, top(), std::move(f));
}

Formula Formula::always(Interval iv, Formula f) {
  return release(iv, bottom(), std::move(f));
}

namespace {

void collect_params(const Scalar& s, std::vector<bool>& used) {
  if (!s.is_param()) return;
  if (used.size() <= static_cast<std::size_t>(s.param)) {
    used.resize(s.param + 1, false);
  }
  used[s.param] = true;
}

void collect_params(const Node* n, std::vector<bool>& used) {
  if (n == nullptr) return;
  if (n->op == Op::Atom || n->op == Op::NegAtom) {
    const Predicate& p = n->pred;
    collect_params(p.threshold, used);
    for (const auto& d : p.dims) {
      collect_params(d.lower, used);
      collect_params(d.upper, used);
    }
    return;
  }
  if (n->op == Op::Until || n->op == Op::Release) {
    collect_params(n->interval.lower, used);
    collect_params(n->interval.upper, used);
  }
  collect_params(n->lhs.get(), used);
  collect_params(n->rhs.get(), used);
}

}  // namespace

bool Formula::is_ground() const {
  std::vector<bool> used;
  collect_params(node_.get(), used);
  for (bool b : used) {
    if (b) return false;
  }
  return true;
}

std::vector<bool> Formula::params_used() const {
  std::vector<bool> used;
  collect_params(node_.get(), used);
  return used;
}

Formula negate(const Formula& f) {
  switch (f.op()) {
    case Op::True:
      return Formula::bottom();
    case Op::False:
      return Formula::top();
    case Op::Atom:
      return Formula::neg_atom(f.pred());
    case Op::NegAtom:
      return Formula::atom(f.pred());
    case Op::And:
      return Formula::disj(negate(f.lhs()), negate(f.rhs()));
    case Op::Or:
      return Formula::conj(negate(f.lhs()), negate(f.rhs()));
    case Op::Next:
      return Formula::next(negate(f.lhs()));
    case Op::Until:
      return Formula::release(f.interval(), negate(f.lhs()), negate(f.rhs()));
    case Op::Release:
      return Formula::until(f.interval(), negate(f.lhs()), negate(f.rhs()));
  }
  throw std::logic_error("negate: unreachable");
}

namespace {

Predicate resolve_pred(const Predicate& p,
                       const std::vector<std::string>& channels) {
  auto find = [&channels](const std::string& name) {
    for (std::size_t k = 0; k < channels.size(); ++k) {
      if (channels[k] == name) return static_cast<int>(k);
    }
    throw std::invalid_argument("unknown channel '" + name + "'");
  };
  Predicate out = p;
  if (p.kind == PredKind::Box) {
    // A dim without its own channel name takes the next channel after the
    // previous dim, so a box over k dims may name only the first.
    int prev = -1;
    for (auto& d : out.dims) {
      d.index = d.channel.empty() ? prev + 1 : find(d.channel);
      if (d.index < 0 || static_cast<std::size_t>(d.index) >= channels.size())
        throw std::invalid_argument(
            "box predicate runs past the last channel");
      prev = d.index;
    }
  } else {
    out.index = find(p.channel);
  }
  return out;
}

}  // namespace

Formula resolve_channels(const Formula& f,
                         const std::vector<std::string>& channels) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
      return Formula::atom(resolve_pred(f.pred(), channels));
    case Op::NegAtom:
      return Formula::neg_atom(resolve_pred(f.pred(), channels));
    case Op::And:
      return Formula::conj(resolve_channels(f.lhs(), channels),
                           resolve_channels(f.rhs(), channels));
    case Op::Or:
      return Formula::disj(resolve_channels(f.lhs(), channels),
                           resolve_channels(f.rhs(), channels));
    case Op::Next:
      return Formula::next(resolve_channels(f.lhs(), channels));
    case Op::Until:
      return Formula::until(f.interval(), resolve_channels(f.lhs(), channels),
                            resolve_channels(f.rhs(), channels));
    case Op::Release:
      return Formula::release(f.interval(),
                              resolve_channels(f.lhs(), channels),
                              resolve_channels(f.rhs(), channels));
  }
  throw std::logic_error("resolve_channels: unreachable");
}

namespace {

std::string scalar_text(const Scalar& s,
                        const std::vector<std::string>& params) {
  if (!s.is_param()) return format_double(s.value);
  auto idx = static_cast<std::size_t>(s.param);
  if (idx < params.size()) return params[idx];
  return "$" + std::to_string(s.param);
}

}  // namespace

std::string to_string(const Interval& iv,
                      const std::vector<std::string>& params) {
  std::string out;
  out += iv.lower_closed ? '[' : '(';
  out += scalar_text(iv.lower, params);
  out += ',';
  out += scalar_text(iv.upper, params);
  out += iv.upper_closed ? ']' : ')';
  return out;
}

std::string to_string(const Predicate& p,
                      const std::vector<std::string>& params) {
  switch (p.kind) {
    case PredKind::Bool:
      return p.channel;
    case PredKind::Scalar: {
      std::string head = p.channel;
      if (p.coeff != 1.0) head = format_double(p.coeff) + "*" + p.channel;
      return head + (p.upper_bound ? " <= " : " >= ") +
             scalar_text(p.threshold, params);
    }
    case PredKind::Box: {
      std::string out = p.dims.empty() ? "?" : p.dims.front().channel;
      out += " in ";
      for (std::size_t k = 0; k < p.dims.size(); ++k) {
        if (k > 0) out += " x ";
        out += "[" + scalar_text(p.dims[k].lower, params) + "," +
               scalar_text(p.dims[k].upper, params) + "]";
      }
      return out;
    }
  }
  throw std::logic_error("to_string(Predicate): unreachable");
}

namespace {

bool default_interval(const Interval& iv) {
  return iv.lower_closed && !iv.lower.is_param() && iv.lower.value == 0.0 &&
         iv.unbounded();
}

std::string interval_suffix(const Interval& iv,
                            const std::vector<std::string>& params) {
  if (default_interval(iv)) return "";
  return "_" + to_string(iv, params);
}

std::string render(const Formula& f, const std::vector<std::string>& params) {
  switch (f.op()) {
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Atom:
      return "(" + to_string(f.pred(), params) + ")";
    case Op::NegAtom:
      return "!(" + to_string(f.pred(), params) + ")";
    case Op::And:
      return "(" + render(f.lhs(), params) + " /\\ " +
             render(f.rhs(), params) + ")";
    case Op::Or:
      return "(" + render(f.lhs(), params) + " \\/ " +
             render(f.rhs(), params) + ")";
    case Op::Next:
      return "X " + render(f.lhs(), params);
    case Op::Until:
      if (f.lhs().op() == Op::True) {
        return "<>" + interval_suffix(f.interval(), params) + " " +
               render(f.rhs(), params);
      }
      return "(" + render(f.lhs(), params) + " U" +
             interval_suffix(f.interval(), params) + " " +
             render(f.rhs(), params) + ")";
    case Op::Release:
      if (f.lhs().op() == Op::False) {
        return "[]" + interval_suffix(f.interval(), params) + " " +
               render(f.rhs(), params);
      }
      return "(" + render(f.lhs(), params) + " R" +
             interval_suffix(f.interval(), params) + " " +
             render(f.rhs(), params) + ")";
  }
  throw std::logic_error("to_string(Formula): unreachable");
}

}  // namespace

std::string to_string(const Formula& f,
                      const std::vector<std::string>& params) {
  return render(f, params);
}

}  // namespace tlmine
