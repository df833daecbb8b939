#include "tlmine/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

namespace tlmine {
namespace {

enum class Tok : unsigned char {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Underscore,
  Star,
  Minus,
  Bang,
  AndOp,
  OrOp,
  Arrow,
  Le,
  Ge,
  Diamond,   // <>
  BoxOp,     // []
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto push = [&out](Tok kind, std::size_t pos, std::string s = {},
                     double num = 0.0) {
    out.push_back({kind, std::move(s), num, pos});
  };
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i;
    if (c == '/' && i + 1 < n && text[i + 1] == '\\') {
      push(Tok::AndOp, pos);
      i += 2;
    } else if (c == '\\' && i + 1 < n && text[i + 1] == '/') {
      push(Tok::OrOp, pos);
      i += 2;
    } else if (c == '-' && i + 1 < n && text[i + 1] == '>') {
      push(Tok::Arrow, pos);
      i += 2;
    } else if (c == '<' && i + 1 < n && text[i + 1] == '=') {
      push(Tok::Le, pos);
      i += 2;
    } else if (c == '>' && i + 1 < n && text[i + 1] == '=') {
      push(Tok::Ge, pos);
      i += 2;
    } else if (c == '<' && i + 1 < n && text[i + 1] == '>') {
      push(Tok::Diamond, pos);
      i += 2;
    } else if (c == '[' && i + 1 < n && text[i + 1] == ']') {
      push(Tok::BoxOp, pos);
      i += 2;
    } else if (c == '(') {
      push(Tok::LParen, pos);
      ++i;
    } else if (c == ')') {
      push(Tok::RParen, pos);
      ++i;
    } else if (c == '[') {
      push(Tok::LBracket, pos);
      ++i;
    } else if (c == ']') {
      push(Tok::RBracket, pos);
      ++i;
    } else if (c == ',') {
      push(Tok::Comma, pos);
      ++i;
    } else if (c == '*') {
      push(Tok::Star, pos);
      ++i;
    } else if (c == '-') {
      push(Tok::Minus, pos);
      ++i;
    } else if (c == '!') {
      push(Tok::Bang, pos);
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = text.c_str() + i;
      char* end = nullptr;
      double v = std::strtod(start, &end);
      if (end == start) throw ParseError("bad number", pos);
      i += static_cast<std::size_t>(end - start);
      push(Tok::Number, pos, text.substr(pos, i - pos), v);
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(text[j])) ++j;
      std::string name = text.substr(i, j - i);
      // An interval can follow an operator directly, as in "U_[0,2]"; the
      // glue underscore belongs to the operator syntax, not the name.
      bool split = name.size() > 1 && name.back() == '_' && j < n &&
                   (text[j] == '[' || text[j] == '(');
      if (split) name.pop_back();
      if (name == "_") {
        push(Tok::Underscore, pos);
      } else {
        push(Tok::Ident, pos, std::move(name));
        if (split) push(Tok::Underscore, j - 1);
      }
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Tok::End, "", 0.0, n});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& params,
         const ParseOptions& options)
      : toks_(std::move(tokens)), params_(params), options_(options) {}

  Formula run() {
    Formula f = parse_implies();
    expect(Tok::End, "unexpected trailing input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = at_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  Token take() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }
  void expect(Tok kind, const std::string& what) {
    if (!accept(kind)) throw ParseError("expected " + what, peek().pos);
  }
  bool at_ident(const char* word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }

  int param_index(const std::string& name) const {
    for (std::size_t k = 0; k < params_.size(); ++k) {
      if (params_[k] == name) return static_cast<int>(k);
    }
    return -1;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::Arrow)) {
      Formula rhs = parse_implies();
      return Formula::disj(negate(lhs), rhs);
    }
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::OrOp)) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (accept(Tok::AndOp)) f = Formula::conj(f, parse_until());
    return f;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (at_ident("U") || at_ident("R")) {
      bool is_until = peek().text == "U";
      take();
      Interval iv = parse_interval_suffix();
      Formula rhs = parse_until();
      return is_until ? Formula::until(iv, lhs, rhs)
                      : Formula::release(iv, lhs, rhs);
    }
    return lhs;
  }

  Formula parse_unary() {
    if (accept(Tok::Bang)) return negate(parse_unary());
    if (at_ident("X")) {
      take();
      return Formula::next(parse_unary());
    }
    if (peek().kind == Tok::Diamond) {
      take();
      Interval iv = parse_interval_suffix();
      return Formula::eventually(iv, parse_unary());
    }
    if (peek().kind == Tok::BoxOp) {
      take();
      Interval iv = parse_interval_suffix();
      return Formula::always(iv, parse_unary());
    }
    if (accept(Tok::LParen)) {
      Formula f = parse_implies();
      expect(Tok::RParen, "')'");
      return f;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      Token coeff = take();
      if (coeff.number <= 0.0 || coeff.number == kInf) {
        throw ParseError("coefficient must be a positive finite number",
                         coeff.pos);
      }
      expect(Tok::Star, "'*' after coefficient");
      Token name = take();
      if (name.kind != Tok::Ident) {
        throw ParseError("expected channel name after '*'", name.pos);
      }
      return finish_scalar(name.text, coeff.number);
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true") {
        take();
        return Formula::top();
      }
      if (t.text == "false") {
        take();
        return Formula::bottom();
      }
      Token name = take();
      if (at_ident("in")) {
        take();
        return parse_box(name.text);
      }
      if (peek().kind == Tok::Le || peek().kind == Tok::Ge) {
        return finish_scalar(name.text, 1.0);
      }
      return Formula::atom(Predicate::boolean(name.text));
    }
    throw ParseError("expected a formula", t.pos);
  }

  Formula finish_scalar(const std::string& channel, double coeff) {
    bool upper = peek().kind == Tok::Le;
    if (!accept(Tok::Le) && !accept(Tok::Ge)) {
      throw ParseError("expected '<=' or '>='", peek().pos);
    }
    Scalar rhs = parse_scalar_expr(/*allow_negative=*/true);
    return Formula::atom(upper ? Predicate::scalar_le(channel, rhs, coeff)
                               : Predicate::scalar_ge(channel, rhs, coeff));
  }

  Formula parse_box(const std::string& first_channel) {
    std::vector<BoxDim> dims;
    dims.push_back(parse_box_dim(first_channel));
    while (at_ident("x")) {
      take();
      dims.push_back(parse_box_dim(""));  // consecutive channel
    }
    return Formula::atom(Predicate::box(std::move(dims)));
  }

  BoxDim parse_box_dim(const std::string& channel) {
    expect(Tok::LBracket, "'[' opening a box dimension");
    BoxDim d;
    d.channel = channel;
    d.lower = parse_scalar_expr(true);
    expect(Tok::Comma, "',' between box bounds");
    d.upper = parse_scalar_expr(true);
    expect(Tok::RBracket, "']' closing a box dimension");
    if (!d.lower.is_param() && !d.upper.is_param() &&
        d.lower.value > d.upper.value) {
      throw ParseError("box bounds reversed", peek().pos);
    }
    return d;
  }

  // A literal (optionally negative) number or a declared parameter name.
  Scalar parse_scalar_expr(bool allow_negative) {
    bool neg = accept(Tok::Minus);
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      Token num = take();
      double v = neg ? -num.number : num.number;
      if (neg && !allow_negative) {
        throw ParseError("negative value not allowed here", num.pos);
      }
      return Scalar::lit(v);
    }
    if (t.kind == Tok::Ident && !neg) {
      int idx = param_index(t.text);
      if (idx < 0) {
        throw ParseError("undeclared parameter '" + t.text + "'", t.pos);
      }
      take();
      return Scalar::ref(idx);
    }
    throw ParseError("expected a number or parameter name", t.pos);
  }

  Interval parse_interval_suffix() {
    if (!accept(Tok::Underscore)) return Interval::zero_to_inf();
    Interval iv;
    std::size_t open_pos = peek().pos;
    if (accept(Tok::LBracket)) {
      iv.lower_closed = true;
    } else if (accept(Tok::LParen)) {
      iv.lower_closed = false;
    } else {
      throw ParseError("expected '[' or '(' after '_'", open_pos);
    }
    iv.lower = parse_bound();
    expect(Tok::Comma, "',' between interval endpoints");
    iv.upper = parse_bound();
    if (accept(Tok::RBracket)) {
      iv.upper_closed = true;
    } else if (accept(Tok::RParen)) {
      iv.upper_closed = false;
    } else {
      throw ParseError("expected ']' or ')'", peek().pos);
    }
    check_interval(iv, open_pos);
    return iv;
  }

  Scalar parse_bound() {
    const Token& t = peek();
    if (t.kind == Tok::Number) return Scalar::lit(take().number);
    if (t.kind == Tok::Ident) {
      if (t.text == "inf") {
        take();
        return Scalar::lit(kInf);
      }
      int idx = param_index(t.text);
      if (idx < 0) {
        throw ParseError("undeclared parameter '" + t.text + "'", t.pos);
      }
      take();
      return Scalar::ref(idx);
    }
    throw ParseError("expected an interval endpoint", t.pos);
  }

  void check_interval(const Interval& iv, std::size_t pos) const {
    if (!iv.is_ground()) return;
    try {
      validate_interval(iv, options_.strict_intervals);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), pos);
    }
  }

  std::vector<Token> toks_;
  const std::vector<std::string>& params_;
  ParseOptions options_;
  std::size_t at_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text,
                      const std::vector<std::string>& param_names,
                      const ParseOptions& options) {
  for (std::size_t a = 0; a < param_names.size(); ++a) {
    for (std::size_t b = a + 1; b < param_names.size(); ++b) {
      if (param_names[a] == param_names[b]) {
        throw ParseError("duplicate parameter name '" + param_names[a] + "'",
                         0);
      }
    }
  }
  return Parser(lex(text), param_names, options).run();
}

}  // namespace tlmine
