#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "tlmine/formula.hpp"
#include "tlmine/parser.hpp"

using namespace tlmine;
using Op = Formula::Op;

TEST_CASE("negate swaps duals and flips atoms") {
  Formula until = parse_formula("(y <= 1) U_(0, 3] (y >= 2)");
  Formula neg = negate(until);
  CHECK(neg.op() == Op::Release);
  CHECK(neg.interval().lower.value == until.interval().lower.value);
  CHECK(neg.interval().upper_closed == until.interval().upper_closed);
  CHECK(neg.lhs().op() == Op::NegAtom);
  CHECK(neg.rhs().op() == Op::NegAtom);

  CHECK(negate(Formula::top()).op() == Op::False);
  CHECK(negate(parse_formula("X (y <= 1)")).lhs().op() == Op::NegAtom);
  CHECK(negate(parse_formula("y <= 1 /\\ y >= 0")).op() == Op::Or);
}

TEST_CASE("negate is an involution") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    Formula f = testing::random_formula(rng, 4, 2);
    CHECK(to_string(negate(negate(f))) == to_string(f));
  }
}

TEST_CASE("validate_interval rejects malformed windows") {
  CHECK_THROWS_AS(validate_interval(Interval::closed(2.0, 1.0), false),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_interval(Interval::closed(-1.0, 2.0), false),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_interval(Interval::closed(2.0, 2.0), true),
                  std::invalid_argument);
  CHECK_NOTHROW(validate_interval(Interval::closed(2.0, 2.0), false));
  Interval open = Interval::closed(1.0, 1.0);
  open.upper_closed = false;
  CHECK_THROWS_AS(validate_interval(open, false), std::invalid_argument);
  CHECK_NOTHROW(validate_interval(Interval::zero_to_inf(), true));
}

TEST_CASE("resolve_channels binds indices") {
  Formula f = parse_formula("y <= 1 /\\ X (z >= 0)");
  Formula bound = resolve_channels(f, {"z", "y"});
  CHECK(bound.lhs().pred().index == 1);
  CHECK(bound.rhs().lhs().pred().index == 0);
  CHECK_THROWS_AS(resolve_channels(f, {"y"}), std::invalid_argument);
}

TEST_CASE("box channels bind to consecutive trace columns") {
  Formula f = parse_formula("x1 in [0, 1] x [0, 1]");
  Formula bound = resolve_channels(f, {"x1", "x2"});
  CHECK(bound.pred().dims[0].index == 0);
  CHECK(bound.pred().dims[1].index == 1);
  CHECK_THROWS_AS(resolve_channels(f, {"x2", "x1"}), std::invalid_argument);
}

TEST_CASE("ground and parameter bookkeeping") {
  std::vector<std::string> names{"a", "b", "c"};
  Formula f = parse_formula("[]_[0, c] (y <= a)", names);
  CHECK_FALSE(f.is_ground());
  std::vector<bool> used = f.params_used();
  REQUIRE(used.size() == 3);
  CHECK(used[0]);
  CHECK_FALSE(used[1]);
  CHECK(used[2]);
  CHECK(parse_formula("y <= 1").is_ground());
  CHECK(parse_formula("y <= 1").params_used().empty());
}
