#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "tlmine/parser.hpp"
#include "tlmine/robustness.hpp"

using namespace tlmine;
using tlmine::testing::make_trace;

namespace {
double rob(const char* text, const TimedStateSequence& tss,
           std::size_t i = 0) {
  return robustness(parse_formula(text), tss, i);
}
}  // namespace

TEST_CASE("signed distance of scalar, box, and boolean atoms") {
  std::vector<double> x{2.0, 2.0};
  Predicate le = Predicate::scalar_le("a", Scalar::lit(3.0));
  le.index = 0;
  CHECK(signed_distance(x, le) == 1.0);
  Predicate ge = Predicate::scalar_ge("a", Scalar::lit(3.0));
  ge.index = 0;
  CHECK(signed_distance(x, ge) == -1.0);
  Predicate coeff = Predicate::scalar_le("a", Scalar::lit(6.0), 2.0);
  coeff.index = 0;
  CHECK(signed_distance(x, coeff) == 1.0);

  Predicate box = Predicate::box({{"a", 0, Scalar::lit(0.0), Scalar::lit(1.0)},
                                  {"b", 1, Scalar::lit(0.0), Scalar::lit(1.0)}});
  CHECK(signed_distance(x, box) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  std::vector<double> inside{0.5, 0.7};
  CHECK(signed_distance(inside, box) == doctest::Approx(0.3).epsilon(1e-12));

  Predicate b = Predicate::boolean("a");
  b.index = 0;
  std::vector<double> on{1.0}, off{0.0};
  CHECK(signed_distance(on, b, 2.5) == 2.5);
  CHECK(signed_distance(off, b, 2.5) == -2.5);
}

TEST_CASE("interval preimage honors endpoint openness") {
  std::vector<double> times{0.0, 1.0, 2.0, 3.5};
  IndexRange r = preimage(times, 0, Interval::closed(0.0, 2.0));
  CHECK(r.lo == 0);
  CHECK(r.hi == 3);
  Interval open = Interval::closed(0.0, 1.0);
  open.lower_closed = false;
  open.upper_closed = false;
  CHECK(preimage(times, 0, open).empty());
  open.upper_closed = true;
  IndexRange s = preimage(times, 0, open);
  CHECK(s.lo == 1);
  CHECK(s.hi == 2);
  IndexRange shifted = preimage(times, 1, Interval::closed(0.0, 1.0));
  CHECK(shifted.lo == 1);
  CHECK(shifted.hi == 3);
  CHECK(preimage(times, 0, Interval::zero_to_inf()).hi == 4);
  CHECK(preimage(times, 3, Interval::closed(1.0, 2.0)).empty());
}

TEST_CASE("hand-computed fixtures on y = 0,2,4") {
  TimedStateSequence tss = make_trace({{0.0, 2.0, 4.0}}, {"y"});
  CHECK(rob("[] (y <= 3)", tss) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rob("<>_[0,1] (y >= 3)", tss) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rob("(y <= 3) U_[0,2] (y >= 3)", tss) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constants and empty windows hit the infinity conventions") {
  TimedStateSequence tss = make_trace({{0.0, 2.0, 4.0}}, {"y"});
  CHECK(rob("true", tss) == kInf);
  CHECK(rob("false", tss) == -kInf);
  CHECK(rob("<>_[5,6] (y >= 0)", tss) == -kInf);
  CHECK(rob("[]_[5,6] (y <= 0)", tss) == kInf);
  CHECK(rob("X (y <= 9)", tss, 2) == -kInf);
  CHECK(rob("X (y <= 9)", tss, 1) == 5.0);
}

TEST_CASE("until matches its unrolled definition") {
  TimedStateSequence tss =
      make_trace({{0.0, 1.0, 3.0, 2.0, 5.0}}, {"y"}, {0.0, 0.5, 1.0, 1.5, 2.0});
  Formula lhs = parse_formula("y <= 4");
  Formula rhs = parse_formula("y >= 2");
  Formula u = Formula::until(Interval::closed(0.0, 1.5), lhs, rhs);
  double expect = -kInf;
  IndexRange win = preimage(tss.times, 0, Interval::closed(0.0, 1.5));
  for (std::size_t j = win.lo; j < win.hi; ++j) {
    double term = robustness(rhs, tss, j);
    for (std::size_t k = 0; k < j; ++k)
      term = std::min(term, robustness(lhs, tss, k));
    expect = std::max(expect, term);
  }
  CHECK(robustness(u, tss) == expect);
}

TEST_CASE("eventually and always are until and release sugar") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    TimedStateSequence tss = testing::random_trace(rng, 20, 2);
    Interval iv = testing::random_interval(rng);
    Formula f = testing::random_formula(rng, 2, tss.dim());
    Formula ev = Formula::eventually(iv, f);
    Formula alw = Formula::always(iv, f);
    CHECK(robustness(ev, tss) ==
          robustness(Formula::until(iv, Formula::top(), f), tss));
    CHECK(robustness(alw, tss) ==
          robustness(Formula::release(iv, Formula::bottom(), f), tss));
  }
}

TEST_CASE("negation mirrors robustness exactly for next-free formulas") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 60; ++k) {
    TimedStateSequence tss = testing::random_trace(rng, 20, 2);
    Formula f = testing::random_formula(rng, 3, tss.dim(), false);
    std::uniform_int_distribution<std::size_t> at(0, tss.size() - 1);
    std::size_t i = at(rng);
    CHECK(robustness(negate(f), tss, i) == -robustness(f, tss, i));
  }
}

TEST_CASE("next is falsity-biased at the last sample") {
  TimedStateSequence tss = testing::make_trace({{1.0, 2.0, 3.0}}, {"y"});
  Formula f = parse_formula("X (y >= 0)");
  std::size_t last = tss.size() - 1;
  CHECK(robustness(f, tss, last) == -kInf);
  // !X(y >= 0) rewrites to X !(y >= 0), so both sides bottom out at the
  // end of the trace instead of mirroring each other.
  CHECK(robustness(negate(f), tss, last) == -kInf);
  CHECK(robustness(f, tss, 0) == 2.0);
  CHECK(robustness(negate(f), tss, 0) == -2.0);
}

TEST_CASE("windowed evaluation agrees with the literal recursion") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    TimedStateSequence tss = testing::random_trace(rng, 16, 3);
    Formula f = testing::random_formula(rng, 4, tss.dim());
    std::uniform_int_distribution<std::size_t> at(0, tss.size() - 1);
    std::size_t i = at(rng);
    CHECK(robustness(f, tss, i) == robustness_naive(f, tss, i));
  }
}

TEST_CASE("series matches pointwise evaluation") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    TimedStateSequence tss = testing::random_trace(rng, 15, 2);
    Formula f = testing::random_formula(rng, 3, tss.dim());
    std::vector<double> series = robustness_series(f, tss);
    REQUIRE(series.size() == tss.size());
    for (std::size_t i = 0; i < tss.size(); ++i)
      CHECK(series[i] == robustness(f, tss, i));
  }
}

TEST_CASE("evaluation rejects bad inputs") {
  TimedStateSequence tss = make_trace({{0.0, 1.0}}, {"y"});
  CHECK_THROWS_AS(robustness(parse_formula("y <= theta", {"theta"}), tss),
                  std::invalid_argument);
  CHECK_THROWS_AS(robustness(parse_formula("z <= 1"), tss),
                  std::invalid_argument);
  CHECK_THROWS_AS(robustness(parse_formula("y <= 1"), tss, 2),
                  std::invalid_argument);
}

TEST_CASE("rho_bool scales boolean robustness") {
  TimedStateSequence tss = make_trace({{1.0, 0.0}}, {"flag"});
  EvalOptions opt;
  opt.rho_bool = 0.25;
  CHECK(robustness(parse_formula("[] flag"), tss, 0, opt) == -0.25);
  CHECK(robustness(parse_formula("flag"), tss, 0, opt) == 0.25);
}
