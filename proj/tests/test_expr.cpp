#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "core/expr.hpp"
#include "doctest.h"

using namespace liiss;

namespace {
const std::vector<std::string> kT = {"t"};
const std::vector<std::string> kS = {"s"};
}  // namespace

TEST_CASE("rational coefficient") {
  auto e = Expr::parse("5/(1+t)", kT);
  CHECK(e.eval1(0.0) == doctest::Approx(5.0));
  CHECK(e.eval1(2.0) == doctest::Approx(5.0 / 3.0));
  CHECK(e.source() == "5/(1+t)");
}

TEST_CASE("sinusoidal coefficient") {
  auto e = Expr::parse("0.08+0.03*sin(3*pi*t)", kT);
  CHECK(e.eval1(0.0) == doctest::Approx(0.08));
  CHECK(e.eval1(1.0 / 6.0) == doctest::Approx(0.11));  // sin(pi/2) = 1
}

TEST_CASE("bound constants and qroot") {
  auto e = Expr::parse("A*(0.6*exp(-qroot(t))+1.2*cos(pi*t))", kT, {{"A", 2.0}});
  CHECK(e.eval1(0.0) == doctest::Approx(3.6));
  CHECK(e.eval1(1.0) ==
        doctest::Approx(2.0 * (0.6 * std::exp(-1.0) - 1.2)));
  CHECK(Expr::parse("qroot(16)", kT).eval1(0.0) == doctest::Approx(2.0));
  CHECK(Expr::parse("qroot(t)", kT).eval1(81.0) == doctest::Approx(3.0));
}

TEST_CASE("two-argument min and max") {
  auto lo = Expr::parse("min(s, s^2)", kS);
  auto hi = Expr::parse("max(s, s^2)", kS);
  CHECK(lo.eval1(0.5) == doctest::Approx(0.25));
  CHECK(lo.eval1(2.0) == doctest::Approx(2.0));
  CHECK(hi.eval1(0.5) == doctest::Approx(0.5));
  CHECK(hi.eval1(2.0) == doctest::Approx(4.0));
}

TEST_CASE("integer exponents are sign-correct for negative bases") {
  CHECK(Expr::parse("s^3", kS).eval1(-2.0) == doctest::Approx(-8.0));
  CHECK(Expr::parse("s^4", kS).eval1(-2.0) == doctest::Approx(16.0));
  CHECK(Expr::parse("s^-2", kS).eval1(2.0) == doctest::Approx(0.25));
}

TEST_CASE("unary chains and precedence") {
  CHECK(Expr::parse("-s^2", kS).eval1(3.0) == doctest::Approx(-9.0));
  CHECK(Expr::parse("--s", kS).eval1(3.0) == doctest::Approx(3.0));
  CHECK(Expr::parse("2+3*4", kT).eval1(0.0) == doctest::Approx(14.0));
  CHECK(Expr::parse("(2+3)*4", kT).eval1(0.0) == doctest::Approx(20.0));
  CHECK(Expr::parse("abs(-3)+sqrt(9)", kT).eval1(0.0) == doctest::Approx(6.0));
}

TEST_CASE("multi-variable evaluation order") {
  const std::vector<std::string> vars = {"xi", "t", "x"};
  auto e = Expr::parse("xi + 10*t + 100*x", vars);
  CHECK(e.arity() == 3);
  CHECK(e.eval3(1.0, 2.0, 3.0) == doctest::Approx(321.0));
}

TEST_CASE("identity detection") {
  CHECK(Expr::parse("s", kS).is_identity());
  CHECK(Expr::parse("(s)", kS).is_identity());
  CHECK_FALSE(Expr::parse("s^2", kS).is_identity());
  CHECK_FALSE(Expr::parse("2*s", kS).is_identity());
}

TEST_CASE("parse errors carry an offset") {
  CHECK_THROWS_AS(Expr::parse("5/(1+", kT), ParseError);
  try {
    Expr::parse("1 + & 2", kT);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(e.offset() == 4);
  }
  try {
    Expr::parse("1 + q", kT);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);  // unknown name position
  }
}

TEST_CASE("non-literal exponent is rejected") {
  CHECK_THROWS_AS(Expr::parse("s^t", {std::vector<std::string>{"s", "t"}}),
                  ParseError);
}
