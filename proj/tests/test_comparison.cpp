#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "core/comparison.hpp"
#include "doctest.h"

using namespace liiss;

namespace {
ComparisonFn identity() { return ComparisonFn::from_expr("s", FnClass::KInf, 100.0); }
ComparisonFn quadratic() { return ComparisonFn::from_expr("s^2", FnClass::KInf, 100.0); }
}  // namespace

TEST_CASE("bar_alpha clips at the identity") {
  auto sq = quadratic();
  CHECK(bar_alpha(sq, 0.5) == doctest::Approx(0.25));
  CHECK(bar_alpha(sq, 2.0) == doctest::Approx(2.0));  // min(s, s^2) = s above 1
}

TEST_CASE("eta: identity and quadratic") {
  CHECK(eta(identity(), 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(eta(quadratic(), 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eta(identity(), 1.0) == doctest::Approx(0.0));
}

TEST_CASE("eta_inverse round trip") {
  auto sq = quadratic();
  CHECK(eta_inverse(sq, 1.0).value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(eta_inverse(sq, 1.0).clamped);
  // far below the floor the preimage clamps instead of underflowing
  auto res = eta_inverse(sq, 1e13);
  CHECK(res.clamped);
  CHECK(res.value == doctest::Approx(1e-12));
}

TEST_CASE("closed-form decay bound") {
  KLBound b(identity(), TimeSignal::from_expr("5/(1+t)", true));
  CHECK(b.has_closed_form());
  // G(t) = 5 ln(1+t), so beta(s,t) = s (1+t)^-5
  CHECK(b.evaluate(0.3, 1.0) == doctest::Approx(0.3 / 32.0).epsilon(1e-12));
  CHECK(b.evaluate(0.0, 3.0) == 0.0);
  CHECK(b.big_g(2.0) == doctest::Approx(5.0 * std::log(3.0)).epsilon(1e-9));
  // the generic eta path must agree with the closed form
  CHECK(b.evaluate_eta_path(0.3, 1.0) ==
        doctest::Approx(0.3 / 32.0).epsilon(1e-7));
}

TEST_CASE("quadratic alpha decay bound") {
  KLBound b(quadratic(), TimeSignal::from_expr("1", true));
  // for s <= 1: bar = s^2, beta(s,t) = s/(1+st)
  CHECK(b.evaluate(0.5, 2.0) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(b.evaluate(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
  // above 1 the integrated rate is min(s, s^2) = s: a log branch appears
  CHECK(b.evaluate(2.0, 1.0) ==
        doctest::Approx(1.0 / (2.0 - std::log(2.0))).epsilon(1e-8));
}

TEST_CASE("decay bound is monotone in both arguments") {
  KLBound b(quadratic(), TimeSignal::from_expr("1/(1+t)", true));
  double prev_t = INFINITY;
  for (double t : {0.0, 0.5, 1.0, 4.0, 16.0}) {
    const double v = b.evaluate(0.7, t);
    CHECK(v <= prev_t + 1e-12);
    prev_t = v;
  }
  double prev_s = 0.0;
  for (double s : {0.1, 0.3, 0.7, 1.5}) {
    const double v = b.evaluate(s, 1.0);
    CHECK(v >= prev_s - 1e-12);
    prev_s = v;
  }
}

TEST_CASE("bound_with_input adds twice the input integral") {
  KLBound b(identity(), TimeSignal::from_expr("5/(1+t)", true));
  auto v = TimeSignal::from_expr("0.1", true);
  CHECK(bound_with_input(b, 0.3, v, 1.0) ==
        doctest::Approx(0.3 / 32.0 + 0.2).epsilon(1e-10));
}

TEST_CASE("bound_sup_form takes the max against the running input sup") {
  KLBound b(identity(), TimeSignal::from_expr("5/(1+t)", true));
  auto v = TimeSignal::from_expr("0.05", true);
  // the decay term at t=1 is 0.009375 < 0.05, so the sup form saturates
  CHECK(bound_sup_form(b, 0.3, v, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  auto zero = TimeSignal::from_expr("0", true);
  CHECK(bound_sup_form(b, 0.3, zero, 0.0) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("locality gate") {
  auto v = TimeSignal::from_expr("0.1", true);
  CHECK(locality_admissible(0.2, v, 1.0, 0.5));        // 0.2 + 0.2 < 0.5
  CHECK_FALSE(locality_admissible(0.2, v, 2.0, 0.5));  // 0.2 + 0.4 >= 0.5
}

TEST_CASE("oracle: pure decay matches the closed form") {
  auto g1 = TimeSignal::from_expr("5/(1+t)", true);
  auto zero_v = TimeSignal::from_expr("0", true);
  auto traj = oracle_solve(identity(), ComparisonFn(), g1, TimeSignal::from_expr("0", true),
                           zero_v, 0.3, 1.0, 101);
  REQUIRE(traj.size() == 101);
  CHECK(traj.norms.back() == doctest::Approx(0.3 / 32.0).epsilon(1e-6));
}

TEST_CASE("oracle: constant forcing") {
  auto one = TimeSignal::from_expr("1", true);
  auto zero = TimeSignal::from_expr("0", true);
  // y' = -y + 1, y(0) = 0  =>  y(t) = 1 - e^-t
  auto traj = oracle_solve(identity(), ComparisonFn(), one, zero, one, 0.0, 2.0, 81);
  for (size_t i = 0; i < traj.size(); ++i)
    CHECK(traj.norms[i] ==
          doctest::Approx(1.0 - std::exp(-traj.times[i])).epsilon(1e-6));
}

TEST_CASE("cumulative integral matches quadrature") {
  CumulativeIntegral ci(TimeSignal::from_expr("5/(1+t)", true));
  CHECK(ci.value(2.0) == doctest::Approx(5.0 * std::log(3.0)).epsilon(1e-9));
  CHECK(ci.value(0.0) == 0.0);
  // queries resolve incrementally; a second pass must agree
  CHECK(ci.value(1.0) == doctest::Approx(5.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("verify_kl accepts a real bound and flags a corrupted one") {
  KLBound b(identity(), TimeSignal::from_expr("5/(1+t)", true));
  std::vector<double> s_grid = {0.05, 0.1, 0.3, 0.8};
  std::vector<double> t_grid = {0.0, 0.5, 1.0, 5.0};
  auto good = verify_kl(b, s_grid, t_grid, 1e4);
  CHECK(good.passed());

  auto bad = verify_kl(
      [](double s, double t) { return t < 1.0 ? s : s * (t - 0.5); },
      s_grid, t_grid, 1e4);
  CHECK_FALSE(bad.passed());
}

TEST_CASE("declared class is enforced") {
  // s^2/(1+s) is class K but stays bounded; declaring KInf on a huge domain
  // is fine, but a decreasing expression must be rejected.
  CHECK_THROWS_AS(ComparisonFn::from_expr("1/(1+s)", FnClass::K, 10.0), Error);
  CHECK_THROWS_AS(ComparisonFn::from_expr("1", FnClass::K, 10.0), Error);
  // class K needs f(0) = 0
  CHECK_THROWS_AS(ComparisonFn::from_expr("s+1", FnClass::K, 10.0), Error);
}

TEST_CASE("comparison function inversion") {
  auto sq = quadratic();
  CHECK(sq.inverse(4.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sq.inverse(0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(sq.inverse(1e9), Error);  // beyond alpha(domain_hi)
}
