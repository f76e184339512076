#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "core/feedback_ode.hpp"
#include "core/lyapunov.hpp"
#include "doctest.h"

using namespace liiss;

TEST_CASE("benchmark energy functional values") {
  auto h1 = TimeSignal::from_expr("1", true);
  const double xa[] = {0.1, 0.25};
  CHECK(eval_ode_lf(0.0, xa, h1) == doctest::Approx(0.006953125).epsilon(1e-14));
  const double xb[] = {1.0, 1.0};
  CHECK(eval_ode_lf(0.0, xb, h1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quartic lower bound") {
  const double a[] = {1.0, 0.0};
  auto ra = min_quartic_bound(a);
  CHECK(ra.lhs == doctest::Approx(1.0));
  CHECK(ra.rhs == doctest::Approx(0.5));
  CHECK(ra.holds);

  const double b[] = {0.0, 0.0};
  auto rb = min_quartic_bound(b);
  CHECK(rb.lhs == 0.0);
  CHECK(rb.rhs == 0.0);
  CHECK(rb.holds);

  const double c[] = {0.0, 2.0};
  auto rc = min_quartic_bound(c);
  CHECK(rc.lhs == doctest::Approx(16.0));
  CHECK(rc.rhs == doctest::Approx(2.0));
  CHECK(rc.holds);
}

TEST_CASE("sandwich functions") {
  auto [a1, a2] = ode_sandwich_fns(1.1);
  CHECK(a1(0.0) == 0.0);
  CHECK(a1(2.0) == doctest::Approx(0.5));     // min{4,16}/8
  CHECK(a2(1.0) == doctest::Approx(1.05));    // 0.525*(1+1)
  for (double s : {0.01, 0.3, 1.0, 2.0, 4.9})
    CHECK(a1(s) <= a2(s));
}

TEST_CASE("lyapunov function sandwich holds on random samples") {
  auto cfg = benchmark_ode_config(0.0);
  auto lf = ode_lyapunov_fn(cfg.h1, cfg.M);
  auto rep = sandwich_check(lf, 10.0, 5.0, 2, 10000, 0x5EED);
  CHECK(rep.passed());
}

TEST_CASE("theta and phi functions") {
  auto th = ode_theta_fns(1.1, 4, 4, 0.25);
  CHECK(th.theta1(1.0) == doctest::Approx(0.5));
  CHECK(th.theta2(0.5) == doctest::Approx(0.065625).epsilon(1e-12));
  CHECK(th.phi(1.0) == doctest::Approx(134.4).epsilon(1e-12));
}

TEST_CASE("eps window is enforced") {
  // requires eps in (0, 1/(M+1)) = (0, 1/2.1)
  CHECK_THROWS_AS(ode_theta_fns(1.1, 4, 4, 0.5), Error);
  CHECK_THROWS_AS(ode_theta_fns(1.1, 4, 4, 0.0), Error);
  try {
    ode_theta_fns(1.1, 4, 4, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EpsOutOfRange);
  }
  CHECK(default_eps(1.1) == doctest::Approx(0.5 / 2.1));
}

TEST_CASE("admissible region for the benchmark instance") {
  auto [a1, a2] = ode_sandwich_fns(1.1);
  auto th = ode_theta_fns(1.1, 4, 4, default_eps(1.1));
  auto region = admissible_region(a1, a2, th.theta1, th.theta2);
  CHECK(region.R_prime == doctest::Approx(5.0 / 21.0).epsilon(1e-6));
  CHECK(region.r_prime ==
        doctest::Approx(std::pow(5.0 / 21.0, 4) / 8.0).epsilon(1e-8));
  CHECK(a2(region.R) == doctest::Approx(0.5 * region.r_prime).epsilon(1e-8));
  // theta2 <= theta1 on the certified interval
  for (int i = 1; i <= 1000; ++i) {
    const double s = region.R_prime * i / 1000.0;
    CHECK(th.theta2(s) <= th.theta1(s) + 1e-12);
  }
}

TEST_CASE("no admissible region when theta2 dominates immediately") {
  auto id = ComparisonFn::from_expr("s", FnClass::KInf, 100.0);
  auto th1 = ComparisonFn::from_expr("s^2", FnClass::K, 100.0);
  auto th2 = ComparisonFn::from_expr("s", FnClass::K, 100.0);
  // near zero s^2 < s, so theta2 > theta1 at every probe
  CHECK_THROWS_AS(admissible_region(id, id, th1, th2), Error);
}

TEST_CASE("dissipation check: zero trajectory has no violations") {
  auto cfg = benchmark_ode_config(0.0);
  Trajectory traj;
  traj.dim = 2;
  for (int i = 0; i <= 100; ++i) {
    traj.times.push_back(0.02 * i);
    traj.states.push_back(0.0);
    traj.states.push_back(0.0);
    traj.norms.push_back(0.0);
  }
  auto rep = ode_dissipation_report(cfg, traj);
  CHECK(rep.passed());
}

TEST_CASE("dissipation check: closed-loop run satisfies the inequality") {
  auto cfg = benchmark_ode_config(0.0);
  auto traj = simulate(cfg, OdeMode::closed);
  auto rep = ode_dissipation_report(cfg, traj);
  CHECK(rep.passed());
  CHECK(rep.violation_count() == 0);
}

TEST_CASE("dissipation check: synthetic growth is flagged") {
  auto cfg = benchmark_ode_config(0.0);
  Trajectory traj;
  traj.dim = 2;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.02 * i;
    traj.times.push_back(t);
    traj.states.push_back(0.1 * std::exp(t));
    traj.states.push_back(0.0);
    traj.norms.push_back(0.1 * std::exp(t));
  }
  auto rep = ode_dissipation_report(cfg, traj);
  CHECK_FALSE(rep.passed());
  CHECK(rep.violation_count() > 0);
  CHECK(rep.worst_margin() < 0.0);
}

TEST_CASE("dissipation spec validates its structural conditions") {
  auto cfg = benchmark_ode_config(0.0);
  auto spec = ode_dissipation_spec(cfg);
  CHECK_NOTHROW(spec.validate(20.0));
  CHECK(spec.R_prime == doctest::Approx(5.0 / 21.0).epsilon(1e-6));
}

TEST_CASE("quadratic form: equality case passes") {
  auto I = [](double) { return DenseMatrix::identity(1); };
  QuadraticLF qlf(I, 0.5, 2.0, 1);
  auto A = [](double) {
    DenseMatrix m = DenseMatrix::identity(1);
    m.at(0, 0) = -1.0;
    return m;
  };
  auto F = [](double, std::span<const double>, std::span<const double>) {
    return std::vector<double>{0.0};
  };
  auto a1 = TimeSignal::from_expr("2", true);
  auto a2 = TimeSignal::from_expr("0", true);
  auto zeta = ComparisonFn::from_expr("s", FnClass::K, 100.0);
  std::vector<ConditionSample> samples;
  for (double x : {-2.0, -0.5, 0.1, 1.0, 3.0})
    samples.push_back({0.0, {x}, {0.0}});
  auto rep = quadratic_lf_condition_check(qlf, A, F, a1, a2, 4.0, 4.0, zeta, samples);
  CHECK(rep.passed());
}

TEST_CASE("quadratic form: cubic perturbation within superlinear budget") {
  auto I = [](double) { return DenseMatrix::identity(1); };
  QuadraticLF qlf(I, 0.5, 2.0, 1);
  auto A = [](double) {
    DenseMatrix m = DenseMatrix::identity(1);
    m.at(0, 0) = -1.0;
    return m;
  };
  auto F = [](double, std::span<const double> x, std::span<const double>) {
    return std::vector<double>{x[0] * x[0] * x[0]};
  };
  auto a1 = TimeSignal::from_expr("2", true);
  auto a2 = TimeSignal::from_expr("2", true);
  auto zeta = ComparisonFn::from_expr("s", FnClass::K, 100.0);
  std::vector<ConditionSample> samples;
  for (double x : {-1.5, -0.2, 0.3, 0.9, 2.0})
    samples.push_back({0.0, {x}, {0.0}});
  auto rep = quadratic_lf_condition_check(qlf, A, F, a1, a2, 4.0, 4.0, zeta, samples);
  CHECK(rep.passed());
}

TEST_CASE("quadratic form: non-coercive P fails at construction") {
  auto negI = [](double) {
    DenseMatrix m = DenseMatrix::identity(1);
    m.at(0, 0) = -1.0;
    return m;
  };
  CHECK_THROWS_AS(QuadraticLF(negI, 0.5, 2.0, 1), Error);
}

TEST_CASE("quadratic form: dimension mismatch is rejected") {
  auto I = [](double) { return DenseMatrix::identity(1); };
  QuadraticLF qlf(I, 0.5, 2.0, 1);
  auto A = [](double) { return DenseMatrix::identity(2); };
  auto F = [](double, std::span<const double>, std::span<const double>) {
    return std::vector<double>{0.0};
  };
  auto a1 = TimeSignal::from_expr("2", true);
  auto a2 = TimeSignal::from_expr("0", true);
  auto zeta = ComparisonFn::from_expr("s", FnClass::K, 100.0);
  std::vector<ConditionSample> samples = {{0.0, {1.0}, {0.0}}};
  CHECK_THROWS_AS(
      quadratic_lf_condition_check(qlf, A, F, a1, a2, 4.0, 4.0, zeta, samples),
      Error);
}
