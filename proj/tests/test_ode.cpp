#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "core/feedback_ode.hpp"
#include "doctest.h"

using namespace liiss;

TEST_CASE("benchmark coefficients at t = 0") {
  auto cfg = benchmark_ode_config(0.0);
  CHECK(cfg.g(0.0) == doctest::Approx(1.0));
  CHECK(cfg.g_tilde(0.0) == doctest::Approx(1.0));
  CHECK(cfg.b(0.0) == doctest::Approx(0.08));
  CHECK(cfg.h1(0.0) == doctest::Approx(1.0));
  CHECK(cfg.g1(0.0) == doctest::Approx(5.0));
  CHECK(cfg.g2(0.0) == doctest::Approx(6.0));
  CHECK(cfg.h2(0.0) == doctest::Approx(0.5));
  CHECK_NOTHROW(validate_ode_config(cfg));
}

TEST_CASE("open-loop vector field") {
  auto cfg = benchmark_ode_config(0.0);
  auto rhs = open_loop_rhs(0.0, cfg.x0, cfg);
  // g x1^4 - h1 x2^3 = 1e-4 - 0.015625; g~ x2^4 - b x1^2 x2 = 0.00390625 - 0.0002
  CHECK(rhs[0] == doctest::Approx(-0.015525).epsilon(1e-12));
  CHECK(rhs[1] == doctest::Approx(0.00370625).epsilon(1e-12));
}

TEST_CASE("control law and closed-loop field") {
  auto cfg = benchmark_ode_config(0.0);
  auto u = control_law(0.0, cfg.x0, cfg);
  CHECK(u[0] == doctest::Approx(-0.5));    // -g1 x1 = -5*0.1
  CHECK(u[1] == doctest::Approx(-1.45));   // h2 x1 - g2 x2 = 0.05 - 1.5
  auto open = open_loop_rhs(0.0, cfg.x0, cfg);
  auto closed = closed_loop_rhs(0.0, cfg.x0, cfg);
  CHECK(closed[0] == doctest::Approx(open[0] + u[0]).epsilon(1e-14));
  CHECK(closed[1] == doctest::Approx(open[1] + u[1]).epsilon(1e-14));
}

TEST_CASE("disturbance shape") {
  auto d = make_disturbance(3.0);
  CHECK(d(0.0) == doctest::Approx(3.0 * 1.8));  // 0.6 + 1.2
  auto zero = make_disturbance(0.0);
  CHECK(zero(5.0) == 0.0);
}

TEST_CASE("gain conditions hold for the benchmark") {
  auto cfg = benchmark_ode_config(1.0);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.1 * i);
  auto rep = validate_gains(cfg, grid);
  CHECK(rep.passed());
  CHECK(rep.metrics.at("G1_horizon") ==
        doctest::Approx(5.0 * std::log(21.0)).epsilon(1e-6));
}

TEST_CASE("gain conditions flag an undersized g1") {
  auto cfg = benchmark_ode_config(0.0);
  cfg.g1 = TimeSignal::from_expr("0.5/(1+t)", true);  // below g = 1/(1+t)
  std::vector<double> grid = {0.0, 1.0, 2.0};
  auto rep = validate_gains(cfg, grid);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("closed loop converges from small data") {
  auto cfg = benchmark_ode_config(0.0);
  auto traj = simulate(cfg, OdeMode::closed);
  REQUIRE(traj.size() == cfg.samples);
  CHECK_FALSE(traj.blow_up_time.has_value());
  CHECK(traj.final_norm() < 1e-3);
  // norms start at |x0| and the run records the full grid
  CHECK(traj.norms.front() ==
        doctest::Approx(std::hypot(0.1, 0.25)).epsilon(1e-12));
  CHECK(traj.times.back() == doctest::Approx(cfg.horizon));
}

TEST_CASE("open loop does not converge") {
  auto cfg = benchmark_ode_config(0.0);
  auto traj = simulate(cfg, OdeMode::open);
  CHECK(traj.final_norm() > 0.05);
}

TEST_CASE("large data blows up in finite time") {
  auto cfg = benchmark_ode_config(0.0);
  cfg.x0 = {1.2, 2.4};
  cfg.horizon = 10.0;
  auto traj = simulate(cfg, OdeMode::closed);
  REQUIRE(traj.blow_up_time.has_value());
  CHECK(*traj.blow_up_time < 10.0);
  CHECK(traj.times.back() == doctest::Approx(*traj.blow_up_time));
}

TEST_CASE("disturbed runs stay bounded and accumulate input energy") {
  auto cfg = benchmark_ode_config(3.0);
  cfg.horizon = 10.0;
  cfg.samples = 1001;
  auto traj = simulate(cfg, OdeMode::closed);
  CHECK_FALSE(traj.blow_up_time.has_value());
  CHECK(traj.sup_norm() < 5.0);
  CHECK(traj.input_energy.front() == 0.0);
  for (size_t i = 1; i < traj.size(); ++i)
    CHECK(traj.input_energy[i] >= traj.input_energy[i - 1]);
  CHECK(traj.input_energy.back() > 0.0);
}

TEST_CASE("config validation rejects a violated h1 bound") {
  auto cfg = benchmark_ode_config(0.0);
  cfg.M = 0.5;  // sup h1 = 1.1 > 0.5
  CHECK_THROWS_AS(validate_ode_config(cfg), Error);
}

TEST_CASE("dissipation report covers disturbed closed-loop runs") {
  auto cfg = benchmark_ode_config(4.0);
  cfg.horizon = 10.0;
  cfg.samples = 1001;
  auto traj = simulate(cfg, OdeMode::closed);
  auto rep = ode_dissipation_report(cfg, traj);
  CHECK(rep.passed());
}
