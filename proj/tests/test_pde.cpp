#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "core/parabolic_pde.hpp"
#include "doctest.h"

using namespace liiss;

namespace {

PdeConfig linear_config() {
  PdeConfig cfg;
  cfg.a = [](double, double) { return 1.0; };
  cfg.c = [](double, double) { return 0.0; };
  cfg.u = [](double, double) { return 0.0; };
  cfg.h = [](double, double, double) { return 0.0; };
  cfg.M = 0.0;
  cfg.underline_a = 0.5;
  cfg.underline_c = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("grid sampling and discrete norms") {
  auto one = sample_grid([](double) { return 1.0; }, 0.0, 2.0, 21);
  CHECK(discrete_norm(one, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  auto lin = sample_grid([](double xi) { return xi; }, 0.0, 1.0, 401);
  // trapezoid of xi^2 over [0,1] ~ 1/3
  CHECK(discrete_norm(lin, 2.0) ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-5));
  CHECK(discrete_norm(lin, 3.0) ==
        doctest::Approx(std::cbrt(0.25)).epsilon(1e-5));
}

TEST_CASE("sobolev norm of a linear profile") {
  auto lin = sample_grid([](double xi) { return xi; }, 0.0, 1.0, 401);
  // ||f||_2^2 = 1/3, ||f'||_2^2 = 1
  CHECK(sobolev_norm(lin) ==
        doctest::Approx(std::sqrt(1.0 / 3.0 + 1.0)).epsilon(1e-4));
}

TEST_CASE("diffusion stencil rows sum to zero") {
  auto a = [](double xi, double) { return 1.0 + 0.5 * std::sin(xi); };
  GridFunction shape = sample_grid([](double) { return 0.0; }, 0.0, 2.0, 31);
  auto m = assemble_diffusion(a, 0.3, shape);
  REQUIRE(m.size() == 31);
  for (size_t i = 0; i < m.size(); ++i)
    CHECK(std::fabs(m.lower[i] + m.diag[i] + m.upper[i]) <= 1e-12);
}

TEST_CASE("uniform diffusion stencil pattern") {
  auto a = [](double, double) { return 1.0; };
  GridFunction shape = sample_grid([](double) { return 0.0; }, 0.0, 1.0, 3);
  auto m = assemble_diffusion(a, 0.0, shape);
  // spacing 0.5: interior row is a/h^2 * (1, -2, 1) = (4, -8, 4)
  CHECK(m.lower[1] == doctest::Approx(4.0));
  CHECK(m.diag[1] == doctest::Approx(-8.0));
  CHECK(m.upper[1] == doctest::Approx(4.0));
}

TEST_CASE("pure reaction decay step") {
  auto cfg = linear_config();
  cfg.c = [](double, double) { return 1.0; };
  cfg.underline_c = 1.0;
  cfg.x0 = sample_grid([](double) { return 1.0; }, 0.0, 1.0, 11);
  // constant field, zero diffusion flux: x' = -x, one explicit step
  auto next = step_imex(cfg.x0, 0.0, 0.01, cfg);
  for (double v : next.values) CHECK(v == doctest::Approx(0.99).epsilon(1e-10));
}

TEST_CASE("neumann steps conserve the mean without reaction") {
  auto cfg = linear_config();
  cfg.x0 = sample_grid([](double xi) { return std::cos(3.0 * xi) + 0.4 * xi; },
                       0.0, 2.0, 101);
  auto mean = [](const GridFunction& f) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < f.size(); ++i)
      acc += 0.5 * (f.values[i] + f.values[i + 1]) * f.spacing();
    return acc / (f.xi_max - f.xi_min);
  };
  const double m0 = mean(cfg.x0);
  GridFunction state = cfg.x0;
  double t = 0.0;
  for (int k = 0; k < 200; ++k) {
    state = step_imex(state, t, 1e-3, cfg);
    t += 1e-3;
    CHECK(std::fabs(mean(state) - m0) <= 1e-10);
  }
}

TEST_CASE("heat equation decay rate") {
  auto cfg = linear_config();
  cfg.x0 = sample_grid([](double xi) { return std::cos(xi); }, 0.0, M_PI, 201);
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  auto traj = simulate(cfg);
  // the cos mode decays exactly like e^-t under zero-flux conditions
  const double want = traj.norms.front() * std::exp(-1.0);
  CHECK(traj.final_norm() == doctest::Approx(want).epsilon(0.01));
  CHECK_FALSE(traj.blow_up_time.has_value());
}

TEST_CASE("benchmark run decays and records series") {
  auto cfg = benchmark_pde_config(0.0, 0.5);
  cfg.horizon = 2.0;
  cfg.snapshot_times = {0.0, 1.0};
  auto traj = simulate(cfg);
  REQUIRE(traj.size() > 10);
  CHECK(traj.final_norm() < traj.norms.front());
  CHECK(traj.aux_norms.size() == traj.size());
  CHECK(traj.grid.size() == cfg.x0.size());
  REQUIRE(traj.snapshots.size() == 2);
  CHECK(traj.snapshot_times[0] == doctest::Approx(0.0));
  CHECK(traj.snapshot_times[1] == doctest::Approx(1.0).epsilon(1e-6));
  // zero input: no accumulated energy
  CHECK(traj.input_energy.back() == 0.0);
}

TEST_CASE("superlinear ignition from large data") {
  auto cfg = benchmark_pde_config(0.0, 23.0, 0.0, 2.0);
  cfg.horizon = 5.0;
  auto traj = simulate(cfg);
  REQUIRE(traj.blow_up_time.has_value());
  CHECK(*traj.blow_up_time < 5.0);
}

TEST_CASE("zero-input dissipation holds along stable runs") {
  auto cfg = benchmark_pde_config(0.0, 0.5);
  cfg.horizon = 2.0;
  auto traj = simulate(cfg);
  auto rep = pde_l2_dissipation_check(cfg, traj);
  CHECK(rep.passed());
}

TEST_CASE("interpolation inequality on smooth profiles") {
  auto f = sample_grid([](double xi) { return std::cos(2.0 * xi) + 0.3; },
                       0.0, 1.0, 101);
  auto r = interpolation_check(f, 4.0, 2.0);
  CHECK(r.lambda == doctest::Approx((0.5 - 0.25) / (0.5 + 0.5)));
  CHECK(r.ratio > 0.0);
  CHECK(r.lhs <= 2.0 * r.rhs_base);  // embedding constant stays moderate
}

TEST_CASE("config validation rejects a coefficient below its floor") {
  auto cfg = benchmark_pde_config(0.0, 0.5);
  cfg.underline_a = 10.0;  // the actual a dips well below 10
  CHECK_THROWS_AS(validate_pde_config(cfg), Error);
}

TEST_CASE("config validation accepts the benchmark") {
  auto cfg = benchmark_pde_config(1.0, 0.8);
  CHECK_NOTHROW(validate_pde_config(cfg));
}
