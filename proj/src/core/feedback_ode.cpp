#include "core/feedback_ode.hpp"

#include <algorithm>
#include <cmath>

#include "core/lyapunov.hpp"
#include "core/numerics.hpp"

namespace liiss {

namespace {

double powi(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

TimeSignal make_disturbance(double amplitude) {
  if (amplitude < 0)
    fail(ErrorCode::InvalidArgument, "make_disturbance: need amplitude >= 0");
  return TimeSignal::from_expr("A*(0.6*exp(-qroot(t))+1.2*cos(pi*t))", false,
                               {{"A", amplitude}});
}

TimeSignal disturbance_norm(const OdeConfig& cfg) {
  TimeSignal d = cfg.d;
  if (!d.valid())
    return TimeSignal::from_fn([](double) { return 0.0; }, true, "0");
  return TimeSignal::from_fn([d](double t) { return std::abs(d(t)); }, true,
                             "|" + d.label() + "|");
}

OdeConfig benchmark_ode_config(double amplitude) {
  OdeConfig cfg;
  cfg.g = TimeSignal::from_expr("1/(1+t)", true);
  cfg.g_tilde = TimeSignal::from_expr("1/(1+t)", true);
  cfg.b = TimeSignal::from_expr("0.08+0.03*sin(3*pi*t)", true);
  cfg.h1 = TimeSignal::from_expr("1+0.1*sin(2*pi*t)", true);
  cfg.h1_deriv = TimeSignal::from_expr("0.2*pi*cos(2*pi*t)");
  cfg.g1 = TimeSignal::from_expr("5/(1+t)", true);
  cfg.g2 = TimeSignal::from_expr("1+5/(1+t)", true);
  cfg.h2 = TimeSignal::from_expr("(1+0.1*sin(2*pi*t))/(2+0.1*sin(2*pi*t))", true);
  cfg.d_amplitude = amplitude;
  cfg.d = make_disturbance(amplitude);
  return cfg;
}

void validate_ode_config(const OdeConfig& cfg, size_t n) {
  if (!cfg.g.valid() || !cfg.g_tilde.valid() || !cfg.b.valid() || !cfg.h1.valid() ||
      !cfg.g1.valid() || !cfg.g2.valid() || !cfg.h2.valid())
    fail(ErrorCode::InvalidArgument, "OdeConfig: missing coefficient signal");
  if (cfg.m <= 3 || cfg.n <= 1)
    fail(ErrorCode::InvalidArgument, "OdeConfig: need m > 3 and n > 1");
  if (!(cfg.horizon > 0) || cfg.samples < 2)
    fail(ErrorCode::InvalidArgument, "OdeConfig: need horizon > 0 and samples >= 2");
  if (n < 2) n = 2;
  for (size_t i = 0; i < n; ++i) {
    double t = cfg.horizon * static_cast<double>(i) / static_cast<double>(n - 1);
    if (!(cfg.b(t) > 0))
      fail(ErrorCode::InvalidArgument, "OdeConfig: b(t) <= 0 at t=" + std::to_string(t));
    double h = cfg.h1(t);
    if (h < -1e-12 || h > cfg.M + 1e-12)
      fail(ErrorCode::InvalidArgument,
           "OdeConfig: h1(t) outside [0, M] at t=" + std::to_string(t));
    double hd;
    if (cfg.h1_deriv.valid()) {
      hd = cfg.h1_deriv(t);
    } else {
      double step = 1e-6;
      double lo = std::max(0.0, t - step);
      hd = (cfg.h1(t + step) - cfg.h1(lo)) / (t + step - lo);
    }
    if (hd > h + 1e-6)
      fail(ErrorCode::InvalidArgument,
           "OdeConfig: h1'(t) > h1(t) at t=" + std::to_string(t));
  }
}

std::array<double, 2> open_loop_rhs(double t, std::span<const double> x,
                                    const OdeConfig& cfg) {
  if (x.size() != 2) fail(ErrorCode::DimensionMismatch, "open_loop_rhs: planar state");
  double x2cube = x[1] * x[1] * x[1];
  return {cfg.g(t) * powi(x[0], cfg.m) - cfg.h1(t) * x2cube,
          cfg.g_tilde(t) * powi(x[1], cfg.n) - cfg.b(t) * x[0] * x[0] * x[1]};
}

std::array<double, 2> control_law(double t, std::span<const double> x,
                                  const OdeConfig& cfg) {
  if (x.size() != 2) fail(ErrorCode::DimensionMismatch, "control_law: planar state");
  return {-cfg.g1(t) * x[0], cfg.h2(t) * x[0] - cfg.g2(t) * x[1]};
}

std::array<double, 2> closed_loop_rhs(double t, std::span<const double> x,
                                      const OdeConfig& cfg) {
  auto f = open_loop_rhs(t, x, cfg);
  auto u = control_law(t, x, cfg);
  double d = cfg.d.valid() ? cfg.d(t) : 0.0;
  return {f[0] + u[0], f[1] + u[1] + d};
}

Report validate_gains(const OdeConfig& cfg, std::span<const double> grid) {
  Report rep;
  rep.title = "gain conditions";
  size_t idx = 0;
  for (double t : grid) {
    double g1v = cfg.g1(t);
    double gbar = std::max(cfg.g(t), cfg.g_tilde(t));
    rep.add(idx++, t, gbar, g1v, 1e-12 * (1.0 + std::abs(g1v)));
    double g2v = cfg.g2(t);
    rep.add(idx++, t, 1.0 + g1v, g2v, 1e-12 * (1.0 + std::abs(g2v)));
    double h1v = cfg.h1(t);
    rep.add(idx++, t, std::abs(cfg.h2(t) - h1v / (1.0 + h1v)), 0.0, 1e-12);
  }
  if (!grid.empty())
    rep.metrics["G1_horizon"] =
        integrate_adaptive([&](double t) { return cfg.g1(t); }, 0.0, grid.back(), {});
  return rep;
}

Trajectory simulate(const OdeConfig& cfg, OdeMode mode) {
  validate_ode_config(cfg);
  OdeRhs rhs;
  if (mode == OdeMode::open) {
    rhs = [&cfg](double t, std::span<const double> x, std::span<double> dx) {
      auto f = open_loop_rhs(t, x, cfg);
      dx[0] = f[0];
      dx[1] = f[1];
    };
  } else {
    rhs = [&cfg](double t, std::span<const double> x, std::span<double> dx) {
      auto f = closed_loop_rhs(t, x, cfg);
      dx[0] = f[0];
      dx[1] = f[1];
    };
  }

  std::vector<double> grid(cfg.samples);
  for (size_t i = 0; i < cfg.samples; ++i)
    grid[i] = cfg.horizon * static_cast<double>(i) / static_cast<double>(cfg.samples - 1);

  Rk45Options opts;
  opts.tol = cfg.tol;
  opts.blowup_threshold = cfg.blowup_threshold;
  Trajectory traj = rk45_integrate(rhs, cfg.x0, 0.0, cfg.horizon, opts, grid);

  traj.input_energy.assign(traj.size(), 0.0);
  if (mode == OdeMode::closed && cfg.d.valid() && cfg.d_amplitude > 0) {
    double eps = cfg.eps > 0 ? cfg.eps : default_eps(cfg.M);
    ThetaFns th = ode_theta_fns(cfg.M, cfg.m, cfg.n, eps);
    auto f = [&](double t) { return th.phi(std::abs(cfg.d(t))); };
    double acc = 0.0;
    double prev_t = traj.times.empty() ? 0.0 : traj.times[0];
    double prev_f = traj.times.empty() ? 0.0 : f(prev_t);
    for (size_t i = 0; i < traj.size(); ++i) {
      double t = traj.times[i];
      double ft = (i == 0) ? prev_f : f(t);
      if (i > 0) acc += 0.5 * (prev_f + ft) * (t - prev_t);
      traj.input_energy[i] = acc;
      prev_t = t;
      prev_f = ft;
    }
  }
  return traj;
}

DissipationSpec ode_dissipation_spec(const OdeConfig& cfg) {
  auto thetas = ode_theta_fns(cfg.M, cfg.m, cfg.n,
                              cfg.eps > 0 ? cfg.eps : default_eps(cfg.M));
  DissipationSpec spec;
  spec.g1 = cfg.g1;
  spec.g2 = TimeSignal::from_fn(
      [g = cfg.g, gt = cfg.g_tilde](double t) { return std::max(g(t), gt(t)); },
      true, "max(g,g_tilde)");
  spec.theta1 = thetas.theta1;
  spec.theta2 = thetas.theta2;
  spec.phi = thetas.phi;
  auto [a1, a2] = ode_sandwich_fns(cfg.M);
  spec.R_prime = admissible_region(a1, a2, thetas.theta1, thetas.theta2).R_prime;
  return spec;
}

Report ode_dissipation_report(const OdeConfig& cfg, const Trajectory& traj,
                              double slack) {
  auto lf = ode_lyapunov_fn(cfg.h1, cfg.M);
  return dissipation_check(traj, lf, ode_dissipation_spec(cfg),
                           disturbance_norm(cfg), slack);
}

}  // namespace liiss
