#include "core/parabolic_pde.hpp"

#include <algorithm>
#include <cmath>

#include "core/expr.hpp"

namespace liiss {

namespace {

const std::vector<std::string> kXiT{"xi", "t"};
const std::vector<std::string> kXiTX{"xi", "t", "x"};

double trapezoid_weight(size_t i, size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

GridFunction sample_grid(const std::function<double(double)>& f, double xi_min,
                         double xi_max, size_t n) {
  if (!(xi_min < xi_max) || n < 3)
    fail(ErrorCode::InvalidArgument, "sample_grid: need xi_min < xi_max and n >= 3");
  GridFunction g;
  g.xi_min = xi_min;
  g.xi_max = xi_max;
  g.values.resize(n);
  for (size_t i = 0; i < n; ++i) g.values[i] = f(g.node(i));
  return g;
}

PdeConfig benchmark_pde_config(double amplitude, double x0_scale, double xi_min,
                               double xi_max, size_t n_xi) {
  Expr a = Expr::parse("sqrt(exp(-t)+0.5*sin(pi*xi)+0.5)", kXiT);
  Expr c = Expr::parse("1+pi*sqrt(sin(xi)+exp(-t)+1)", kXiT);
  Expr h = Expr::parse("sqrt(1+sin(xi))/(1+t)*x^2", kXiTX);
  Expr u = Expr::parse("A1*sin(10*t+xi)", kXiT, {{"A1", amplitude}});

  PdeConfig cfg;
  cfg.a = [a](double xi, double t) { return a.eval2(xi, t); };
  cfg.c = [c](double xi, double t) { return c.eval2(xi, t); };
  cfg.h = [h](double xi, double t, double x) { return h.eval3(xi, t, x); };
  cfg.u = [u](double xi, double t) { return u.eval2(xi, t); };
  cfg.x0 = sample_grid(
      [x0_scale](double xi) { return x0_scale * (xi - 0.5) * (xi - 2.0); }, xi_min,
      xi_max, n_xi);

  // Sampled coefficient floors over the space-time box, with headroom so the
  // validator's own grid cannot dip below them.
  double amin = std::numeric_limits<double>::infinity();
  double cmin = amin;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 200; ++j) {
      double xi = xi_min + (xi_max - xi_min) * i / 200.0;
      double t = cfg.horizon * j / 200.0;
      amin = std::min(amin, cfg.a(xi, t));
      cmin = std::min(cmin, cfg.c(xi, t));
    }
  cfg.underline_a = 0.5 * amin;
  cfg.underline_c = 0.9 * cmin;
  return cfg;
}

void validate_pde_config(const PdeConfig& cfg, size_t n) {
  if (!cfg.a || !cfg.c || !cfg.u || !cfg.h)
    fail(ErrorCode::InvalidArgument, "PdeConfig: missing coefficient function");
  if (cfg.x0.size() < 3 || !(cfg.x0.xi_min < cfg.x0.xi_max))
    fail(ErrorCode::InvalidArgument, "PdeConfig: initial grid needs >= 3 nodes");
  if (!(cfg.dt > 0) || !(cfg.horizon > 0) || !(cfg.blowup_threshold > 0))
    fail(ErrorCode::InvalidArgument, "PdeConfig: need dt, horizon, threshold > 0");
  if (!(cfg.m1 > 1) || !(cfg.m2 > 1))
    fail(ErrorCode::InvalidArgument, "PdeConfig: growth exponents must exceed 1");
  if (!(cfg.underline_a > 0))
    fail(ErrorCode::InvalidArgument, "PdeConfig: need underline_a > 0");
  if (cfg.underline_c < 0)
    fail(ErrorCode::InvalidArgument, "PdeConfig: need underline_c >= 0");
  if (n < 2) n = 2;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      double xi =
          cfg.x0.xi_min + (cfg.x0.xi_max - cfg.x0.xi_min) * i / double(n - 1);
      double t = cfg.horizon * j / double(n - 1);
      if (cfg.a(xi, t) < cfg.underline_a - 1e-12 * (1.0 + cfg.underline_a))
        fail(ErrorCode::InvalidArgument,
             "PdeConfig: a below underline_a at xi=" + std::to_string(xi) +
                 " t=" + std::to_string(t));
      if (cfg.c(xi, t) < cfg.underline_c - 1e-12 * (1.0 + cfg.underline_c))
        fail(ErrorCode::InvalidArgument,
             "PdeConfig: c below underline_c at xi=" + std::to_string(xi) +
                 " t=" + std::to_string(t));
      for (size_t k = 0; k < n; ++k) {
        double x = -10.0 + 20.0 * k / double(n - 1);
        double lhs = std::abs(cfg.h(xi, t, x));
        double rhs = cfg.M * (std::pow(std::abs(x), cfg.m1) +
                              std::pow(std::abs(x), cfg.m2));
        if (lhs > rhs + 1e-9 * (1.0 + rhs))
          fail(ErrorCode::InvalidArgument,
               "PdeConfig: growth bound violated at xi=" + std::to_string(xi) +
                   " t=" + std::to_string(t) + " x=" + std::to_string(x));
      }
    }
}

Tridiagonal assemble_diffusion(const SpaceTimeFn& a, double t,
                               const GridFunction& shape) {
  size_t n = shape.size();
  if (n < 3) fail(ErrorCode::InvalidArgument, "assemble_diffusion: need >= 3 nodes");
  double dxi = shape.spacing();
  double inv2 = 1.0 / (dxi * dxi);
  Tridiagonal m;
  m.lower.assign(n, 0.0);
  m.diag.assign(n, 0.0);
  m.upper.assign(n, 0.0);
  // half-node coefficients a_{i+1/2}
  std::vector<double> ah(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) ah[i] = a(shape.node(i) + 0.5 * dxi, t);
  m.upper[0] = 2.0 * ah[0] * inv2;
  m.diag[0] = -m.upper[0];
  for (size_t i = 1; i + 1 < n; ++i) {
    m.lower[i] = ah[i - 1] * inv2;
    m.upper[i] = ah[i] * inv2;
    m.diag[i] = -(m.lower[i] + m.upper[i]);
  }
  m.lower[n - 1] = 2.0 * ah[n - 2] * inv2;
  m.diag[n - 1] = -m.lower[n - 1];
  return m;
}

GridFunction step_imex(const GridFunction& state, double t, double dt,
                       const PdeConfig& cfg, bool* blown) {
  if (!(dt > 0)) fail(ErrorCode::InvalidArgument, "step_imex: need dt > 0");
  size_t n = state.size();
  Tridiagonal lap = assemble_diffusion(cfg.a, t + 0.5 * dt, state);
  std::vector<double> lx = lap.apply(state.values);
  std::vector<double> rhs(n);
  for (size_t i = 0; i < n; ++i) {
    double xi = state.node(i);
    double x = state.values[i];
    rhs[i] = x + 0.5 * dt * lx[i] +
             dt * (-cfg.c(xi, t) * x + cfg.h(xi, t, x) + cfg.u(xi, t));
  }
  Tridiagonal sys;
  sys.lower.resize(n);
  sys.diag.resize(n);
  sys.upper.resize(n);
  for (size_t i = 0; i < n; ++i) {
    sys.lower[i] = -0.5 * dt * lap.lower[i];
    sys.diag[i] = 1.0 - 0.5 * dt * lap.diag[i];
    sys.upper[i] = -0.5 * dt * lap.upper[i];
  }
  GridFunction next = state;
  next.values = thomas_solve(sys, rhs);
  if (blown) {
    *blown = false;
    for (double v : next.values)
      if (!(std::abs(v) <= cfg.blowup_threshold)) {
        *blown = true;
        break;
      }
  }
  return next;
}

double discrete_norm(const GridFunction& f, double p) {
  if (!(p >= 1)) fail(ErrorCode::InvalidArgument, "discrete_norm: need p >= 1");
  if (f.size() < 2) fail(ErrorCode::InvalidArgument, "discrete_norm: empty grid");
  double dxi = f.spacing();
  double acc = 0.0;
  size_t n = f.size();
  for (size_t i = 0; i < n; ++i)
    acc += trapezoid_weight(i, n) * std::pow(std::abs(f.values[i]), p) * dxi;
  return std::pow(acc, 1.0 / p);
}

double sobolev_norm(const GridFunction& f) {
  size_t n = f.size();
  if (n < 3) fail(ErrorCode::InvalidArgument, "sobolev_norm: need >= 3 nodes");
  double dxi = f.spacing();
  GridFunction d = f;
  d.values[0] = (f.values[1] - f.values[0]) / dxi;
  for (size_t i = 1; i + 1 < n; ++i)
    d.values[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * dxi);
  d.values[n - 1] = (f.values[n - 1] - f.values[n - 2]) / dxi;
  double nf = discrete_norm(f, 2.0);
  double nd = discrete_norm(d, 2.0);
  return std::sqrt(nf * nf + nd * nd);
}

InterpolationResult interpolation_check(const GridFunction& f, double p, double q) {
  if (!(q >= 1) || !(p >= q))
    fail(ErrorCode::InvalidArgument, "interpolation_check: need 1 <= q <= p");
  InterpolationResult r;
  r.lambda = (1.0 / q - 1.0 / p) / (1.0 / q + 0.5);
  r.lhs = discrete_norm(f, p);
  double nq = discrete_norm(f, q);
  double ns = sobolev_norm(f);
  r.rhs_base = std::pow(nq, 1.0 - r.lambda) * std::pow(ns, r.lambda);
  if (r.rhs_base == 0.0) {
    if (r.lhs > 0.0)
      fail(ErrorCode::DegenerateInput,
           "interpolation_check: zero base norm with nonzero lhs");
    r.ratio = 0.0;
    return r;
  }
  r.ratio = r.lhs / r.rhs_base;
  return r;
}

Trajectory simulate(const PdeConfig& cfg) {
  validate_pde_config(cfg);
  Trajectory traj;
  traj.dim = 0;
  size_t n = cfg.x0.size();
  traj.grid.resize(n);
  for (size_t i = 0; i < n; ++i) traj.grid[i] = cfg.x0.node(i);

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  size_t next_snap = 0;

  GridFunction u_now = cfg.x0;  // scratch for the input profile
  auto u_norm_sq = [&](double t) {
    for (size_t i = 0; i < n; ++i) u_now.values[i] = cfg.u(u_now.node(i), t);
    double v = discrete_norm(u_now, 2.0);
    return v * v;
  };

  double energy = 0.0;
  double prev_unsq = u_norm_sq(0.0);
  double prev_t = 0.0;

  auto record = [&](double t, const GridFunction& x) {
    traj.times.push_back(t);
    traj.norms.push_back(discrete_norm(x, 2.0));
    traj.aux_norms.push_back(discrete_norm(x, 3.0));
    double unsq = (t == prev_t) ? prev_unsq : u_norm_sq(t);
    energy += 0.5 * (prev_unsq + unsq) * (t - prev_t);
    traj.input_energy.push_back(energy);
    prev_unsq = unsq;
    prev_t = t;
    while (next_snap < snaps.size() && t >= snaps[next_snap] - 1e-12) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(x.values);
      ++next_snap;
    }
  };

  GridFunction x = cfg.x0;
  double t = 0.0;
  record(t, x);

  double dt = cfg.dt;
  // A step still blown at this floor is genuine divergence; an absolute
  // floor keeps a diverging field from creeping toward the threshold through
  // ever-smaller accepted steps without ever being declared.
  const double dt_floor = cfg.dt * 0x1p-20;
  size_t steps = 0;
  while (t < cfg.horizon * (1.0 - 1e-12)) {
    if (++steps > cfg.max_steps)
      fail(ErrorCode::NonConvergence, "pde simulate: step budget exhausted");
    double step_dt = std::min(dt, cfg.horizon - t);
    bool blown = false;
    GridFunction next = step_imex(x, t, step_dt, cfg, &blown);
    while (blown && step_dt > dt_floor) {
      step_dt *= 0.5;
      next = step_imex(x, t, step_dt, cfg, &blown);
    }
    if (blown) {
      t += step_dt;
      record(t, next);
      traj.blow_up_time = t;
      return traj;
    }
    dt = step_dt;
    t += step_dt;
    x = std::move(next);
    record(t, x);
    dt = std::min(cfg.dt, 2.0 * dt);
  }
  return traj;
}

Report pde_l2_dissipation_check(const PdeConfig& cfg, const Trajectory& traj,
                                double slack) {
  Report rep;
  rep.title = "pde energy dissipation";
  double c_lower = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      double xi = cfg.x0.xi_min + (cfg.x0.xi_max - cfg.x0.xi_min) * i / 100.0;
      double t = cfg.horizon * j / 100.0;
      c_lower = std::min(c_lower, cfg.c(xi, t));
    }
  rep.metrics["c_lower"] = c_lower;
  if (traj.size() < 3 || traj.aux_norms.size() != traj.size()) return rep;
  for (size_t i = 1; i + 1 < traj.size(); ++i) {
    double dt2 = traj.times[i + 1] - traj.times[i - 1];
    if (!(dt2 > 0)) continue;
    double e_next = 0.5 * traj.norms[i + 1] * traj.norms[i + 1];
    double e_prev = 0.5 * traj.norms[i - 1] * traj.norms[i - 1];
    double lhs = (e_next - e_prev) / dt2;
    double nrm = traj.norms[i];
    double aux = traj.aux_norms[i];
    double rhs = -c_lower * nrm * nrm + 2.0 * cfg.M * aux * aux * aux;
    double sl = slack >= 0 ? slack : 10.0 * (0.5 * dt2) * (1.0 + std::abs(rhs));
    rep.add(i, traj.times[i], lhs, rhs, sl);
  }
  return rep;
}

}  // namespace liiss
