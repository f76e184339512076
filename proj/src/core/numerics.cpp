#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liiss {

namespace {

struct SimpsonCtx {
  const ScalarFn1& f;
  double rel_tol;
  int max_depth;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// abs_budget is this interval's share of the absolute tolerance; the
// relative criterion is applied to the local refined estimate so that
// steep integrands (integrable singularities) terminate on relative
// accuracy where their local contribution is large.
double simpson_adapt(const SimpsonCtx& ctx, double a, double m, double b,
                     double fa, double fm, double fb, double s_whole,
                     double abs_budget, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = ctx.f(lm);
  double frm = ctx.f(rm);
  double s_left = simpson(a, m, fa, flm, fm);
  double s_right = simpson(m, b, fm, frm, fb);
  double s2 = s_left + s_right;
  double err = (s2 - s_whole) / 15.0;
  double allow = std::max(abs_budget, ctx.rel_tol * std::abs(s2));
  if (std::abs(err) <= allow) return s2 + err;
  if (depth >= ctx.max_depth) {
    if (!(std::abs(err) <= allow))
      fail(ErrorCode::NonConvergence,
           "adaptive quadrature hit depth cap " + std::to_string(ctx.max_depth) +
               " near x=" + std::to_string(m));
    return s2 + err;
  }
  return simpson_adapt(ctx, a, lm, m, fa, flm, fm, s_left, 0.5 * abs_budget, depth + 1) +
         simpson_adapt(ctx, m, rm, b, fm, frm, fb, s_right, 0.5 * abs_budget, depth + 1);
}

double integrate_segment(const ScalarFn1& f, double a, double b, const Tolerance& tol,
                         double abs_budget) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  SimpsonCtx ctx{f, tol.rel_tol, tol.max_iters > 0 ? tol.max_iters : 60};
  return simpson_adapt(ctx, a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb),
                       abs_budget, 0);
}

}  // namespace

double integrate_adaptive(const ScalarFn1& f, double a, double b,
                          const Tolerance& tol, std::span<const double> split_points) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a, tol, split_points);

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double s : split_points)
    if (s > a && s < b) cuts.push_back(s);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  double span_len = b - a;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double len = cuts[i + 1] - cuts[i];
    if (len <= 0) continue;
    total += integrate_segment(f, cuts[i], cuts[i + 1], tol,
                               tol.abs_tol * (len / span_len));
  }
  return total;
}

double bisect_monotone(const ScalarFn1& f, double target, double lo, double hi,
                       const Tolerance& tol) {
  if (!(lo < hi))
    fail(ErrorCode::InvalidArgument, "bisect_monotone: empty bracket");
  double flo = f(lo);
  double fhi = f(hi);
  bool increasing = fhi >= flo;
  double fmin = std::min(flo, fhi), fmax = std::max(flo, fhi);
  if (target < fmin || target > fmax) {
    // Accept targets matching an endpoint to within abs_tol.
    if (std::abs(target - flo) <= tol.abs_tol) return lo;
    if (std::abs(target - fhi) <= tol.abs_tol) return hi;
    fail(ErrorCode::TargetOutOfRange,
         "bisect_monotone: target " + std::to_string(target) +
             " outside [" + std::to_string(fmin) + ", " + std::to_string(fmax) + "]");
  }

  int cap = tol.max_iters > 0 ? std::max(tol.max_iters, 60) : 200;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < cap; ++i) {
    mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (std::abs(fm - target) <= tol.abs_tol) return mid;
    if ((fm < target) == increasing)
      lo = mid;
    else
      hi = mid;
    double width_tol = std::max({tol.abs_tol, tol.rel_tol * std::abs(mid),
                                 4.0 * std::numeric_limits<double>::epsilon() *
                                     (std::abs(lo) + std::abs(hi))});
    if (hi - lo <= width_tol) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  size_t n = size();
  if (x.size() != n || lower.size() != n || upper.size() != n)
    fail(ErrorCode::DimensionMismatch, "Tridiagonal::apply: size mismatch");
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> thomas_solve(const Tridiagonal& m, std::span<const double> rhs,
                                 double pivot_eps) {
  size_t n = m.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "thomas_solve: empty system");
  if (rhs.size() != n || m.lower.size() != n || m.upper.size() != n)
    fail(ErrorCode::DimensionMismatch, "thomas_solve: size mismatch");

  std::vector<double> c(n), d(n);
  double pivot = m.diag[0];
  if (std::abs(pivot) <= pivot_eps)
    fail(ErrorCode::SingularPivot, "thomas_solve: zero pivot in row 0");
  c[0] = m.upper[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i] * c[i - 1];
    if (std::abs(pivot) <= pivot_eps)
      fail(ErrorCode::SingularPivot,
           "thomas_solve: vanishing pivot in row " + std::to_string(i));
    c[i] = m.upper[i] / pivot;
    d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / pivot;
  }
  for (size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

namespace {

double euclid_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600,
                 E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640,
                 E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

}  // namespace

Trajectory rk45_integrate(const OdeRhs& rhs, std::span<const double> x0,
                          double t0, double t1, const Rk45Options& opts,
                          std::span<const double> sample_times) {
  size_t dim = x0.size();
  if (dim == 0) fail(ErrorCode::InvalidArgument, "rk45_integrate: empty state");
  if (t1 < t0) fail(ErrorCode::InvalidArgument, "rk45_integrate: reversed span");

  Trajectory traj;
  traj.dim = dim;
  auto record = [&](double t, std::span<const double> y) {
    traj.times.push_back(t);
    traj.states.insert(traj.states.end(), y.begin(), y.end());
    traj.norms.push_back(euclid_norm(y));
  };

  std::vector<double> y(x0.begin(), x0.end());
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
      k7(dim), ytmp(dim), ynew(dim), yerr(dim);

  size_t next_sample = 0;
  bool sampled = !sample_times.empty();
  if (sampled) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
      record(sample_times[next_sample], y);
      ++next_sample;
    }
  } else {
    record(t0, y);
  }

  const double initial_norm = euclid_norm(y);
  if (initial_norm > opts.blowup_threshold) {
    if (traj.times.empty() || traj.times.back() != t0) record(t0, y);
    traj.blow_up_time = t0;
    return traj;
  }
  if (t1 == t0) return traj;

  double span = t1 - t0;
  double h = opts.first_step > 0 ? opts.first_step : span * 1e-3;
  double max_step = opts.max_step > 0 ? opts.max_step : span;
  h = std::min(h, max_step);
  double t = t0;
  bool have_k1 = false;

  for (long step = 0; step < opts.max_steps; ++step) {
    if (t >= t1) break;
    double stop = sampled
                      ? (next_sample < sample_times.size() ? sample_times[next_sample] : t1)
                      : t1;
    bool clipped = h >= stop - t;
    double h_use = clipped ? stop - t : h;
    if (h_use <= 0) {  // degenerate duplicated sample time
      if (sampled && next_sample < sample_times.size()) {
        record(stop, y);
        ++next_sample;
        continue;
      }
      break;
    }

    if (!have_k1) {
      rhs(t, y, k1);
      have_k1 = true;
    }
    for (size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h_use * A21 * k1[i];
    rhs(t + h_use / 5.0, ytmp, k2);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h_use * (A31 * k1[i] + A32 * k2[i]);
    rhs(t + 3.0 * h_use / 10.0, ytmp, k3);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h_use * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    rhs(t + 4.0 * h_use / 5.0, ytmp, k4);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h_use * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    rhs(t + 8.0 * h_use / 9.0, ytmp, k5);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h_use * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                                A64 * k4[i] + A65 * k5[i]);
    rhs(t + h_use, ytmp, k6);
    for (size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h_use * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] +
                                B5 * k5[i] + B6 * k6[i]);
    rhs(t + h_use, ynew, k7);
    for (size_t i = 0; i < dim; ++i)
      yerr[i] = h_use * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                         E6 * k6[i] + E7 * k7[i]);

    double errnorm = 0.0;
    for (size_t i = 0; i < dim; ++i) {
      double scale = opts.tol.abs_tol +
                     opts.tol.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double e = yerr[i] / scale;
      errnorm += e * e;
    }
    errnorm = std::sqrt(errnorm / static_cast<double>(dim));

    if (!(errnorm <= 1.0)) {  // reject (also catches NaN)
      double factor = std::isfinite(errnorm)
                          ? std::max(0.2, 0.9 * std::pow(errnorm, -0.2))
                          : 0.2;
      h = h_use * std::min(factor, 0.9);
      if (h < opts.min_step) {
        // Superlinear escape outruns double resolution before the norm can
        // reach the threshold; a far-grown state moving faster than the
        // threshold is blow-up, not a controller failure.
        rhs(t, y, k1);
        have_k1 = true;
        if (euclid_norm(y) > 10.0 * (1.0 + initial_norm) &&
            euclid_norm(k1) > opts.blowup_threshold) {
          if (traj.times.empty() || traj.times.back() != t) record(t, y);
          traj.blow_up_time = t;
          return traj;
        }
        fail(ErrorCode::StepUnderflow,
             "rk45_integrate: step underflow at t=" + std::to_string(t));
      }
      continue;
    }

    double t_new = clipped ? stop : t + h_use;
    t = t_new;
    y.swap(ynew);
    k1.swap(k7);  // FSAL
    have_k1 = true;

    double factor = errnorm > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(errnorm, -0.2)))
                                : 5.0;
    h = std::min(h_use * factor, max_step);
    if (h < opts.min_step) h = opts.min_step;

    double nrm = euclid_norm(y);
    bool blown = nrm > opts.blowup_threshold || !std::isfinite(nrm);
    if (sampled) {
      if (clipped && next_sample < sample_times.size() && stop == sample_times[next_sample]) {
        record(t, y);
        ++next_sample;
      } else if (blown) {
        record(t, y);
      }
    } else {
      record(t, y);
    }
    if (blown) {
      traj.blow_up_time = t;
      return traj;
    }
  }
  if (t < t1)
    fail(ErrorCode::NonConvergence, "rk45_integrate: step budget exhausted");
  return traj;
}

std::vector<double> interp_state(const Trajectory& traj, double t) {
  if (traj.size() == 0) fail(ErrorCode::InvalidArgument, "interp_state: empty trajectory");
  const auto& ts = traj.times;
  if (t <= ts.front()) return {traj.state(0).begin(), traj.state(0).end()};
  if (t >= ts.back()) {
    auto last = traj.state(traj.size() - 1);
    return {last.begin(), last.end()};
  }
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  size_t hi = static_cast<size_t>(it - ts.begin());
  size_t lo = hi - 1;
  double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  auto a = traj.state(lo);
  auto b = traj.state(hi);
  std::vector<double> out(traj.dim);
  for (size_t i = 0; i < traj.dim; ++i) out[i] = a[i] + w * (b[i] - a[i]);
  return out;
}

}  // namespace liiss
