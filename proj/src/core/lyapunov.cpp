#include "core/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace liiss {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double euclid(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

DenseMatrix DenseMatrix::identity(size_t n) {
  DenseMatrix m = zero(n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::apply(std::span<const double> x) const {
  if (x.size() != n) fail(ErrorCode::DimensionMismatch, "DenseMatrix::apply: size mismatch");
  std::vector<double> y(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (size_t j = 0; j < n; ++j) v += at(i, j) * x[j];
    y[i] = v;
  }
  return y;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix m = zero(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.at(j, i) = at(i, j);
  return m;
}

Report sandwich_check(const LyapunovFn& lf, double t_hi, double x_radius, size_t dim,
                      size_t n_samples, uint64_t seed) {
  if (!lf.eval || !lf.lower.valid() || !lf.upper.valid())
    fail(ErrorCode::InvalidArgument, "sandwich_check: incomplete LyapunovFn");
  Report rep;
  rep.title = "lyapunov sandwich";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, t_hi);
  std::uniform_real_distribution<double> ux(-x_radius, x_radius);
  std::vector<double> x(dim);
  for (size_t k = 0; k < n_samples; ++k) {
    double t = ut(rng);
    for (auto& xi : x) xi = ux(rng);
    double nx = euclid(x);
    double v = lf.eval(t, x);
    double tol = 1e-12 * (1.0 + std::abs(v));
    rep.add(2 * k, t, lf.lower(nx), v, tol);
    rep.add(2 * k + 1, t, v, lf.upper(nx), tol);
  }
  return rep;
}

double eval_ode_lf(double t, std::span<const double> x, const TimeSignal& h1) {
  if (x.size() != 2) fail(ErrorCode::DimensionMismatch, "eval_ode_lf: state must be planar");
  double x2sq = x[1] * x[1];
  return 0.5 * x[0] * x[0] + 0.25 * (1.0 + h1(t)) * x2sq * x2sq;
}

LyapunovFn ode_lyapunov_fn(TimeSignal h1, double M) {
  auto [a1, a2] = ode_sandwich_fns(M);
  LyapunovFn lf;
  lf.eval = [h1](double t, std::span<const double> x) { return eval_ode_lf(t, x, h1); };
  lf.lower = std::move(a1);
  lf.upper = std::move(a2);
  return lf;
}

QuarticBoundResult min_quartic_bound(std::span<const double> x) {
  if (x.size() != 2)
    fail(ErrorCode::DimensionMismatch, "min_quartic_bound: state must be planar");
  QuarticBoundResult r;
  double x2sq = x[1] * x[1];
  r.lhs = x[0] * x[0] + x2sq * x2sq;
  double n2 = x[0] * x[0] + x[1] * x[1];
  r.rhs = 0.5 * std::min(n2, n2 * n2);
  r.holds = r.lhs >= r.rhs;
  return r;
}

std::pair<ComparisonFn, ComparisonFn> ode_sandwich_fns(double M) {
  if (!(M > 0)) fail(ErrorCode::InvalidArgument, "ode_sandwich_fns: need M > 0");
  double c2 = std::max(0.5, 0.25 * (1.0 + M));
  auto a1 = ComparisonFn::from_expr("0.125*min(s^2,s^4)", FnClass::KInf, 1e3);
  auto a2 =
      ComparisonFn::from_expr(fmt17(c2) + "*(s^2+s^4)", FnClass::KInf, 1e3);
  return {std::move(a1), std::move(a2)};
}

ThetaFns ode_theta_fns(double M, int m, int n, double eps) {
  if (!(M > 0)) fail(ErrorCode::InvalidArgument, "ode_theta_fns: need M > 0");
  if (m <= 3 || n <= 1)
    fail(ErrorCode::InvalidArgument, "ode_theta_fns: need m > 3 and n > 1");
  if (!(eps > 0.0) || !(eps < 1.0 / (M + 1.0)))
    fail(ErrorCode::EpsOutOfRange,
         "ode_theta_fns: eps must lie strictly inside (0, " +
             std::to_string(1.0 / (M + 1.0)) + ")");
  ThetaFns out;
  out.theta1 = ComparisonFn::from_expr("0.5*min(s^2,s^4)", FnClass::K, 1e3);
  out.theta2 = ComparisonFn::from_expr(fmt17(1.0 + M) + "*max(s^" +
                                           std::to_string(m + 1) + ",s^" +
                                           std::to_string(n + 3) + ")",
                                       FnClass::K, 1e3);
  out.phi = ComparisonFn::from_expr(fmt17((1.0 + M) / (eps * eps * eps)) + "*s^4",
                                    FnClass::K, 1e3);
  return out;
}

void DissipationSpec::validate(double t_hi, size_t n) const {
  if (!g1.valid() || !g2.valid() || !theta1.valid() || !theta2.valid() || !phi.valid())
    fail(ErrorCode::InvalidArgument, "DissipationSpec: incomplete");
  if (!(R_prime > 0)) fail(ErrorCode::InvalidArgument, "DissipationSpec: need R_prime > 0");
  if (n < 2) n = 2;
  for (size_t i = 0; i < n; ++i) {
    double t = t_hi * static_cast<double>(i) / static_cast<double>(n - 1);
    double lo = g2(t), hi = g1(t);
    if (lo > hi + 1e-12 * (1.0 + std::abs(hi)))
      fail(ErrorCode::InvalidArgument,
           "DissipationSpec: g2 > g1 at t=" + std::to_string(t));
  }
  for (size_t i = 0; i < n; ++i) {
    double s = R_prime * static_cast<double>(i) / static_cast<double>(n - 1);
    double lo = theta2(s), hi = theta1(s);
    if (lo > hi + 1e-12 * (1.0 + std::abs(hi)))
      fail(ErrorCode::InvalidArgument,
           "DissipationSpec: theta2 > theta1 at s=" + std::to_string(s));
  }
}

Report dissipation_check(const Trajectory& traj, const LyapunovFn& lf,
                         const DissipationSpec& spec, const TimeSignal& u_norm,
                         double slack) {
  if (!lf.eval) fail(ErrorCode::InvalidArgument, "dissipation_check: missing V");
  Report rep;
  rep.title = "dissipation check";
  if (traj.size() < 3) return rep;
  double v_prev = lf.eval(traj.times[0], traj.state(0));
  double v_here = lf.eval(traj.times[1], traj.state(1));
  for (size_t i = 1; i + 1 < traj.size(); ++i) {
    double v_next = lf.eval(traj.times[i + 1], traj.state(i + 1));
    double t = traj.times[i];
    double dt2 = traj.times[i + 1] - traj.times[i - 1];
    if (dt2 > 0) {
      double vdot = (v_next - v_prev) / dt2;
      double nrm = traj.norms[i];
      double rhs = -spec.g1(t) * spec.theta1(nrm) + spec.g2(t) * spec.theta2(nrm) +
                   spec.phi(u_norm(t));
      double sl = slack >= 0 ? slack : 10.0 * (0.5 * dt2) * (1.0 + std::abs(rhs));
      rep.add(i, t, vdot, rhs, sl);
    }
    v_prev = v_here;
    v_here = v_next;
  }
  return rep;
}

AdmissibleRegion admissible_region(const ComparisonFn& alpha1,
                                   const ComparisonFn& alpha2,
                                   const ComparisonFn& theta1,
                                   const ComparisonFn& theta2, double search_hi) {
  if (!(search_hi > 0))
    fail(ErrorCode::InvalidArgument, "admissible_region: need search_hi > 0");
  const double probe = 1e-9;
  auto diff = [&](double s) { return theta1(s) - theta2(s); };
  if (!(diff(probe) > 0))
    fail(ErrorCode::NoAdmissibleRegion,
         "admissible_region: theta2 >= theta1 already at s=1e-9");

  const int n = 513;
  double ratio = std::pow(search_hi / probe, 1.0 / (n - 1));
  double r_prime_at = search_hi;
  double prev_s = probe;
  bool crossed = false;
  for (int i = 1; i < n; ++i) {
    double s = probe * std::pow(ratio, i);
    if (i == n - 1) s = search_hi;
    if (!(diff(s) > 0)) {
      double a = prev_s, b = s;
      while (b - a > 1e-15 * b) {
        double mid = 0.5 * (a + b);
        if (diff(mid) > 0)
          a = mid;
        else
          b = mid;
      }
      r_prime_at = 0.5 * (a + b);
      crossed = true;
      break;
    }
    prev_s = s;
  }
  (void)crossed;

  AdmissibleRegion out;
  out.R_prime = r_prime_at;
  out.r_prime = std::min(alpha1(out.R_prime), alpha2(out.R_prime));
  out.R = alpha2.inverse(0.5 * out.r_prime);
  return out;
}

QuadraticLF::QuadraticLF(MatrixFn P, double eta1, double eta2, size_t dim,
                         MatrixFn P_dot, double t_hi, uint64_t seed)
    : p_(std::move(P)), pdot_(std::move(P_dot)), eta1_(eta1), eta2_(eta2), dim_(dim) {
  if (!p_) fail(ErrorCode::InvalidArgument, "QuadraticLF: missing P");
  if (!(eta1_ > 0) || !(eta2_ >= eta1_))
    fail(ErrorCode::InvalidArgument, "QuadraticLF: need 0 < eta1 <= eta2");
  if (dim_ == 0) fail(ErrorCode::InvalidArgument, "QuadraticLF: need dim >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  std::vector<double> x(dim_);
  for (int it = 0; it < 11; ++it) {
    double t = t_hi * it / 10.0;
    DenseMatrix m = p_(t);
    if (m.n != dim_ || m.a.size() != dim_ * dim_)
      fail(ErrorCode::DimensionMismatch, "QuadraticLF: P(t) has wrong shape");
    for (size_t i = 0; i < dim_; ++i)
      for (size_t j = i + 1; j < dim_; ++j)
        if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-10 * (1.0 + std::abs(m.at(i, j))))
          fail(ErrorCode::InvalidArgument, "QuadraticLF: P(t) not symmetric");
    for (int k = 0; k < 32; ++k) {
      for (auto& xi : x) xi = ux(rng);
      double n2 = 0.0;
      for (double xi : x) n2 += xi * xi;
      if (n2 == 0.0) continue;
      double v = 0.0;
      auto px = m.apply(x);
      for (size_t i = 0; i < dim_; ++i) v += px[i] * x[i];
      double tol = 1e-10 * (1.0 + std::abs(v));
      if (v < eta1_ * n2 - tol || v > eta2_ * n2 + tol)
        fail(ErrorCode::InvalidArgument,
             "QuadraticLF: coercivity window violated at t=" + std::to_string(t));
    }
  }
}

DenseMatrix QuadraticLF::P(double t) const { return p_(t); }

DenseMatrix QuadraticLF::P_dot(double t) const {
  if (pdot_) return pdot_(t);
  const double h = 1e-6;
  double lo = t - h;
  if (lo < 0) {
    DenseMatrix a = p_(t), b = p_(t + h);
    DenseMatrix out = DenseMatrix::zero(dim_);
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = (b.a[i] - a.a[i]) / h;
    return out;
  }
  DenseMatrix a = p_(lo), b = p_(t + h);
  DenseMatrix out = DenseMatrix::zero(dim_);
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = (b.a[i] - a.a[i]) / (2.0 * h);
  return out;
}

double QuadraticLF::value(double t, std::span<const double> x) const {
  if (x.size() != dim_)
    fail(ErrorCode::DimensionMismatch, "QuadraticLF::value: size mismatch");
  auto px = p_(t).apply(x);
  double v = 0.0;
  for (size_t i = 0; i < dim_; ++i) v += px[i] * x[i];
  return v;
}

Report quadratic_lf_condition_check(
    const QuadraticLF& qlf, const std::function<DenseMatrix(double)>& A,
    const std::function<std::vector<double>(double, std::span<const double>,
                                            std::span<const double>)>& F,
    const TimeSignal& a1, const TimeSignal& a2, double m1, double m2,
    const ComparisonFn& zeta, std::span<const ConditionSample> samples) {
  if (!(m1 > 2) || !(m2 > 2))
    fail(ErrorCode::InvalidArgument, "quadratic_lf_condition_check: need m1, m2 > 2");
  if (samples.empty())
    fail(ErrorCode::InvalidArgument, "quadratic_lf_condition_check: no samples");
  Report rep;
  rep.title = "quadratic dissipation condition";
  size_t dim = qlf.dim();
  for (size_t k = 0; k < samples.size(); ++k) {
    const auto& smp = samples[k];
    if (smp.x.size() != dim)
      fail(ErrorCode::DimensionMismatch,
           "quadratic_lf_condition_check: state size mismatch at sample " +
               std::to_string(k));
    DenseMatrix a_t = A(smp.t);
    if (a_t.n != dim)
      fail(ErrorCode::DimensionMismatch, "quadratic_lf_condition_check: A(t) shape");
    DenseMatrix p_t = qlf.P(smp.t);
    DenseMatrix pd_t = qlf.P_dot(smp.t);
    DenseMatrix at_p = a_t.transposed();
    // m = A^T P + P A + P'
    DenseMatrix m = DenseMatrix::zero(dim);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) {
        double v = pd_t.at(i, j);
        for (size_t l = 0; l < dim; ++l)
          v += at_p.at(i, l) * p_t.at(l, j) + p_t.at(i, l) * a_t.at(l, j);
        m.at(i, j) = v;
      }
    auto mx = m.apply(smp.x);
    double lhs = 0.0;
    for (size_t i = 0; i < dim; ++i) lhs += mx[i] * smp.x[i];
    auto fv = F(smp.t, smp.x, smp.u);
    if (fv.size() != dim)
      fail(ErrorCode::DimensionMismatch, "quadratic_lf_condition_check: F(t,x,u) shape");
    auto px = p_t.apply(smp.x);
    for (size_t i = 0; i < dim; ++i) lhs += 2.0 * fv[i] * px[i];

    double nx = euclid(smp.x);
    double nu = euclid(smp.u);
    double rhs = -a1(smp.t) * nx * nx +
                 a2(smp.t) * (std::pow(nx, m1) + std::pow(nx, m2)) + zeta(nu);
    double tol = 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs));
    rep.add(k, smp.t, lhs, rhs, tol);
  }
  return rep;
}

}  // namespace liiss
