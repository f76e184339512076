#include "core/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liiss {

double bar_alpha(const ComparisonFn& alpha, double s) {
  return std::min(s, alpha(s));
}

std::vector<double> bar_alpha_kinks(const ComparisonFn& alpha, double lo, double hi) {
  if (alpha.is_identity()) return {};
  lo = std::max(lo, hi * 1e-15);
  std::vector<double> kinks;
  auto diff = [&](double s) { return alpha(s) - s; };
  const int n = 257;
  double prev_s = lo;
  double prev_d = diff(lo);
  double ratio = std::pow(hi / lo, 1.0 / (n - 1));
  for (int i = 1; i < n; ++i) {
    double s = lo * std::pow(ratio, i);
    double d = diff(s);
    if ((prev_d < 0 && d > 0) || (prev_d > 0 && d < 0)) {
      double a = prev_s, b = s;
      for (int it = 0; it < 100 && (b - a) > 1e-15 * b; ++it) {
        double m = 0.5 * (a + b);
        double dm = diff(m);
        if ((dm < 0) == (prev_d < 0))
          a = m;
        else
          b = m;
      }
      kinks.push_back(0.5 * (a + b));
    }
    prev_s = s;
    prev_d = d;
  }
  return kinks;
}

EtaMap::EtaMap(std::function<double(double)> bar, double ref, double hi, double s_floor,
               Tolerance quad, std::vector<double> kinks)
    : bar_(std::move(bar)), ref_(ref), hi_(hi), s_floor_(s_floor), quad_(quad),
      kinks_(std::move(kinks)) {
  if (!(ref_ > 0) || !(hi_ >= ref_) || !(s_floor_ > 0))
    fail(ErrorCode::InvalidArgument, "EtaMap: need 0 < s_floor, 0 < ref <= hi");
  anchors_[ref_] = 0.0;
}

double EtaMap::eta(double s) const {
  if (!(s > 0)) fail(ErrorCode::InvalidArgument, "eta: need s > 0");
  if (s > hi_ * (1.0 + 1e-12))
    fail(ErrorCode::OutOfRegion,
         "eta: s=" + std::to_string(s) + " above region limit " + std::to_string(hi_));
  std::lock_guard<std::mutex> lock(mu_);
  return eta_locked(std::min(s, hi_));
}

double EtaMap::eta_locked(double s) const {
  auto it = anchors_.find(s);
  if (it != anchors_.end()) return it->second;
  auto above = anchors_.lower_bound(s);
  double base_s, base_v;
  if (above == anchors_.begin()) {
    base_s = above->first;
    base_v = above->second;
  } else if (above == anchors_.end()) {
    auto below = std::prev(above);
    base_s = below->first;
    base_v = below->second;
  } else {
    auto below = std::prev(above);
    bool use_below = (s - below->first) <= (above->first - s);
    base_s = use_below ? below->first : above->first;
    base_v = use_below ? below->second : above->second;
  }
  auto reciprocal = [this](double tau) { return 1.0 / bar_(tau); };
  // eta decreases: integrating from s up to base adds a positive increment.
  double v = base_v + integrate_adaptive(reciprocal, s, base_s, quad_, kinks_);
  anchors_[s] = v;
  return v;
}

EtaInvResult EtaMap::inverse(double y) const {
  std::lock_guard<std::mutex> lock(mu_);
  double eta_hi = eta_locked(hi_);
  double tol_match = 1e-11 * (1.0 + std::abs(y));
  if (y <= eta_hi) {
    if (y >= eta_hi - tol_match) return {hi_, false};
    fail(ErrorCode::TargetOutOfRange,
         "eta_inverse: target " + std::to_string(y) + " below eta(" +
             std::to_string(hi_) + ")=" + std::to_string(eta_hi));
  }

  double lo = s_floor_;  // eta(lo) treated as +infinity until evaluated
  double hi = hi_;
  for (int i = 0; i < 300; ++i) {
    if (hi - s_floor_ <= s_floor_ * 1e-6) return {s_floor_, true};
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-11 * mid) break;
    double em = eta_locked(mid);
    if (std::abs(em - y) <= 1e-11) return {mid, false};
    if (em > y)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - s_floor_ <= s_floor_ * 1e-6) return {s_floor_, true};
  return {0.5 * (lo + hi), false};
}

namespace {

std::shared_ptr<EtaMap> make_eta_map(const ComparisonFn& alpha, double ref, double hi,
                                     double s_floor, const Tolerance& quad) {
  auto fn = [alpha](double s) { return bar_alpha(alpha, s); };
  return std::make_shared<EtaMap>(fn, ref, hi, s_floor, quad,
                                  bar_alpha_kinks(alpha, s_floor, hi));
}

}  // namespace

double eta(const ComparisonFn& alpha, double s, const Tolerance& quad) {
  if (!(s > 0)) fail(ErrorCode::InvalidArgument, "eta: need s > 0");
  double hi = std::max({alpha.domain_hi(), s, 1.0});
  EtaMap map([alpha](double x) { return bar_alpha(alpha, x); }, 1.0, hi, 1e-12, quad,
             bar_alpha_kinks(alpha, 1e-12, hi));
  return map.eta(s);
}

EtaInvResult eta_inverse(const ComparisonFn& alpha, double y, const Tolerance& quad,
                         double s_floor) {
  double hi = std::max(alpha.domain_hi(), 1.0);
  EtaMap map([alpha](double x) { return bar_alpha(alpha, x); }, 1.0, hi, s_floor, quad,
             bar_alpha_kinks(alpha, s_floor, hi));
  return map.inverse(y);
}

KLBound::KLBound(ComparisonFn alpha, TimeSignal g, KLBoundOptions opt)
    : alpha_(std::move(alpha)), g_(std::move(g)), opt_(opt) {
  if (!alpha_.valid() || !g_.valid())
    fail(ErrorCode::InvalidArgument, "KLBound: alpha and g are required");
  if (alpha_.declared_class() == FnClass::L)
    fail(ErrorCode::InvalidArgument, "KLBound: alpha must be class K");
  if (!g_.declared_nonneg())
    fail(ErrorCode::InvalidArgument, "KLBound: g must be declared nonnegative");
  g_.check_nonneg(10.0, 101);
  hi_ = opt_.domain_hi > 0 ? opt_.domain_hi : alpha_.domain_hi();
  if (!(hi_ > 0)) fail(ErrorCode::InvalidArgument, "KLBound: empty domain");
  if (!(opt_.s_floor > 0) || opt_.s_floor >= hi_)
    fail(ErrorCode::InvalidArgument, "KLBound: need 0 < s_floor < domain_hi");
  closed_form_ = opt_.prefer_closed_form && alpha_.is_identity();
  double ref = std::min(1.0, hi_);
  eta_ = make_eta_map(alpha_, ref, hi_, opt_.s_floor, opt_.eta_quad);
  g_int_ = std::make_shared<CumulativeIntegral>([g = g_](double t) { return g(t); },
                                                opt_.eta_quad);
}

double KLBound::big_g(double t) const {
  if (t < 0) fail(ErrorCode::InvalidArgument, "big_g: need t >= 0");
  return g_int_->value(t);
}

double KLBound::evaluate(double s, double t, bool* clamped) const {
  if (clamped) *clamped = false;
  if (s < 0) fail(ErrorCode::InvalidArgument, "KLBound: need s >= 0");
  if (t < 0) fail(ErrorCode::InvalidArgument, "KLBound: need t >= 0");
  if (s == 0) return 0.0;
  if (s > hi_ * (1.0 + 1e-12))
    fail(ErrorCode::OutOfRegion, "KLBound: s=" + std::to_string(s) +
                                     " outside certified region (0, " +
                                     std::to_string(hi_) + "]");
  if (closed_form_) return s * std::exp(-big_g(t));
  EtaInvResult r = eta_->inverse(eta_->eta(s) + big_g(t));
  if (clamped) *clamped = r.clamped;
  return r.value;
}

double KLBound::evaluate_eta_path(double s, double t, bool* clamped) const {
  if (clamped) *clamped = false;
  if (s < 0) fail(ErrorCode::InvalidArgument, "KLBound: need s >= 0");
  if (t < 0) fail(ErrorCode::InvalidArgument, "KLBound: need t >= 0");
  if (s == 0) return 0.0;
  if (s > hi_ * (1.0 + 1e-12))
    fail(ErrorCode::OutOfRegion, "KLBound: s=" + std::to_string(s) +
                                     " outside certified region (0, " +
                                     std::to_string(hi_) + "]");
  EtaInvResult r = eta_->inverse(eta_->eta(s) + big_g(t));
  if (clamped) *clamped = r.clamped;
  return r.value;
}

double big_g(const TimeSignal& g, double t, const Tolerance& quad) {
  if (t < 0) fail(ErrorCode::InvalidArgument, "big_g: need t >= 0");
  return integrate_adaptive([&](double x) { return g(x); }, 0.0, t, quad);
}

double bound_with_input(const KLBound& beta, double y0, const TimeSignal& v, double t,
                        const Tolerance& quad) {
  double vint = integrate_adaptive([&](double x) { return v(x); }, 0.0, t, quad);
  return beta.evaluate(y0, t) + 2.0 * vint;
}

double bound_with_input(const KLBound& beta, double y0, const CumulativeIntegral& v_int,
                        double t) {
  return beta.evaluate(y0, t) + 2.0 * v_int.value(t);
}

double bound_sup_form(const KLBound& beta, double y0, const TimeSignal& v, double t,
                      size_t grid_n) {
  double vmax = 0.0;
  if (grid_n < 2) grid_n = 2;
  for (size_t i = 0; i < grid_n; ++i) {
    double ti = t * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    vmax = std::max(vmax, v(ti));
  }
  return std::max(beta.evaluate(y0, t), vmax);
}

bool locality_admissible(double y0, const TimeSignal& v, double horizon, double r_prime,
                         const Tolerance& quad) {
  if (y0 < 0 || horizon < 0)
    fail(ErrorCode::InvalidArgument, "locality_admissible: need y0, horizon >= 0");
  double vint = integrate_adaptive([&](double x) { return v(x); }, 0.0, horizon, quad);
  return y0 + 2.0 * vint < r_prime;
}

Trajectory oracle_solve(const ComparisonFn& alpha3, const ComparisonFn& alpha4,
                        const TimeSignal& g1, const TimeSignal& g2, const TimeSignal& v,
                        double y0, double horizon, size_t samples,
                        const Rk45Options& opts) {
  if (y0 < 0) fail(ErrorCode::InvalidArgument, "oracle_solve: need y0 >= 0");
  bool has_a4 = alpha4.valid();
  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    double yy = std::max(y[0], 0.0);
    double d = -g1(t) * alpha3(yy) + v(t);
    if (has_a4) d += g2(t) * alpha4(yy);
    dy[0] = d;
  };
  if (samples < 2) samples = 2;
  std::vector<double> grid(samples);
  for (size_t i = 0; i < samples; ++i)
    grid[i] = horizon * static_cast<double>(i) / static_cast<double>(samples - 1);
  double init[1] = {y0};
  Trajectory traj = rk45_integrate(rhs, init, 0.0, horizon, opts, grid);
  for (size_t i = 0; i < traj.size(); ++i) {
    if (traj.states[i] < 0.0) traj.states[i] = 0.0;
    traj.norms[i] = traj.states[i];
  }
  return traj;
}

Report verify_kl(const std::function<double(double, double)>& beta,
                 std::span<const double> s_grid, std::span<const double> t_grid,
                 double t_infinity) {
  Report rep;
  rep.title = "kl-shape check";
  size_t idx = 0;
  // Strict growth in s at every t.
  for (double t : t_grid) {
    for (size_t i = 0; i + 1 < s_grid.size(); ++i) {
      double b0 = beta(s_grid[i], t);
      double b1 = beta(s_grid[i + 1], t);
      ReportRow row;
      row.index = idx++;
      row.time = t;
      row.lhs = b0;
      row.rhs = b1;
      row.margin = b1 - b0;
      row.violated = !(b1 > b0);
      rep.rows.push_back(row);
    }
  }
  // Nonincreasing in t at every s (equality allowed).
  for (double s : s_grid) {
    for (size_t j = 0; j + 1 < t_grid.size(); ++j) {
      double b0 = beta(s, t_grid[j]);
      double b1 = beta(s, t_grid[j + 1]);
      ReportRow row;
      row.index = idx++;
      row.time = t_grid[j + 1];
      row.lhs = b1;
      row.rhs = b0;
      row.margin = b0 - b1;
      row.violated = b1 > b0 + 1e-12 * (1.0 + std::abs(b0));
      rep.rows.push_back(row);
    }
  }
  // Zero input maps to zero.
  for (double t : t_grid) {
    double b = beta(0.0, t);
    ReportRow row;
    row.index = idx++;
    row.time = t;
    row.lhs = std::abs(b);
    row.rhs = 0.0;
    row.margin = -std::abs(b);
    row.violated = b != 0.0;
    rep.rows.push_back(row);
  }
  if (!s_grid.empty())
    rep.metrics["residual"] = beta(s_grid.back(), t_infinity);
  return rep;
}

Report verify_kl(const KLBound& beta, std::span<const double> s_grid,
                 std::span<const double> t_grid, double t_infinity) {
  return verify_kl(
      [&](double s, double t) { return beta.evaluate(s, t); }, s_grid, t_grid,
      t_infinity);
}

}  // namespace liiss
