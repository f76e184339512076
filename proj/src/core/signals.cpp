#include "core/signals.hpp"

#include <algorithm>
#include <cmath>

namespace liiss {

namespace {
const std::vector<std::string> kVarT = {"t"};
const std::vector<std::string> kVarS = {"s"};
}  // namespace

TimeSignal TimeSignal::from_expr(Expr e, bool declared_nonneg) {
  if (e.arity() != 1)
    fail(ErrorCode::InvalidArgument, "time signal must have a single variable");
  TimeSignal s;
  s.label_ = e.source();
  s.fn_ = [e = std::move(e)](double t) { return e.eval1(t); };
  s.nonneg_ = declared_nonneg;
  return s;
}

TimeSignal TimeSignal::from_expr(std::string_view src, bool declared_nonneg,
                                 const std::map<std::string, double>& constants) {
  return from_expr(Expr::parse(src, kVarT, constants), declared_nonneg);
}

TimeSignal TimeSignal::from_samples(std::vector<double> t, std::vector<double> v,
                                    bool declared_nonneg) {
  if (t.size() != v.size() || t.size() < 2)
    fail(ErrorCode::InvalidArgument, "sampled signal needs >= 2 (t, value) pairs");
  if (!std::is_sorted(t.begin(), t.end()))
    fail(ErrorCode::InvalidArgument, "sampled signal times must be ascending");
  TimeSignal s;
  s.label_ = "table[" + std::to_string(t.size()) + "]";
  s.nonneg_ = declared_nonneg;
  s.fn_ = [t = std::move(t), v = std::move(v)](double x) {
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    auto it = std::upper_bound(t.begin(), t.end(), x);
    size_t hi = static_cast<size_t>(it - t.begin());
    size_t lo = hi - 1;
    double w = (x - t[lo]) / (t[hi] - t[lo]);
    return v[lo] + w * (v[hi] - v[lo]);
  };
  return s;
}

TimeSignal TimeSignal::from_fn(std::function<double(double)> f, bool declared_nonneg,
                               std::string label) {
  TimeSignal s;
  s.fn_ = std::move(f);
  s.nonneg_ = declared_nonneg;
  s.label_ = std::move(label);
  return s;
}

void TimeSignal::check_nonneg(double t_hi, size_t n) const {
  if (!nonneg_) return;
  for (size_t i = 0; i < n; ++i) {
    double t = t_hi * static_cast<double>(i) / static_cast<double>(n - 1);
    double v = fn_(t);
    if (v < -1e-12)
      fail(ErrorCode::InvalidArgument,
           "signal '" + label_ + "' declared nonnegative but " +
               std::to_string(v) + " at t=" + std::to_string(t));
  }
}

ComparisonFn ComparisonFn::from_expr(Expr e, FnClass declared, double domain_hi,
                                     bool run_validation) {
  if (e.arity() != 1)
    fail(ErrorCode::InvalidArgument, "comparison function must have a single variable");
  ComparisonFn f;
  f.label_ = e.source();
  f.identity_ = e.is_identity();
  f.fn_ = [e = std::move(e)](double s) { return e.eval1(s); };
  f.cls_ = declared;
  f.hi_ = domain_hi;
  if (run_validation) f.validate();
  return f;
}

ComparisonFn ComparisonFn::from_expr(std::string_view src, FnClass declared,
                                     double domain_hi, bool run_validation,
                                     const std::map<std::string, double>& constants) {
  return from_expr(Expr::parse(src, kVarS, constants), declared, domain_hi,
                   run_validation);
}

ComparisonFn ComparisonFn::from_fn(std::function<double(double)> f, FnClass declared,
                                   double domain_hi, std::string label,
                                   bool run_validation) {
  ComparisonFn c;
  c.fn_ = std::move(f);
  c.cls_ = declared;
  c.hi_ = domain_hi;
  c.label_ = std::move(label);
  if (run_validation) c.validate();
  return c;
}

void ComparisonFn::validate(size_t n) const {
  if (!(hi_ > 0))
    fail(ErrorCode::InvalidArgument, "comparison function needs domain_hi > 0");
  if (cls_ == FnClass::K || cls_ == FnClass::KInf) {
    double f0 = fn_(0.0);
    if (std::abs(f0) > 1e-12)
      fail(ErrorCode::InvalidArgument,
           "'" + label_ + "' declared class K but f(0)=" + std::to_string(f0));
    double prev = f0;
    for (size_t i = 1; i < n; ++i) {
      double s = hi_ * static_cast<double>(i) / static_cast<double>(n - 1);
      double v = fn_(s);
      if (!(v > prev - 1e-14 * (1.0 + std::abs(v))) || !std::isfinite(v))
        fail(ErrorCode::InvalidArgument,
             "'" + label_ + "' declared class K but not increasing near s=" +
                 std::to_string(s) + " (f=" + std::to_string(v) + ")");
      if (v <= 0.0 && s > 0.0)
        fail(ErrorCode::InvalidArgument,
             "'" + label_ + "' declared class K but f(" + std::to_string(s) +
                 ")=" + std::to_string(v));
      prev = v;
    }
  } else {  // class L
    double prev = fn_(0.0);
    for (size_t i = 1; i < n; ++i) {
      double s = hi_ * static_cast<double>(i) / static_cast<double>(n - 1);
      double v = fn_(s);
      if (!(v < prev + 1e-14 * (1.0 + std::abs(v))) || !std::isfinite(v))
        fail(ErrorCode::InvalidArgument,
             "'" + label_ + "' declared class L but not decreasing near s=" +
                 std::to_string(s));
      if (v < 0.0)
        fail(ErrorCode::InvalidArgument,
             "'" + label_ + "' declared class L but negative at s=" + std::to_string(s));
      prev = v;
    }
  }
}

double ComparisonFn::inverse(double y, const Tolerance& tol) const {
  return bisect_monotone([this](double s) { return fn_(s); }, y, 0.0, hi_, tol);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, Tolerance quad)
    : f_(std::move(f)), quad_(quad) {
  anchors_[0.0] = 0.0;
}

double CumulativeIntegral::value(double t) const {
  if (!f_) fail(ErrorCode::InvalidArgument, "CumulativeIntegral: empty integrand");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = anchors_.find(t);
  if (it != anchors_.end()) return it->second;
  // Chain from the nearest resolved anchor to keep increments short.
  auto above = anchors_.lower_bound(t);
  double base_t, base_v;
  if (above == anchors_.begin()) {
    base_t = above->first;
    base_v = above->second;
  } else if (above == anchors_.end()) {
    auto below = std::prev(above);
    base_t = below->first;
    base_v = below->second;
  } else {
    auto below = std::prev(above);
    bool use_below = (t - below->first) <= (above->first - t);
    base_t = use_below ? below->first : above->first;
    base_v = use_below ? below->second : above->second;
  }
  double v = base_v + integrate_adaptive(f_, base_t, t, quad_);
  anchors_[t] = v;
  return v;
}

}  // namespace liiss
