#ifndef LIISS_CORE_COMPARISON_HPP
#define LIISS_CORE_COMPARISON_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "core/numerics.hpp"
#include "core/report.hpp"
#include "core/signals.hpp"
#include "core/trajectory.hpp"

namespace liiss {

// bar(s) = min{s, alpha(s)}: the decay rate actually integrated against.
double bar_alpha(const ComparisonFn& alpha, double s);

// Sign changes of alpha(s) - s on (lo, hi]: the kink locations of bar_alpha,
// used as forced quadrature subdivision points.
std::vector<double> bar_alpha_kinks(const ComparisonFn& alpha, double lo, double hi);

// eta(s) = integral from s to 1 of 1/bar_alpha (signed; negative for s > 1).
// Strictly decreasing and unbounded as s -> 0+.
double eta(const ComparisonFn& alpha, double s, const Tolerance& quad = {1e-12, 1e-12, 60});

struct EtaInvResult {
  double value = 0;
  bool clamped = false;  // true when the exact preimage lies below the floor
};

EtaInvResult eta_inverse(const ComparisonFn& alpha, double y,
                         const Tolerance& quad = {1e-12, 1e-12, 60},
                         double s_floor = 1e-12);

// Strictly decreasing map s -> integral_s^ref 1/bar_alpha with anchored
// incremental quadrature: each new point integrates only from the nearest
// previously resolved point, so repeated nearby queries (bisection,
// monotone sweeps) stay cheap and accumulate little quadrature error.
// Internally synchronized.
class EtaMap {
 public:
  EtaMap() = default;
  EtaMap(std::function<double(double)> bar, double ref, double hi, double s_floor,
         Tolerance quad, std::vector<double> kinks);

  double ref() const { return ref_; }
  double hi() const { return hi_; }
  double floor() const { return s_floor_; }

  double eta(double s) const;
  EtaInvResult inverse(double y) const;

 private:
  double eta_locked(double s) const;

  std::function<double(double)> bar_;
  double ref_ = 1.0, hi_ = 0.0, s_floor_ = 1e-12;
  Tolerance quad_{1e-12, 1e-12, 60};
  std::vector<double> kinks_;
  mutable std::map<double, double> anchors_;
  mutable std::mutex mu_;
};

struct KLBoundOptions {
  Tolerance eta_quad{1e-12, 1e-12, 60};
  double s_floor = 1e-12;
  double domain_hi = 0;  // 0: taken from alpha
  bool prefer_closed_form = true;
};

// Class-KL decay bound beta(s, t) = eta^{-1}(eta(s) + G(t)) with
// G(t) = integral of g over [0, t].  When alpha is the identity expression
// the closed form s*exp(-G(t)) is used instead of the eta path.
// Queries above domain_hi error with OutOfRegion; inverse images below
// s_floor are clamped to s_floor (conservative: never shrinks the bound)
// and flagged.
class KLBound {
 public:
  KLBound(ComparisonFn alpha, TimeSignal g, KLBoundOptions opt = {});

  double evaluate(double s, double t, bool* clamped = nullptr) const;
  double evaluate_eta_path(double s, double t, bool* clamped = nullptr) const;

  double eta(double s) const { return eta_->eta(s); }
  EtaInvResult eta_inverse(double y) const { return eta_->inverse(y); }
  double big_g(double t) const;

  bool has_closed_form() const { return closed_form_; }
  double domain_hi() const { return hi_; }
  double s_floor() const { return opt_.s_floor; }
  const ComparisonFn& alpha() const { return alpha_; }
  const TimeSignal& g() const { return g_; }

 private:
  ComparisonFn alpha_;
  TimeSignal g_;
  KLBoundOptions opt_;
  double hi_ = 0;
  bool closed_form_ = false;
  std::shared_ptr<EtaMap> eta_;
  std::shared_ptr<CumulativeIntegral> g_int_;
};

inline KLBound kl_beta(ComparisonFn alpha, TimeSignal g, KLBoundOptions opt = {}) {
  return KLBound(std::move(alpha), std::move(g), opt);
}

double big_g(const TimeSignal& g, double t, const Tolerance& quad = {});

// beta(y0, t) + 2*integral_0^t v: trajectory bound under integrable input.
double bound_with_input(const KLBound& beta, double y0, const TimeSignal& v, double t,
                        const Tolerance& quad = {});
double bound_with_input(const KLBound& beta, double y0, const CumulativeIntegral& v_int,
                        double t);

// max{beta(y0, t), running max of v over [0, t]} (sup-form bound); the
// running max is taken on a uniform grid of grid_n points.
double bound_sup_form(const KLBound& beta, double y0, const TimeSignal& v, double t,
                      size_t grid_n = 2001);

// Locality gate y0 + 2*integral_0^T v < r_prime.
bool locality_admissible(double y0, const TimeSignal& v, double horizon, double r_prime,
                         const Tolerance& quad = {});

// Reference solution of y' = -g1(t)*alpha3(y) + g2(t)*alpha4(y) + v(t),
// y(0) = y0, clamped at zero from below, sampled uniformly on [0, horizon].
// An invalid (default-constructed) alpha4 means alpha4 = 0.
Trajectory oracle_solve(const ComparisonFn& alpha3, const ComparisonFn& alpha4,
                        const TimeSignal& g1, const TimeSignal& g2, const TimeSignal& v,
                        double y0, double horizon, size_t samples = 2001,
                        const Rk45Options& opts = {});

// Grid check of KL-shape properties: strictly increasing in s, nonincreasing
// in t (equality allowed), beta(0, t) = 0, plus the decay residual
// beta(s_max, t_infinity) recorded in metrics["residual"].
Report verify_kl(const std::function<double(double, double)>& beta,
                 std::span<const double> s_grid, std::span<const double> t_grid,
                 double t_infinity);
Report verify_kl(const KLBound& beta, std::span<const double> s_grid,
                 std::span<const double> t_grid, double t_infinity);

}  // namespace liiss

#endif
