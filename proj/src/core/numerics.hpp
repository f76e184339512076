#ifndef LIISS_CORE_NUMERICS_HPP
#define LIISS_CORE_NUMERICS_HPP

#include <functional>
#include <span>
#include <vector>

#include "core/errors.hpp"
#include "core/trajectory.hpp"

namespace liiss {

// Shared accuracy knobs.  `max_iters` is the recursion depth cap for the
// adaptive quadrature and the iteration cap for bisection.
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iters = 60;
};

using ScalarFn1 = std::function<double(double)>;

// Adaptive Simpson quadrature of f over [a, b].  The estimate Q satisfies
// |Q - I| <~ abs_tol + rel_tol*|Q| for integrands of bounded variation.
// `split_points` forces subdivision boundaries (used for integrand kinks);
// points outside (a, b) are ignored.  Throws NonConvergence when the depth
// cap is reached before the local error criterion is met.
double integrate_adaptive(const ScalarFn1& f, double a, double b,
                          const Tolerance& tol = {},
                          std::span<const double> split_points = {});

// Bisection for strictly monotone f (either direction).  Terminates when
// |f(mid) - target| <= abs_tol or the bracket width drops below
// max(abs_tol, rel_tol*|mid|).  Throws TargetOutOfRange when the target is
// not enclosed by [f(lo), f(hi)].
double bisect_monotone(const ScalarFn1& f, double target, double lo, double hi,
                       const Tolerance& tol = {});

// Tridiagonal matrix with n-sized bands; lower[0] and upper[n-1] are unused
// and must be zero.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  size_t size() const { return diag.size(); }
  std::vector<double> apply(std::span<const double> x) const;
};

// Thomas algorithm.  Throws SingularPivot when an eliminated pivot magnitude
// falls below pivot_eps.  Intended for diagonally dominant systems.
std::vector<double> thomas_solve(const Tridiagonal& m, std::span<const double> rhs,
                                 double pivot_eps = 1e-14);

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct Rk45Options {
  Tolerance tol{1e-10, 1e-8, 0};
  double blowup_threshold = 1e6;
  double min_step = 1e-12;
  double max_step = 0;   // 0: unrestricted
  double first_step = 0; // 0: heuristic
  long max_steps = 5'000'000;
};

// Embedded Dormand-Prince 4(5) integrator.  When `sample_times` is provided
// (ascending, within [t0, t1]) the integrator lands on each sample exactly
// and records only there; otherwise every accepted step is recorded.
// Integration halts the first time the Euclidean state norm exceeds
// blowup_threshold; the crossing step is recorded and blow_up_time set.
// Throws StepUnderflow when the controller drives the step below min_step.
Trajectory rk45_integrate(const OdeRhs& rhs, std::span<const double> x0,
                          double t0, double t1, const Rk45Options& opts = {},
                          std::span<const double> sample_times = {});

// Linear interpolation of recorded states at time t (clamped to the record).
std::vector<double> interp_state(const Trajectory& traj, double t);

}  // namespace liiss

#endif
