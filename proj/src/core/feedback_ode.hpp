#ifndef LIISS_CORE_FEEDBACK_ODE_HPP
#define LIISS_CORE_FEEDBACK_ODE_HPP

#include <array>
#include <span>

#include "core/lyapunov.hpp"
#include "core/report.hpp"
#include "core/signals.hpp"
#include "core/trajectory.hpp"

namespace liiss {

// Planar benchmark system
//   x1' = g(t)x1^m - h1(t)x2^3 + u1
//   x2' = g_tilde(t)x2^n - b(t)x1^2 x2 + u2
// under the feedback u1 = -g1(t)x1, u2 = h2(t)x1 - g2(t)x2 and additive
// disturbance d(t) on the second component.
struct OdeConfig {
  int m = 4;
  int n = 4;
  double M = 1.1;   // sup of h1, used by the sandwich and theta functions
  double eps = 0;   // 0 selects default_eps(M)
  TimeSignal g, g_tilde, b, h1, g1, g2, h2;
  TimeSignal h1_deriv;  // optional analytic h1'; finite difference otherwise
  double d_amplitude = 0;
  TimeSignal d;  // disturbance signal with amplitude already applied
  std::array<double, 2> x0{0.1, 0.25};
  double horizon = 20.0;
  size_t samples = 2001;
  Tolerance tol{1e-10, 1e-8, 0};
  double blowup_threshold = 1e6;
};

enum class OdeMode { open, closed };

// d(t) = amplitude * (0.6*exp(-t^(1/4)) + 1.2*cos(pi*t)).
TimeSignal make_disturbance(double amplitude);

// |d(t)| as a nonnegative signal for dissipation and envelope checks.
TimeSignal disturbance_norm(const OdeConfig& cfg);

// The benchmark coefficient set: m=n=4, g=g_tilde=1/(1+t),
// b=0.08+0.03*sin(3*pi*t), h1=1+0.1*sin(2*pi*t), g1=5/(1+t), g2=1+g1,
// h2=h1/(1+h1).
OdeConfig benchmark_ode_config(double amplitude = 0.0);

// Sampled structural checks: b > 0, 0 <= h1 <= M, h1' <= h1.
// Throws InvalidArgument on the first violation.
void validate_ode_config(const OdeConfig& cfg, size_t n = 1001);

std::array<double, 2> open_loop_rhs(double t, std::span<const double> x,
                                    const OdeConfig& cfg);
std::array<double, 2> control_law(double t, std::span<const double> x,
                                  const OdeConfig& cfg);
std::array<double, 2> closed_loop_rhs(double t, std::span<const double> x,
                                      const OdeConfig& cfg);

// Pointwise gain conditions on the grid: g1 >= max{g, g_tilde},
// g2 >= 1 + g1, h2 == h1/(1+h1) (to 1e-12).  metrics["G1_horizon"] records
// the integral of g1 up to the last grid point.
Report validate_gains(const OdeConfig& cfg, std::span<const double> grid);

// Adaptive integration over [0, horizon] on a uniform output grid with
// blow-up detection.  For the closed loop, input_energy accumulates
// the trapezoid rule of phi(|d|) with phi from ode_theta_fns.
Trajectory simulate(const OdeConfig& cfg, OdeMode mode);

// The dissipation inequality satisfied by the closed loop:
// dV <= -g1*theta1(|x|) + max{g,g_tilde}*theta2(|x|) + phi(|d|).
DissipationSpec ode_dissipation_spec(const OdeConfig& cfg);

// dissipation_check with the spec above, the configuration's Lyapunov
// function, and |d| as the input norm.
Report ode_dissipation_report(const OdeConfig& cfg, const Trajectory& traj,
                              double slack = -1.0);

}  // namespace liiss

#endif
