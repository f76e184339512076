#ifndef LIISS_CORE_PARABOLIC_PDE_HPP
#define LIISS_CORE_PARABOLIC_PDE_HPP

#include <functional>
#include <vector>

#include "core/numerics.hpp"
#include "core/report.hpp"
#include "core/trajectory.hpp"

namespace liiss {

// Values on a uniform 1-D grid over [xi_min, xi_max], endpoints included.
struct GridFunction {
  std::vector<double> values;
  double xi_min = 0;
  double xi_max = 1;

  size_t size() const { return values.size(); }
  double spacing() const {
    return (xi_max - xi_min) / static_cast<double>(values.size() - 1);
  }
  double node(size_t i) const { return xi_min + spacing() * static_cast<double>(i); }
};

GridFunction sample_grid(const std::function<double(double)>& f, double xi_min,
                         double xi_max, size_t n);

using SpaceTimeFn = std::function<double(double /*xi*/, double /*t*/)>;
using ReactionFn = std::function<double(double /*xi*/, double /*t*/, double /*x*/)>;

// Reaction-diffusion problem dx/dt - div(a dx/dxi) + c x = u + h(x) with
// zero-flux boundary conditions, discretized conservatively in space.
struct PdeConfig {
  SpaceTimeFn a, c, u;
  ReactionFn h;
  double M = 1.4142135623730951;  // growth constant: |h| <= M(|x|^m1 + |x|^m2)
  double m1 = 2, m2 = 2;
  double underline_a = 0;  // sampled lower bound for a (must be > 0)
  double underline_c = 0;  // sampled lower bound for c (0 allowed)
  GridFunction x0;
  double dt = 1e-3;
  double horizon = 20.0;
  double blowup_threshold = 1e6;
  std::vector<double> snapshot_times;
  size_t max_steps = 2'000'000;
};

// Benchmark coefficient set a = sqrt(exp(-t)+0.5*sin(pi*xi)+0.5),
// c = 1+pi*sqrt(sin(xi)+exp(-t)+1), h = sqrt(1+sin(xi))/(1+t)*x^2,
// u = amplitude*sin(10*t+xi), x0 = x0_scale*(xi-0.5)*(xi-2) sampled on
// [xi_min, xi_max] with n_xi nodes.
PdeConfig benchmark_pde_config(double amplitude, double x0_scale, double xi_min = 0.5,
                               double xi_max = 2.0, size_t n_xi = 201);

// Sampled structural checks: a >= underline_a > 0, c >= underline_c >= 0,
// |h| <= M(|x|^m1 + |x|^m2) on a sample grid, m1, m2 > 1, grid shape sane.
// Throws InvalidArgument on the first violation.
void validate_pde_config(const PdeConfig& cfg, size_t n = 20);

// Conservative flux stencil for div(a d/dxi) at time t with half-node
// coefficients; boundary rows mirror the first interior flux so every row
// sums to zero exactly.
Tridiagonal assemble_diffusion(const SpaceTimeFn& a, double t, const GridFunction& shape);

// One step of Crank-Nicolson diffusion (assembled at t + dt/2) with the
// reaction -c x + h + u treated explicitly at time t.  When blown is given
// it is set when any |value| of the result exceeds cfg.blowup_threshold.
GridFunction step_imex(const GridFunction& state, double t, double dt,
                       const PdeConfig& cfg, bool* blown = nullptr);

// Marches step_imex to the horizon or blow-up.  On a threshold crossing the
// step is halved and retried down to an absolute floor of dt/2^20 to
// separate overflow from genuine growth; a step still blown at the floor is
// declared a blow-up.  The step size recovers geometrically afterwards.
// Trajectory records per step: L2 norm, L3 norm (aux_norms), the running
// integral of ||u(.,s)||^2 (input_energy), and snapshots at the configured
// times.  states stays empty (dim 0); profiles live in snapshots.
Trajectory simulate(const PdeConfig& cfg);

// Trapezoid L^p norm on [xi_min, xi_max].
double discrete_norm(const GridFunction& f, double p);

// (||f||_2^2 + ||f'||_2^2)^(1/2) with central differences inside and
// one-sided differences at the endpoints.
double sobolev_norm(const GridFunction& f);

struct InterpolationResult {
  double lhs = 0;       // ||f||_p
  double rhs_base = 0;  // ||f||_q^(1-lambda) * ||f||_{1,2}^lambda
  double ratio = 0;     // lhs / rhs_base (0 when both vanish)
  double lambda = 0;
};

// Empirical constant of the embedding ||f||_p <= C ||f||_q^(1-lambda) *
// ||f||_{1,2}^lambda in one space dimension, lambda = (1/q-1/p)/(1/q+1/2).
InterpolationResult interpolation_check(const GridFunction& f, double p, double q);

// Energy dissipation along a simulated run with zero input:
// d/dt(||x||^2/2) <= -c_lower*||x||^2 + 2M*||x||_3^3 + slack per interior
// sample, c_lower = sampled minimum of c.  slack < 0 selects the per-sample
// default 10*dt*(1 + |rhs|).
Report pde_l2_dissipation_check(const PdeConfig& cfg, const Trajectory& traj,
                                double slack = -1.0);

}  // namespace liiss

#endif
