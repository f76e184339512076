#ifndef LIISS_CORE_LYAPUNOV_HPP
#define LIISS_CORE_LYAPUNOV_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "core/report.hpp"
#include "core/signals.hpp"
#include "core/trajectory.hpp"

namespace liiss {

// Small dense square matrix, row-major.
struct DenseMatrix {
  size_t n = 0;
  std::vector<double> a;  // n*n entries

  static DenseMatrix zero(size_t n) { return {n, std::vector<double>(n * n, 0.0)}; }
  static DenseMatrix identity(size_t n);

  double& at(size_t i, size_t j) { return a[i * n + j]; }
  double at(size_t i, size_t j) const { return a[i * n + j]; }

  std::vector<double> apply(std::span<const double> x) const;
  DenseMatrix transposed() const;
};

// Energy functional V(t,x) with its sandwich alpha1(|x|) <= V <= alpha2(|x|).
struct LyapunovFn {
  std::function<double(double, std::span<const double>)> eval;
  ComparisonFn lower;
  ComparisonFn upper;
};

// Seeded random sandwich check: both inequalities at n_samples points with
// t uniform in [0, t_hi] and x uniform in the cube [-x_radius, x_radius]^dim.
Report sandwich_check(const LyapunovFn& lf, double t_hi, double x_radius, size_t dim,
                      size_t n_samples, uint64_t seed);

// V(t,x) = x1^2/2 + (1+h1(t))*x2^4/4 for the planar feedback benchmark.
double eval_ode_lf(double t, std::span<const double> x, const TimeSignal& h1);

// The benchmark V packaged with its sandwich (M = sup h1).
LyapunovFn ode_lyapunov_fn(TimeSignal h1, double M);

struct QuarticBoundResult {
  double lhs = 0;   // x1^2 + x2^4
  double rhs = 0;   // min{|x|^2, |x|^4} / 2
  bool holds = false;
};

QuarticBoundResult min_quartic_bound(std::span<const double> x);

// alpha1(s) = min{s^2, s^4}/8, alpha2(s) = max{1/2, (1+M)/4}*(s^2 + s^4).
std::pair<ComparisonFn, ComparisonFn> ode_sandwich_fns(double M);

struct ThetaFns {
  ComparisonFn theta1;  // min{s^2, s^4}/2
  ComparisonFn theta2;  // (1+M)*max{s^(m+1), s^(n+3)}
  ComparisonFn phi;     // (1+M)*eps^-3*s^4
};

// Requires eps strictly inside (0, 1/(M+1)); errors with EpsOutOfRange.
ThetaFns ode_theta_fns(double M, int m, int n, double eps);

inline double default_eps(double M) { return 0.5 / (M + 1.0); }

// Dissipation data: dV/dt <= -g1(t)*theta1(|x|) + g2(t)*theta2(|x|) + phi(|u|),
// with theta2 <= theta1 required only on [0, R_prime].
struct DissipationSpec {
  TimeSignal g1, g2;
  ComparisonFn theta1, theta2, phi;
  double R_prime = 0;

  // Sampled structural checks: g2 <= g1 on [0, t_hi], theta2 <= theta1 on
  // [0, R_prime].  Throws InvalidArgument on the first violation.
  void validate(double t_hi, size_t n = 1001) const;
};

// Central-difference dV/dt along the trajectory vs the dissipation RHS at
// each interior sample.  slack < 0 selects the per-sample default
// 10*dt*(1 + |rhs|) absorbing the finite-difference error.
Report dissipation_check(const Trajectory& traj, const LyapunovFn& lf,
                         const DissipationSpec& spec, const TimeSignal& u_norm,
                         double slack = -1.0);

struct AdmissibleRegion {
  double R_prime = 0;  // largest s with theta2 <= theta1 on [0, s]
  double r_prime = 0;  // min{alpha1(R_prime), alpha2(R_prime)}
  double R = 0;        // alpha2^{-1}(r_prime / 2)
};

// Finds R_prime by bisection on the first sign change of theta1 - theta2
// over (1e-9, search_hi], then derives r_prime and R.  Errors with
// NoAdmissibleRegion when theta2 > theta1 already at the smallest probe.
AdmissibleRegion admissible_region(const ComparisonFn& alpha1,
                                   const ComparisonFn& alpha2,
                                   const ComparisonFn& theta1,
                                   const ComparisonFn& theta2,
                                   double search_hi = 10.0);

// Quadratic form V(t,x) = <P(t)x, x> with coercivity window
// eta1*|x|^2 <= V <= eta2*|x|^2, checked on seeded samples at construction.
class QuadraticLF {
 public:
  using MatrixFn = std::function<DenseMatrix(double)>;

  QuadraticLF(MatrixFn P, double eta1, double eta2, size_t dim, MatrixFn P_dot = {},
              double t_hi = 10.0, uint64_t seed = 0x5EED);

  DenseMatrix P(double t) const;
  DenseMatrix P_dot(double t) const;  // analytic when supplied, else central FD
  double value(double t, std::span<const double> x) const;

  double eta1() const { return eta1_; }
  double eta2() const { return eta2_; }
  size_t dim() const { return dim_; }

 private:
  MatrixFn p_, pdot_;
  double eta1_ = 0, eta2_ = 0;
  size_t dim_ = 0;
};

struct ConditionSample {
  double t = 0;
  std::vector<double> x;
  std::vector<double> u;
};

// Sampled check of the operator inequality
//   <(A^T P + P A + P')x, x> + 2<F(t,x,u), P x>
//     <= -a1(t)|x|^2 + a2(t)(|x|^m1 + |x|^m2) + zeta(|u|).
Report quadratic_lf_condition_check(
    const QuadraticLF& qlf, const std::function<DenseMatrix(double)>& A,
    const std::function<std::vector<double>(double, std::span<const double>,
                                            std::span<const double>)>& F,
    const TimeSignal& a1, const TimeSignal& a2, double m1, double m2,
    const ComparisonFn& zeta, std::span<const ConditionSample> samples);

}  // namespace liiss

#endif
