#ifndef LIISS_CORE_ENVELOPE_HPP
#define LIISS_CORE_ENVELOPE_HPP

#include <span>

#include "core/comparison.hpp"
#include "core/lyapunov.hpp"
#include "core/report.hpp"
#include "core/signals.hpp"
#include "core/trajectory.hpp"

namespace liiss {

// Stability envelope assembled from a Lyapunov certificate:
//   beta1  = KL bound built from alpha := theta1(alpha2^-1) - theta2(alpha1^-1)
//            (class K on [0, r_prime] by the admissible-region construction)
//            and the decay signal g1;
//   beta2(s,t) = beta1(alpha2(s), t);
//   beta(s,t)  = alpha1^-1(2*beta2(s,t));
//   sigma(s)   = alpha1^-1(2s);   gamma(s)  = 2*phi(s);
//   sigma0(s)  = alpha2^-1(s);    gamma0(s) = 2*phi(s).
// Construction fails with InvalidArgument when the composed alpha is not
// class K on (0, r_prime]; queries beyond the certified region fail with
// OutOfRegion rather than extrapolate.
class LiissCertificate {
 public:
  LiissCertificate(ComparisonFn alpha1, ComparisonFn alpha2, ComparisonFn theta1,
                   ComparisonFn theta2, ComparisonFn phi, TimeSignal g1,
                   AdmissibleRegion region);

  double beta1(double s, double t) const;
  double beta2(double s, double t) const;
  double beta(double s, double t) const;
  double sigma(double s) const;
  double gamma(double s) const;
  double sigma0(double s) const;
  double gamma0(double s) const;

  // beta(x0_norm, t) + sigma(input_energy); input_energy is the accumulated
  // integral of gamma(|u|) = 2*phi(|u|).
  double envelope_at(double x0_norm, double input_energy, double t) const;

  // x0_norm + sigma0(e) <= R for every entry of the gamma0-energy series.
  bool check_membership_BR(double x0_norm, std::span<const double> energy_series) const;

  // Per-sample check of the raw bound alpha1(|x|) <= beta2(|x0|, t) + 2*E_phi(t)
  // (even row indices) and the assembled bound |x| <= beta(|x0|, t) +
  // sigma(2*E_phi(t)) (odd row indices), where E_phi is the trajectory's
  // accumulated phi-energy.
  Report verify_trajectory(const Trajectory& traj) const;

  const AdmissibleRegion& region() const { return region_; }
  const KLBound& beta1_bound() const { return beta1_; }

 private:
  ComparisonFn alpha1_, alpha2_, phi_;
  AdmissibleRegion region_;
  KLBound beta1_;
};

LiissCertificate build_certificate(ComparisonFn alpha1, ComparisonFn alpha2,
                                   ComparisonFn theta1, ComparisonFn theta2,
                                   ComparisonFn phi, TimeSignal g1,
                                   AdmissibleRegion region);

}  // namespace liiss

#endif
