#include "core/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "core/errors.hpp"

namespace liiss {
namespace {

// Inverses feed the eta quadrature, so they need relative accuracy well below
// the quadrature's rel_tol; a pure width stop (abs_tol = 0) gives that at
// every scale.
constexpr Tolerance kInverseTol{0.0, 1e-13, 200};

ComparisonFn composed_alpha(const ComparisonFn& alpha1, const ComparisonFn& alpha2,
                            const ComparisonFn& theta1, const ComparisonFn& theta2,
                            double r_prime) {
  auto fn = [alpha1, alpha2, theta1, theta2](double s) {
    if (s == 0.0) return 0.0;
    const double lhs = theta1(alpha2.inverse(s, kInverseTol));
    const double rhs = theta2(alpha1.inverse(s, kInverseTol));
    return lhs - rhs;
  };
  const std::string label =
      theta1.label() + "(" + alpha2.label() + "^-1) - " + theta2.label() + "(" +
      alpha1.label() + "^-1)";
  return ComparisonFn::from_fn(fn, FnClass::K, r_prime, label, true);
}

}  // namespace

LiissCertificate::LiissCertificate(ComparisonFn alpha1, ComparisonFn alpha2,
                                   ComparisonFn theta1, ComparisonFn theta2,
                                   ComparisonFn phi, TimeSignal g1,
                                   AdmissibleRegion region)
    : alpha1_(std::move(alpha1)),
      alpha2_(std::move(alpha2)),
      phi_(std::move(phi)),
      region_(region),
      beta1_([&] {
        if (!(region.R_prime > 0.0) || !(region.r_prime > 0.0) || !(region.R > 0.0))
          fail(ErrorCode::InvalidArgument,
               "LiissCertificate: admissible region constants must be positive");
        if (!alpha1_.valid() || !alpha2_.valid() || !theta1.valid() ||
            !theta2.valid() || !phi_.valid())
          fail(ErrorCode::InvalidArgument,
               "LiissCertificate: all comparison functions must be set");
        KLBoundOptions opt;
        opt.s_floor = std::min(1e-12, region.r_prime * 1e-9);
        return KLBound(composed_alpha(alpha1_, alpha2_, theta1, theta2, region.r_prime),
                       std::move(g1), opt);
      }()) {}

double LiissCertificate::beta1(double s, double t) const { return beta1_.evaluate(s, t); }

double LiissCertificate::beta2(double s, double t) const {
  if (s < 0.0) fail(ErrorCode::InvalidArgument, "beta2: negative state norm");
  return beta1_.evaluate(alpha2_(s), t);
}

double LiissCertificate::beta(double s, double t) const {
  return alpha1_.inverse(2.0 * beta2(s, t), kInverseTol);
}

double LiissCertificate::sigma(double s) const {
  if (s < 0.0) fail(ErrorCode::InvalidArgument, "sigma: negative argument");
  return alpha1_.inverse(2.0 * s, kInverseTol);
}

double LiissCertificate::gamma(double s) const {
  if (s < 0.0) fail(ErrorCode::InvalidArgument, "gamma: negative argument");
  return 2.0 * phi_(s);
}

double LiissCertificate::sigma0(double s) const {
  if (s < 0.0) fail(ErrorCode::InvalidArgument, "sigma0: negative argument");
  return alpha2_.inverse(s, kInverseTol);
}

double LiissCertificate::gamma0(double s) const { return gamma(s); }

double LiissCertificate::envelope_at(double x0_norm, double input_energy,
                                     double t) const {
  if (x0_norm < 0.0 || input_energy < 0.0 || t < 0.0)
    fail(ErrorCode::InvalidArgument, "envelope_at: arguments must be nonnegative");
  return beta(x0_norm, t) + sigma(input_energy);
}

bool LiissCertificate::check_membership_BR(double x0_norm,
                                           std::span<const double> energy_series) const {
  if (x0_norm < 0.0)
    fail(ErrorCode::InvalidArgument, "check_membership_BR: negative state norm");
  if (x0_norm > region_.R) return false;
  for (double e : energy_series) {
    if (e < 0.0)
      fail(ErrorCode::InvalidArgument, "check_membership_BR: negative energy entry");
    double s0;
    try {
      s0 = sigma0(e);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::TargetOutOfRange) return false;
      throw;
    }
    if (x0_norm + s0 > region_.R) return false;
  }
  return true;
}

Report LiissCertificate::verify_trajectory(const Trajectory& traj) const {
  if (traj.norms.empty())
    fail(ErrorCode::InvalidArgument, "verify_trajectory: trajectory has no norms");
  if (!traj.input_energy.empty() && traj.input_energy.size() != traj.norms.size())
    fail(ErrorCode::DimensionMismatch,
         "verify_trajectory: input_energy length does not match norms");
  const double norm0 = traj.norms.front();
  Report report;
  report.title = "LiISS envelope check";
  for (std::size_t i = 0; i < traj.norms.size(); ++i) {
    const double t = traj.times[i];
    const double n = traj.norms[i];
    const double e_phi = traj.input_energy.empty() ? 0.0 : traj.input_energy[i];
    const double rhs_raw = beta2(norm0, t) + 2.0 * e_phi;
    report.add(2 * i, t, alpha1_(n), rhs_raw);
    const double rhs_final = beta(norm0, t) + sigma(2.0 * e_phi);
    report.add(2 * i + 1, t, n, rhs_final);
  }
  report.metrics["R"] = region_.R;
  report.metrics["r_prime"] = region_.r_prime;
  report.metrics["R_prime"] = region_.R_prime;
  report.metrics["x0_norm"] = norm0;
  return report;
}

LiissCertificate build_certificate(ComparisonFn alpha1, ComparisonFn alpha2,
                                   ComparisonFn theta1, ComparisonFn theta2,
                                   ComparisonFn phi, TimeSignal g1,
                                   AdmissibleRegion region) {
  return LiissCertificate(std::move(alpha1), std::move(alpha2), std::move(theta1),
                          std::move(theta2), std::move(phi), std::move(g1), region);
}

}  // namespace liiss
