#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "core/envelope.hpp"
#include "core/feedback_ode.hpp"
#include "core/lyapunov.hpp"
#include "doctest.h"

using namespace liiss;

namespace {

// Degenerate instance with alpha1 = alpha2 = theta1 = id, theta2 = 0 and
// g1 = 1.  Then eta is logarithmic and every map is explicit:
//   beta1(s,t) = s e^-t, beta2 = beta1, beta(s,t) = 2 s e^-t,
//   sigma(s) = 2s, gamma(s) = 2s, sigma0 = id.
LiissCertificate identity_cert() {
  auto id = ComparisonFn::from_expr("s", FnClass::KInf, 1e3);
  auto zero =
      ComparisonFn::from_fn([](double) { return 0.0; }, FnClass::K, 1e3, "0", false);
  auto phi = ComparisonFn::from_expr("s", FnClass::K, 1e3);
  auto g1 = TimeSignal::from_expr("1", true);
  auto region = admissible_region(id, id, id, zero);
  return build_certificate(id, id, id, zero, phi, g1, region);
}

}  // namespace

TEST_CASE("identity certificate closed forms") {
  auto cert = identity_cert();
  CHECK(cert.beta1(0.3, 1.0) == doctest::Approx(0.3 * std::exp(-1.0)).epsilon(1e-8));
  CHECK(cert.beta2(0.3, 0.0) == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(cert.beta(0.3, 0.0) == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(cert.envelope_at(0.3, 0.0, 1.0) ==
        doctest::Approx(0.6 * std::exp(-1.0)).epsilon(1e-6));
  CHECK(cert.sigma(0.05) == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(cert.gamma(0.05) == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(cert.sigma0(0.7) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(cert.gamma0(0.05) == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("envelope adds the input contribution") {
  auto cert = identity_cert();
  const double base = cert.envelope_at(0.3, 0.0, 1.0);
  const double fed = cert.envelope_at(0.3, 0.01, 1.0);
  // beta(x0, t) + sigma(e) with identity maps: 0.6 e^-1 + 0.02
  CHECK(base == doctest::Approx(0.6 * std::exp(-1.0)).epsilon(1e-6));
  CHECK(fed == doctest::Approx(0.6 * std::exp(-1.0) + 0.02).epsilon(1e-6));
  CHECK(fed > base);
}

TEST_CASE("membership gate") {
  auto cert = identity_cert();
  const double R = cert.region().R;
  CHECK(cert.check_membership_BR(0.5 * R, {}));
  CHECK_FALSE(cert.check_membership_BR(1.5 * R, {}));
  // energy path: x0 + sigma0(e) must stay inside R for every entry
  std::vector<double> small = {1e-4};
  CHECK(cert.check_membership_BR(0.5 * R, small));
  std::vector<double> huge = {10.0 * R};
  CHECK_FALSE(cert.check_membership_BR(0.5 * R, huge));
}

TEST_CASE("beyond the certified region the envelope refuses") {
  auto cert = identity_cert();
  const double R = cert.region().R;
  // 2R sits exactly on the beta1 domain cap r' = 2 alpha2(R); go strictly past it
  CHECK_THROWS_AS(cert.envelope_at(3.0 * R, 0.0, 1.0), Error);
  try {
    cert.envelope_at(3.0 * R, 0.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRegion);
  }
}

// Like identity_cert but with alpha2 = 2s, so the raw-row bound
// beta2(s0, 0) = 2 s0 clears the initial norm by a factor of two instead of
// sitting on the equality knife edge.
static LiissCertificate margin_cert() {
  auto a1 = ComparisonFn::from_expr("s", FnClass::KInf, 1e3);
  auto a2 = ComparisonFn::from_expr("2*s", FnClass::KInf, 1e3);
  auto th1 = ComparisonFn::from_expr("s", FnClass::K, 1e3);
  auto zero =
      ComparisonFn::from_fn([](double) { return 0.0; }, FnClass::K, 1e3, "0", false);
  auto phi = ComparisonFn::from_expr("s", FnClass::K, 1e3);
  auto g1 = TimeSignal::from_expr("1", true);
  auto region = admissible_region(a1, a2, th1, zero);
  return build_certificate(a1, a2, th1, zero, phi, g1, region);
}

TEST_CASE("trajectory verification: conforming decay passes") {
  auto cert = margin_cert();
  Trajectory traj;
  for (int i = 0; i <= 50; ++i) {
    const double t = 0.1 * i;
    traj.times.push_back(t);
    // strictly inside beta2(s0,t) = 2 s0 e^(-t/2)
    traj.norms.push_back(0.2 * std::exp(-1.2 * t));
    traj.input_energy.push_back(0.0);
  }
  auto rep = cert.verify_trajectory(traj);
  CHECK(rep.passed());
  CHECK(rep.metrics.at("x0_norm") == doctest::Approx(0.2));
}

TEST_CASE("trajectory verification: runaway growth is flagged") {
  auto cert = margin_cert();
  Trajectory traj;
  for (int i = 0; i <= 50; ++i) {
    const double t = 0.1 * i;
    traj.times.push_back(t);
    traj.norms.push_back(0.2 * std::exp(0.5 * t));  // grows instead of decaying
    traj.input_energy.push_back(0.0);
  }
  auto rep = cert.verify_trajectory(traj);
  CHECK_FALSE(rep.passed());
  CHECK(rep.violation_count() > 0);
}

TEST_CASE("zero trajectory trivially conforms") {
  auto cert = identity_cert();
  Trajectory traj;
  for (int i = 0; i <= 10; ++i) {
    traj.times.push_back(0.1 * i);
    traj.norms.push_back(0.0);
  }
  auto rep = cert.verify_trajectory(traj);
  CHECK(rep.passed());
}

TEST_CASE("the feedback benchmark instance is infeasible for this recipe") {
  // theta2 composed with alpha1^-1 dominates theta1 composed with alpha2^-1
  // everywhere on (0, r'], so the recipe's integrated rate is not class K.
  // The constructor must say so rather than emit a vacuous certificate.
  auto [a1, a2] = ode_sandwich_fns(1.1);
  auto th = ode_theta_fns(1.1, 4, 4, default_eps(1.1));
  auto region = admissible_region(a1, a2, th.theta1, th.theta2);
  auto phi = th.phi;
  auto g1 = TimeSignal::from_expr("5/(1+t)", true);
  CHECK_THROWS_AS(build_certificate(a1, a2, th.theta1, th.theta2, phi, g1, region),
                  Error);
  try {
    build_certificate(a1, a2, th.theta1, th.theta2, phi, g1, region);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("a feasible scaled instance certifies and brackets its beta") {
  // theta1 = s (strong dissipation), theta2 = s^2/100 (weak antidissipation):
  // the composed rate s - s^2/100 stays class K through r' and the build succeeds.
  auto id = ComparisonFn::from_expr("s", FnClass::KInf, 1e3);
  auto th1 = ComparisonFn::from_expr("s", FnClass::K, 1e3);
  auto th2 = ComparisonFn::from_expr("s^2/100", FnClass::K, 1e3);
  auto phi = ComparisonFn::from_expr("s", FnClass::K, 1e3);
  auto g1 = TimeSignal::from_expr("1", true);
  auto region = admissible_region(id, id, th1, th2);
  auto cert = build_certificate(id, id, th1, th2, phi, g1, region);
  // beta1 decays from s and is bounded by the theta1-only rate from below 0
  const double b0 = cert.beta1(0.1, 0.0);
  const double b1 = cert.beta1(0.1, 1.0);
  CHECK(b0 == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(b1 < b0);
  CHECK(b1 > 0.1 * std::exp(-1.0) - 1e-9);  // slower than the undamped rate
}

TEST_CASE("region constants are positive and ordered") {
  auto cert = identity_cert();
  auto region = cert.region();
  CHECK(region.R_prime > 0.0);
  CHECK(region.r_prime > 0.0);
  CHECK(region.R > 0.0);
  CHECK(region.R < region.R_prime);
}
