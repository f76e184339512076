#include "liiss.h"

#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/comparison.hpp"
#include "core/envelope.hpp"
#include "core/errors.hpp"
#include "core/feedback_ode.hpp"
#include "core/lyapunov.hpp"
#include "core/parabolic_pde.hpp"
#include "core/verify.hpp"

namespace {

thread_local std::string g_error = "";
thread_local int g_code = LIISS_OK;

static_assert(static_cast<int>(liiss::ErrorCode::InvalidArgument) + 1 ==
              LIISS_ERR_INVALID_ARGUMENT);
static_assert(static_cast<int>(liiss::ErrorCode::Internal) + 1 == LIISS_ERR_INTERNAL);

int set_error(int code, const std::string& msg) {
  g_code = code;
  g_error = msg;
  return code;
}

template <class F>
int guarded(F&& f) {
  try {
    f();
    return LIISS_OK;
  } catch (const liiss::Error& e) {
    return set_error(static_cast<int>(e.code()) + 1, e.what());
  } catch (const std::exception& e) {
    return set_error(LIISS_ERR_INTERNAL, e.what());
  }
}

int require(bool cond, const char* what) {
  if (cond) return LIISS_OK;
  return set_error(LIISS_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

struct liiss_beta {
  liiss::KLBound bound;
};
struct liiss_ode {
  liiss::OdeConfig cfg;
};
struct liiss_pde {
  liiss::PdeConfig cfg;
  std::function<double(double)> x0_fn;
  double xi_min, xi_max;
  int n_xi;
};
struct liiss_traj {
  liiss::Trajectory t;
};
struct liiss_cert {
  liiss::LiissCertificate cert;
  liiss::AdmissibleRegion region;
};
struct liiss_verify {
  std::vector<liiss::CriterionResult> results;
};

extern "C" {

const char* liiss_last_error(void) { return g_error.c_str(); }
int liiss_last_error_code(void) { return g_code; }

int liiss_beta_create(const char* alpha_expr, int alpha_class, double domain_hi,
                      const char* g_expr, liiss_beta** out) {
  if (int rc = require(alpha_expr && g_expr && out, "null argument")) return rc;
  if (int rc = require(alpha_class == LIISS_CLASS_K || alpha_class == LIISS_CLASS_KINF,
                       "alpha_class must be LIISS_CLASS_K or LIISS_CLASS_KINF"))
    return rc;
  return guarded([&] {
    auto alpha = liiss::ComparisonFn::from_expr(
        alpha_expr,
        alpha_class == LIISS_CLASS_KINF ? liiss::FnClass::KInf : liiss::FnClass::K,
        domain_hi);
    auto g = liiss::TimeSignal::from_expr(g_expr, true);
    *out = new liiss_beta{liiss::KLBound(std::move(alpha), std::move(g))};
  });
}

int liiss_beta_eval(liiss_beta* b, double s, double t, double* out) {
  if (int rc = require(b && out, "null argument")) return rc;
  return guarded([&] { *out = b->bound.evaluate(s, t); });
}

int liiss_beta_eta(liiss_beta* b, double s, double* out) {
  if (int rc = require(b && out, "null argument")) return rc;
  return guarded([&] { *out = b->bound.eta(s); });
}

int liiss_beta_eta_inverse(liiss_beta* b, double y, double* out, int* clamped) {
  if (int rc = require(b && out, "null argument")) return rc;
  return guarded([&] {
    auto r = b->bound.eta_inverse(y);
    *out = r.value;
    if (clamped) *clamped = r.clamped ? 1 : 0;
  });
}

void liiss_beta_free(liiss_beta* b) { delete b; }

int liiss_ode_create(double amplitude, liiss_ode** out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] { *out = new liiss_ode{liiss::benchmark_ode_config(amplitude)}; });
}

int liiss_ode_set_scalar(liiss_ode* h, const char* key, double value) {
  if (int rc = require(h && key, "null argument")) return rc;
  return guarded([&] {
    auto& c = h->cfg;
    const std::string k = key;
    if (k == "m")
      c.m = static_cast<int>(value);
    else if (k == "n")
      c.n = static_cast<int>(value);
    else if (k == "M")
      c.M = value;
    else if (k == "eps")
      c.eps = value;
    else if (k == "horizon")
      c.horizon = value;
    else if (k == "samples")
      c.samples = static_cast<size_t>(value);
    else if (k == "x0_1")
      c.x0[0] = value;
    else if (k == "x0_2")
      c.x0[1] = value;
    else if (k == "abs_tol")
      c.tol.abs_tol = value;
    else if (k == "rel_tol")
      c.tol.rel_tol = value;
    else if (k == "blowup_threshold")
      c.blowup_threshold = value;
    else if (k == "d_amplitude") {
      c.d_amplitude = value;
      c.d = liiss::make_disturbance(value);
    } else
      liiss::fail(liiss::ErrorCode::InvalidArgument,
                  "unknown ode scalar key: " + k);
  });
}

int liiss_ode_set_expr(liiss_ode* h, const char* key, const char* expr) {
  if (int rc = require(h && key && expr, "null argument")) return rc;
  return guarded([&] {
    auto& c = h->cfg;
    const std::string k = key;
    if (k == "g")
      c.g = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "g_tilde")
      c.g_tilde = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "b")
      c.b = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "h1")
      c.h1 = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "h1_deriv")
      c.h1_deriv = liiss::TimeSignal::from_expr(expr, false);
    else if (k == "g1")
      c.g1 = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "g2")
      c.g2 = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "h2")
      c.h2 = liiss::TimeSignal::from_expr(expr, true);
    else if (k == "d")
      c.d = liiss::TimeSignal::from_expr(expr, false);
    else
      liiss::fail(liiss::ErrorCode::InvalidArgument,
                  "unknown ode expression key: " + k);
  });
}

int liiss_ode_validate(liiss_ode* h) {
  if (int rc = require(h != nullptr, "null argument")) return rc;
  return guarded([&] {
    liiss::validate_ode_config(h->cfg);
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[i] = h->cfg.horizon * i / 100.0;
    auto rep = liiss::validate_gains(h->cfg, grid);
    if (!rep.passed())
      liiss::fail(liiss::ErrorCode::InvalidArgument,
                  "gain conditions violated:\n" + rep.to_text());
  });
}

int liiss_ode_run(liiss_ode* h, int closed, liiss_traj** out) {
  if (int rc = require(h && out, "null argument")) return rc;
  return guarded([&] {
    *out = new liiss_traj{liiss::simulate(
        h->cfg, closed ? liiss::OdeMode::closed : liiss::OdeMode::open)};
  });
}

int liiss_ode_dissipation(liiss_ode* h, liiss_traj* traj, size_t* violations,
                          double* worst_margin) {
  if (int rc = require(h && traj && violations && worst_margin, "null argument"))
    return rc;
  return guarded([&] {
    auto rep = liiss::ode_dissipation_report(h->cfg, traj->t);
    *violations = rep.violation_count();
    *worst_margin = rep.worst_margin();
  });
}

void liiss_ode_free(liiss_ode* h) { delete h; }

int liiss_ode_region(double M, int m, int n, double eps, double out3[3]) {
  if (int rc = require(out3 != nullptr, "null argument")) return rc;
  return guarded([&] {
    auto [a1, a2] = liiss::ode_sandwich_fns(M);
    auto th = liiss::ode_theta_fns(M, m, n, eps > 0 ? eps : liiss::default_eps(M));
    auto region = liiss::admissible_region(a1, a2, th.theta1, th.theta2);
    out3[0] = region.R_prime;
    out3[1] = region.r_prime;
    out3[2] = region.R;
  });
}

int liiss_pde_create(double amplitude, double x0_scale, double xi_min,
                     double xi_max, int n_xi, liiss_pde** out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] {
    auto cfg = liiss::benchmark_pde_config(amplitude, x0_scale, xi_min, xi_max,
                                           static_cast<size_t>(n_xi));
    auto x0_fn = [x0_scale](double xi) {
      return x0_scale * (xi - 0.5) * (xi - 2.0);
    };
    *out = new liiss_pde{std::move(cfg), x0_fn, xi_min, xi_max, n_xi};
  });
}

int liiss_pde_set_scalar(liiss_pde* h, const char* key, double value) {
  if (int rc = require(h && key, "null argument")) return rc;
  return guarded([&] {
    auto& c = h->cfg;
    const std::string k = key;
    if (k == "dt")
      c.dt = value;
    else if (k == "horizon")
      c.horizon = value;
    else if (k == "M")
      c.M = value;
    else if (k == "m1")
      c.m1 = value;
    else if (k == "m2")
      c.m2 = value;
    else if (k == "underline_a")
      c.underline_a = value;
    else if (k == "underline_c")
      c.underline_c = value;
    else if (k == "blowup_threshold")
      c.blowup_threshold = value;
    else if (k == "n_xi") {
      h->n_xi = static_cast<int>(value);
      if (h->n_xi < 3)
        liiss::fail(liiss::ErrorCode::InvalidArgument, "n_xi must be >= 3");
      c.x0 = liiss::sample_grid(h->x0_fn, h->xi_min, h->xi_max,
                                static_cast<size_t>(h->n_xi));
    } else
      liiss::fail(liiss::ErrorCode::InvalidArgument,
                  "unknown pde scalar key: " + k);
  });
}

int liiss_pde_set_expr(liiss_pde* h, const char* key, const char* expr) {
  if (int rc = require(h && key && expr, "null argument")) return rc;
  return guarded([&] {
    auto& c = h->cfg;
    const std::string k = key;
    const std::vector<std::string> xi_t = {"xi", "t"};
    const std::vector<std::string> xi_t_x = {"xi", "t", "x"};
    const std::vector<std::string> xi_only = {"xi"};
    if (k == "a" || k == "c" || k == "u") {
      auto ex = liiss::Expr::parse(expr, xi_t);
      auto fn = [ex](double xi, double t) { return ex.eval2(xi, t); };
      if (k == "a")
        c.a = fn;
      else if (k == "c")
        c.c = fn;
      else
        c.u = fn;
    } else if (k == "h") {
      auto ex = liiss::Expr::parse(expr, xi_t_x);
      c.h = [ex](double xi, double t, double x) { return ex.eval3(xi, t, x); };
    } else if (k == "x0") {
      auto ex = liiss::Expr::parse(expr, xi_only);
      h->x0_fn = [ex](double xi) { return ex.eval1(xi); };
      c.x0 = liiss::sample_grid(h->x0_fn, h->xi_min, h->xi_max,
                                static_cast<size_t>(h->n_xi));
    } else {
      liiss::fail(liiss::ErrorCode::InvalidArgument,
                  "unknown pde expression key: " + k);
    }
  });
}

int liiss_pde_set_snapshots(liiss_pde* h, const double* times, size_t n) {
  if (int rc = require(h && (times || n == 0), "null argument")) return rc;
  h->cfg.snapshot_times.assign(times, times + n);
  return LIISS_OK;
}

int liiss_pde_validate(liiss_pde* h) {
  if (int rc = require(h != nullptr, "null argument")) return rc;
  return guarded([&] { liiss::validate_pde_config(h->cfg); });
}

int liiss_pde_run(liiss_pde* h, liiss_traj** out) {
  if (int rc = require(h && out, "null argument")) return rc;
  return guarded([&] { *out = new liiss_traj{liiss::simulate(h->cfg)}; });
}

int liiss_pde_dissipation(liiss_pde* h, liiss_traj* traj, size_t* violations,
                          double* worst_margin) {
  if (int rc = require(h && traj && violations && worst_margin, "null argument"))
    return rc;
  return guarded([&] {
    auto rep = liiss::pde_l2_dissipation_check(h->cfg, traj->t);
    *violations = rep.violation_count();
    *worst_margin = rep.worst_margin();
  });
}

void liiss_pde_free(liiss_pde* h) { delete h; }

size_t liiss_traj_size(liiss_traj* t) { return t ? t->t.size() : 0; }
size_t liiss_traj_dim(liiss_traj* t) { return t ? t->t.dim : 0; }

int liiss_traj_time(liiss_traj* t, size_t i, double* out) {
  if (int rc = require(t && out && i < t->t.times.size(), "index out of range"))
    return rc;
  *out = t->t.times[i];
  return LIISS_OK;
}

int liiss_traj_norm(liiss_traj* t, size_t i, double* out) {
  if (int rc = require(t && out && i < t->t.norms.size(), "index out of range"))
    return rc;
  *out = t->t.norms[i];
  return LIISS_OK;
}

int liiss_traj_aux_norm(liiss_traj* t, size_t i, double* out) {
  if (int rc = require(t && out && i < t->t.aux_norms.size(), "index out of range"))
    return rc;
  *out = t->t.aux_norms[i];
  return LIISS_OK;
}

int liiss_traj_energy(liiss_traj* t, size_t i, double* out) {
  if (int rc = require(t && out && i < t->t.input_energy.size(), "index out of range"))
    return rc;
  *out = t->t.input_energy[i];
  return LIISS_OK;
}

int liiss_traj_state(liiss_traj* t, size_t i, size_t j, double* out) {
  if (int rc = require(t && out && t->t.dim > 0 && i < t->t.size() && j < t->t.dim,
                       "index out of range"))
    return rc;
  *out = t->t.states[i * t->t.dim + j];
  return LIISS_OK;
}

int liiss_traj_blow_up(liiss_traj* t, double* out, int* has) {
  if (int rc = require(t && out && has, "null argument")) return rc;
  *has = t->t.blow_up_time.has_value() ? 1 : 0;
  *out = t->t.blow_up_time.value_or(0.0);
  return LIISS_OK;
}

size_t liiss_traj_grid_size(liiss_traj* t) { return t ? t->t.grid.size() : 0; }

int liiss_traj_grid(liiss_traj* t, size_t i, double* out) {
  if (int rc = require(t && out && i < t->t.grid.size(), "index out of range"))
    return rc;
  *out = t->t.grid[i];
  return LIISS_OK;
}

size_t liiss_traj_snapshot_count(liiss_traj* t) {
  return t ? t->t.snapshots.size() : 0;
}

int liiss_traj_snapshot_time(liiss_traj* t, size_t k, double* out) {
  if (int rc = require(t && out && k < t->t.snapshot_times.size(), "index out of range"))
    return rc;
  *out = t->t.snapshot_times[k];
  return LIISS_OK;
}

int liiss_traj_snapshot_value(liiss_traj* t, size_t k, size_t i, double* out) {
  if (int rc = require(t && out && k < t->t.snapshots.size() &&
                           i < t->t.snapshots[k].size(),
                       "index out of range"))
    return rc;
  *out = t->t.snapshots[k][i];
  return LIISS_OK;
}

void liiss_traj_free(liiss_traj* t) { delete t; }

int liiss_cert_create(const char* alpha1_expr, double alpha1_hi,
                      const char* alpha2_expr, double alpha2_hi,
                      const char* theta1_expr, const char* theta2_expr,
                      double theta_hi, const char* phi_expr, double phi_hi,
                      const char* g1_expr, liiss_cert** out) {
  if (int rc = require(alpha1_expr && alpha2_expr && theta1_expr && theta2_expr &&
                           phi_expr && g1_expr && out,
                       "null argument"))
    return rc;
  return guarded([&] {
    auto a1 = liiss::ComparisonFn::from_expr(alpha1_expr, liiss::FnClass::KInf,
                                             alpha1_hi);
    auto a2 = liiss::ComparisonFn::from_expr(alpha2_expr, liiss::FnClass::KInf,
                                             alpha2_hi);
    auto th1 = liiss::ComparisonFn::from_expr(theta1_expr, liiss::FnClass::K,
                                              theta_hi);
    // theta2 may be degenerate (identically zero); only the region
    // construction constrains it.
    auto th2 = liiss::ComparisonFn::from_expr(theta2_expr, liiss::FnClass::K,
                                              theta_hi, false);
    auto phi = liiss::ComparisonFn::from_expr(phi_expr, liiss::FnClass::K, phi_hi);
    auto g1 = liiss::TimeSignal::from_expr(g1_expr, true);
    auto region = liiss::admissible_region(a1, a2, th1, th2);
    auto cert = liiss::build_certificate(std::move(a1), std::move(a2),
                                         std::move(th1), std::move(th2),
                                         std::move(phi), std::move(g1), region);
    *out = new liiss_cert{std::move(cert), region};
  });
}

int liiss_cert_region(liiss_cert* c, double out3[3]) {
  if (int rc = require(c && out3, "null argument")) return rc;
  out3[0] = c->region.R_prime;
  out3[1] = c->region.r_prime;
  out3[2] = c->region.R;
  return LIISS_OK;
}

int liiss_cert_envelope(liiss_cert* c, double x0_norm, double input_energy,
                        double t, double* out) {
  if (int rc = require(c && out, "null argument")) return rc;
  return guarded([&] { *out = c->cert.envelope_at(x0_norm, input_energy, t); });
}

int liiss_cert_membership(liiss_cert* c, double x0_norm, const double* energy,
                          size_t n, int* member) {
  if (int rc = require(c && member && (energy || n == 0), "null argument")) return rc;
  return guarded([&] {
    *member = c->cert.check_membership_BR(x0_norm, {energy, n}) ? 1 : 0;
  });
}

int liiss_cert_verify_traj(liiss_cert* c, liiss_traj* traj, size_t* violations,
                           double* worst_margin) {
  if (int rc = require(c && traj && violations && worst_margin, "null argument"))
    return rc;
  return guarded([&] {
    auto rep = c->cert.verify_trajectory(traj->t);
    *violations = rep.violation_count();
    *worst_margin = rep.worst_margin();
  });
}

void liiss_cert_free(liiss_cert* c) { delete c; }

size_t liiss_criterion_count(void) {
  return liiss::acceptance_criterion_names().size();
}

const char* liiss_criterion_name(size_t i) {
  auto names = liiss::acceptance_criterion_names();
  return i < names.size() ? names[i] : nullptr;
}

int liiss_verify_run(uint64_t seed, const char* corrupt, liiss_verify** out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  if (corrupt) {
    bool known = false;
    for (const char* name : liiss::acceptance_criterion_names())
      known = known || std::strcmp(name, corrupt) == 0;
    if (!known)
      return set_error(LIISS_ERR_INVALID_ARGUMENT,
                       std::string("unknown criterion name: ") + corrupt);
  }
  return guarded([&] {
    liiss::AcceptanceOptions opts;
    opts.seed = seed;
    if (corrupt) opts.corrupt = corrupt;
    *out = new liiss_verify{liiss::run_acceptance(opts)};
  });
}

size_t liiss_verify_count(liiss_verify* v) { return v ? v->results.size() : 0; }

const char* liiss_verify_name(liiss_verify* v, size_t i) {
  return v && i < v->results.size() ? v->results[i].name.c_str() : nullptr;
}

int liiss_verify_passed(liiss_verify* v, size_t i) {
  return v && i < v->results.size() && v->results[i].passed ? 1 : 0;
}

const char* liiss_verify_detail(liiss_verify* v, size_t i) {
  return v && i < v->results.size() ? v->results[i].detail.c_str() : nullptr;
}

double liiss_verify_seconds(liiss_verify* v, size_t i) {
  return v && i < v->results.size() ? v->results[i].seconds : 0.0;
}

void liiss_verify_free(liiss_verify* v) { delete v; }

}  // extern "C"
