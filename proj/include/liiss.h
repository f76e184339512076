/* C interface to the LiISS numerical laboratory.
 *
 * Every function returns a status code (LIISS_OK or an LIISS_ERR_* value)
 * unless documented otherwise; results travel through out-parameters.
 * liiss_last_error() describes the most recent failure on the calling
 * thread.  Handles are opaque and must be released with the matching
 * *_free function; freeing NULL is a no-op.  A handle is only valid on
 * one thread at a time.
 */
#ifndef LIISS_H
#define LIISS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define LIISS_OK 0
#define LIISS_ERR_INVALID_ARGUMENT 1
#define LIISS_ERR_PARSE 2
#define LIISS_ERR_NON_CONVERGENCE 3
#define LIISS_ERR_TARGET_OUT_OF_RANGE 4
#define LIISS_ERR_STEP_UNDERFLOW 5
#define LIISS_ERR_SINGULAR_PIVOT 6
#define LIISS_ERR_NO_ADMISSIBLE_REGION 7
#define LIISS_ERR_OUT_OF_REGION 8
#define LIISS_ERR_DIMENSION_MISMATCH 9
#define LIISS_ERR_EPS_OUT_OF_RANGE 10
#define LIISS_ERR_DEGENERATE_INPUT 11
#define LIISS_ERR_INTERNAL 12

/* Comparison-function classes for liiss_beta_create. */
#define LIISS_CLASS_K 0
#define LIISS_CLASS_KINF 1

typedef struct liiss_beta liiss_beta;
typedef struct liiss_ode liiss_ode;
typedef struct liiss_pde liiss_pde;
typedef struct liiss_traj liiss_traj;
typedef struct liiss_cert liiss_cert;
typedef struct liiss_verify liiss_verify;

/* Message for the most recent failure on this thread (never NULL). */
const char* liiss_last_error(void);
int liiss_last_error_code(void);

/* ---- class-KL decay bounds ------------------------------------------- */

/* alpha_expr: expression in `s`; g_expr: nonnegative expression in `t`.
 * alpha_class is LIISS_CLASS_K or LIISS_CLASS_KINF; domain_hi bounds the
 * certified s-range. */
int liiss_beta_create(const char* alpha_expr, int alpha_class, double domain_hi,
                      const char* g_expr, liiss_beta** out);
int liiss_beta_eval(liiss_beta* b, double s, double t, double* out);
int liiss_beta_eta(liiss_beta* b, double s, double* out);
/* clamped (optional) is set to 1 when the inverse was clamped at the
 * numerical floor. */
int liiss_beta_eta_inverse(liiss_beta* b, double y, double* out, int* clamped);
void liiss_beta_free(liiss_beta* b);

/* ---- feedback ODE benchmark ------------------------------------------ */

/* Starts from the built-in benchmark configuration with disturbance
 * amplitude `amplitude`. */
int liiss_ode_create(double amplitude, liiss_ode** out);
/* Scalar keys: m, n, M, eps, horizon, samples, x0_1, x0_2, abs_tol,
 * rel_tol, blowup_threshold, d_amplitude. */
int liiss_ode_set_scalar(liiss_ode* h, const char* key, double value);
/* Expression keys (functions of t): g, g_tilde, b, h1, h1_deriv, g1, g2,
 * h2, d. */
int liiss_ode_set_expr(liiss_ode* h, const char* key, const char* expr);
/* Structural checks of the configuration and the gain conditions. */
int liiss_ode_validate(liiss_ode* h);
/* closed != 0 simulates the feedback loop (with disturbance), 0 the open
 * loop. */
int liiss_ode_run(liiss_ode* h, int closed, liiss_traj** out);
/* Dissipation inequality check along a trajectory from this
 * configuration. */
int liiss_ode_dissipation(liiss_ode* h, liiss_traj* traj, size_t* violations,
                          double* worst_margin);
void liiss_ode_free(liiss_ode* h);

/* Admissible-region constants (R_prime, r_prime, R) of the benchmark
 * Lyapunov construction; eps <= 0 selects the default. out3 receives
 * R_prime, r_prime, R. */
int liiss_ode_region(double M, int m, int n, double eps, double out3[3]);

/* ---- parabolic PDE benchmark ----------------------------------------- */

/* Benchmark coefficients with input amplitude `amplitude` and initial
 * profile x0_scale*(xi-0.5)*(xi-2) sampled on n_xi nodes over
 * [xi_min, xi_max]. */
int liiss_pde_create(double amplitude, double x0_scale, double xi_min,
                     double xi_max, int n_xi, liiss_pde** out);
/* Scalar keys: dt, horizon, M, m1, m2, underline_a, underline_c,
 * blowup_threshold, n_xi (re-samples the initial profile). */
int liiss_pde_set_scalar(liiss_pde* h, const char* key, double value);
/* Expression keys: a, c, u over (xi, t); h over (xi, t, x); x0 over xi. */
int liiss_pde_set_expr(liiss_pde* h, const char* key, const char* expr);
int liiss_pde_set_snapshots(liiss_pde* h, const double* times, size_t n);
int liiss_pde_validate(liiss_pde* h);
int liiss_pde_run(liiss_pde* h, liiss_traj** out);
/* L2 energy-dissipation check along a trajectory from this
 * configuration. */
int liiss_pde_dissipation(liiss_pde* h, liiss_traj* traj, size_t* violations,
                          double* worst_margin);
void liiss_pde_free(liiss_pde* h);

/* ---- trajectories ----------------------------------------------------- */

size_t liiss_traj_size(liiss_traj* t);
size_t liiss_traj_dim(liiss_traj* t);
int liiss_traj_time(liiss_traj* t, size_t i, double* out);
int liiss_traj_norm(liiss_traj* t, size_t i, double* out);
/* L3 norm series (PDE runs). */
int liiss_traj_aux_norm(liiss_traj* t, size_t i, double* out);
/* Accumulated input-energy series. */
int liiss_traj_energy(liiss_traj* t, size_t i, double* out);
int liiss_traj_state(liiss_traj* t, size_t i, size_t j, double* out);
/* has receives 0 or 1; out is the blow-up time when has = 1. */
int liiss_traj_blow_up(liiss_traj* t, double* out, int* has);
size_t liiss_traj_grid_size(liiss_traj* t);
int liiss_traj_grid(liiss_traj* t, size_t i, double* out);
size_t liiss_traj_snapshot_count(liiss_traj* t);
int liiss_traj_snapshot_time(liiss_traj* t, size_t k, double* out);
int liiss_traj_snapshot_value(liiss_traj* t, size_t k, size_t i, double* out);
void liiss_traj_free(liiss_traj* t);

/* ---- LiISS certificates ----------------------------------------------- */

/* Builds the envelope certificate from the five comparison functions
 * (expressions in `s` with their domain bounds) and the decay signal
 * g1_expr.  The admissible region is derived internally.  Fails with
 * LIISS_ERR_INVALID_ARGUMENT when theta1(alpha2^-1) - theta2(alpha1^-1)
 * is not class K on the derived region. */
int liiss_cert_create(const char* alpha1_expr, double alpha1_hi,
                      const char* alpha2_expr, double alpha2_hi,
                      const char* theta1_expr, const char* theta2_expr,
                      double theta_hi, const char* phi_expr, double phi_hi,
                      const char* g1_expr, liiss_cert** out);
int liiss_cert_region(liiss_cert* c, double out3[3]);
int liiss_cert_envelope(liiss_cert* c, double x0_norm, double input_energy,
                        double t, double* out);
/* member receives 1 when x0_norm plus sigma0 of every energy entry stays
 * inside the ball of radius R. */
int liiss_cert_membership(liiss_cert* c, double x0_norm, const double* energy,
                          size_t n, int* member);
int liiss_cert_verify_traj(liiss_cert* c, liiss_traj* traj, size_t* violations,
                           double* worst_margin);
void liiss_cert_free(liiss_cert* c);

/* ---- acceptance suite -------------------------------------------------- */

size_t liiss_criterion_count(void);
const char* liiss_criterion_name(size_t i);

/* corrupt may be NULL; otherwise it names a criterion forced to fail
 * (test hook). */
int liiss_verify_run(uint64_t seed, const char* corrupt, liiss_verify** out);
size_t liiss_verify_count(liiss_verify* v);
const char* liiss_verify_name(liiss_verify* v, size_t i);
int liiss_verify_passed(liiss_verify* v, size_t i);
const char* liiss_verify_detail(liiss_verify* v, size_t i);
double liiss_verify_seconds(liiss_verify* v, size_t i);
void liiss_verify_free(liiss_verify* v);

#ifdef __cplusplus
}
#endif

#endif /* LIISS_H */
