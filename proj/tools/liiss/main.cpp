// liiss: experiment runner for the LiISS laboratory.
//
// Subcommands:
//   liiss run <config.json> [--out DIR] [--no-plots] [--seed N]
//   liiss verify [--seed N] [--corrupt NAME]
//   liiss beta --alpha EXPR --g EXPR --s-grid a:b:n --t-grid a:b:n
//
// Exit codes: 0 success, 1 verification failures, 2 configuration errors,
// 3 numerical failures.  Everything below talks to the solver library
// through the C interface only.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "liiss.h"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Error taxonomy mirroring the exit-code contract.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string last_err() {
  const char* m = liiss_last_error();
  return m && *m ? m : "unknown error";
}

// Failures while building or validating a configuration are the user's
// problem; failures while integrating are the solver's.
void ck_cfg(int rc) {
  if (rc != LIISS_OK) throw ConfigError(last_err());
}

void ck_run(int rc) {
  if (rc == LIISS_OK) return;
  switch (rc) {
    case LIISS_ERR_NON_CONVERGENCE:
    case LIISS_ERR_STEP_UNDERFLOW:
    case LIISS_ERR_SINGULAR_PIVOT:
    case LIISS_ERR_INTERNAL:
      throw NumericalError(last_err());
    default:
      throw ConfigError(last_err());
  }
}

// ---------------------------------------------------------------------------
// Handle lifetimes.

using OdePtr = std::unique_ptr<liiss_ode, decltype(&liiss_ode_free)>;
using PdePtr = std::unique_ptr<liiss_pde, decltype(&liiss_pde_free)>;
using TrajPtr = std::unique_ptr<liiss_traj, decltype(&liiss_traj_free)>;
using BetaPtr = std::unique_ptr<liiss_beta, decltype(&liiss_beta_free)>;
using CertPtr = std::unique_ptr<liiss_cert, decltype(&liiss_cert_free)>;
using VerifyPtr = std::unique_ptr<liiss_verify, decltype(&liiss_verify_free)>;

// ---------------------------------------------------------------------------
// Formatting.  Data files carry 17 significant digits so reruns are
// byte-identical and values round-trip through doubles exactly.

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmtg(double v, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON field access with named diagnostics.

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& ctx) {
  for (auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown field '" + key + "' in " + ctx);
  }
}

double as_num(const json& obj, const std::string& key) {
  if (!obj.at(key).is_number())
    throw ConfigError("field '" + key + "' must be a number");
  return obj.at(key).get<double>();
}

double num_or(const json& obj, const std::string& key, double dflt) {
  return obj.contains(key) ? as_num(obj, key) : dflt;
}

long long int_or(const json& obj, const std::string& key, long long dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj.at(key).is_number_integer())
    throw ConfigError("field '" + key + "' must be an integer");
  return obj.at(key).get<long long>();
}

std::string as_str(const json& obj, const std::string& key) {
  if (!obj.at(key).is_string())
    throw ConfigError("field '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

std::string str_or(const json& obj, const std::string& key,
                   const std::string& dflt) {
  return obj.contains(key) ? as_str(obj, key) : dflt;
}

bool bool_or(const json& obj, const std::string& key, bool dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj.at(key).is_boolean())
    throw ConfigError("field '" + key + "' must be a boolean");
  return obj.at(key).get<bool>();
}

// ---------------------------------------------------------------------------
// SVG polyline plots.  Hand-rolled so the artifact has no plotting
// dependency; linear axes, one polyline per series, fixed palette.

struct Series {
  std::string name;
  std::vector<double> xs, ys;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

void write_svg(const fs::path& path, const std::string& title,
               const std::string& xlabel, const std::string& ylabel,
               const std::vector<Series>& series) {
  const double W = 800, H = 500, ml = 75, mr = 20, mt = 40, mb = 55;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, s.ys[i]);
      ymax = std::max(ymax, s.ys[i]);
    }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-300) {
    xmin -= 1;
    xmax += 1;
  }
  if (ymax - ymin < 1e-300) {
    ymin -= 1;
    ymax += 1;
  }
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " "
      << H << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"22\" font-size=\"16\">" << title
      << "</text>\n";

  // Axes with five ticks each.
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    double px = X(fx), py = Y(fy);
    out << "<line x1=\"" << fmtg(px, "%.2f") << "\" y1=\"" << H - mb
        << "\" x2=\"" << fmtg(px, "%.2f") << "\" y2=\"" << H - mb + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmtg(px, "%.2f") << "\" y=\"" << H - mb + 20
        << "\" text-anchor=\"middle\">" << fmtg(fx, "%.4g") << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmtg(py, "%.2f")
        << "\" x2=\"" << ml << "\" y2=\"" << fmtg(py, "%.2f")
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmtg(py + 4, "%.2f")
        << "\" text-anchor=\"end\">" << fmtg(fy, "%.4g") << "</text>\n";
  }
  out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (mt + H - mb) / 2 << ")\">" << ylabel << "</text>\n";

  const size_t npal = sizeof kPalette / sizeof kPalette[0];
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % npal];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      out << fmtg(X(s.xs[i]), "%.2f") << "," << fmtg(Y(s.ys[i]), "%.2f") << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 18 * k
        << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << out.str();
}

// ---------------------------------------------------------------------------
// Trajectory extraction through the C interface.

struct TrajData {
  std::vector<double> times, norms, aux_norms, energy;
  std::vector<std::vector<double>> states;  // per component
  std::optional<double> blow_up;
  std::vector<double> grid;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
};

TrajData extract(liiss_traj* t) {
  TrajData d;
  const size_t n = liiss_traj_size(t);
  const size_t dim = liiss_traj_dim(t);
  d.times.resize(n);
  d.norms.resize(n);
  d.energy.resize(n);
  d.states.assign(dim, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    ck_run(liiss_traj_time(t, i, &d.times[i]));
    ck_run(liiss_traj_norm(t, i, &d.norms[i]));
    ck_run(liiss_traj_energy(t, i, &d.energy[i]));
    for (size_t j = 0; j < dim; ++j)
      ck_run(liiss_traj_state(t, i, j, &d.states[j][i]));
  }
  double bt = 0;
  int has = 0;
  ck_run(liiss_traj_blow_up(t, &bt, &has));
  if (has) d.blow_up = bt;

  const size_t g = liiss_traj_grid_size(t);
  d.grid.resize(g);
  for (size_t i = 0; i < g; ++i) ck_run(liiss_traj_grid(t, i, &d.grid[i]));
  if (g > 0) {
    d.aux_norms.resize(n);
    for (size_t i = 0; i < n; ++i)
      ck_run(liiss_traj_aux_norm(t, i, &d.aux_norms[i]));
  }
  const size_t ns = liiss_traj_snapshot_count(t);
  d.snapshot_times.resize(ns);
  d.snapshots.assign(ns, std::vector<double>(g));
  for (size_t k = 0; k < ns; ++k) {
    ck_run(liiss_traj_snapshot_time(t, k, &d.snapshot_times[k]));
    for (size_t i = 0; i < g; ++i)
      ck_run(liiss_traj_snapshot_value(t, k, i, &d.snapshots[k][i]));
  }
  return d;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& cols, int stride) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  for (size_t c = 0; c < header.size(); ++c)
    f << header[c] << (c + 1 < header.size() ? "," : "\n");
  const size_t n = cols.empty() ? 0 : cols[0]->size();
  auto row = [&](size_t i) {
    for (size_t c = 0; c < cols.size(); ++c)
      f << fmt17((*cols[c])[i]) << (c + 1 < cols.size() ? "," : "\n");
  };
  for (size_t i = 0; i < n; i += static_cast<size_t>(stride)) row(i);
  // The final sample always lands in the file, whatever the stride.
  if (n > 0 && (n - 1) % static_cast<size_t>(stride) != 0) row(n - 1);
}

// ---------------------------------------------------------------------------
// Certificate verification configured alongside a run.

struct VerifyOutcome {
  std::optional<size_t> violations;
  std::optional<double> worst_margin;
  std::string error;  // non-empty when the certificate could not be applied
};

const std::set<std::string> kCertKeys = {
    "alpha1", "alpha1_hi", "alpha2", "alpha2_hi", "theta1",
    "theta2", "theta_hi",  "phi",    "phi_hi",    "g1"};

CertPtr build_cert(const json& c) {
  require_keys(c, kCertKeys, "certificate");
  for (const char* k : {"alpha1", "alpha2", "theta1", "theta2", "phi", "g1"})
    if (!c.contains(k))
      throw ConfigError(std::string("certificate is missing field '") + k + "'");
  liiss_cert* raw = nullptr;
  ck_cfg(liiss_cert_create(
      as_str(c, "alpha1").c_str(), num_or(c, "alpha1_hi", 100.0),
      as_str(c, "alpha2").c_str(), num_or(c, "alpha2_hi", 100.0),
      as_str(c, "theta1").c_str(), as_str(c, "theta2").c_str(),
      num_or(c, "theta_hi", 100.0), as_str(c, "phi").c_str(),
      num_or(c, "phi_hi", 100.0), as_str(c, "g1").c_str(), &raw));
  return CertPtr(raw, &liiss_cert_free);
}

VerifyOutcome apply_cert(const json& cert_cfg, liiss_traj* traj) {
  VerifyOutcome out;
  CertPtr cert = build_cert(cert_cfg);
  size_t v = 0;
  double w = 0;
  int rc = liiss_cert_verify_traj(cert.get(), traj, &v, &w);
  if (rc != LIISS_OK) {
    out.error = last_err();
    return out;
  }
  out.violations = v;
  out.worst_margin = w;
  return out;
}

// ---------------------------------------------------------------------------
// Experiment kinds.

struct RunArtifacts {
  json summary;       // per-run summary with the contract keys
  bool failed = false;  // any violations or certificate errors
};

const std::set<std::string> kCommonKeys = {"kind", "mirrors_figure", "out",
                                           "plots", "stride", "sweep"};

std::set<std::string> with_common(std::set<std::string> extra) {
  extra.insert(kCommonKeys.begin(), kCommonKeys.end());
  return extra;
}

const std::set<std::string> kOdeKeys = with_common(
    {"amplitude", "x0", "horizon", "samples", "abs_tol", "rel_tol",
     "blowup_threshold", "m", "n", "M", "eps", "g", "g_tilde", "b", "h1",
     "h1_deriv", "g1", "g2", "h2", "d", "certificate"});

const std::set<std::string> kPdeKeys = with_common(
    {"amplitude", "x0_scale", "xi_min", "xi_max", "n_xi", "dt", "horizon", "M",
     "m1", "m2", "underline_a", "underline_c", "blowup_threshold", "a", "c",
     "u", "h", "x0", "snapshots", "certificate"});

const std::set<std::string> kBetaKeys =
    with_common({"alpha", "alpha_class", "domain_hi", "g", "s_grid", "t_grid"});

const std::set<std::string> kVerifyKeys = with_common({"seed", "corrupt"});

json base_summary(const std::string& kind) {
  json s;
  s["kind"] = kind;
  s["final_norm"] = nullptr;
  s["sup_norm"] = nullptr;
  s["blow_up_time"] = nullptr;
  s["violations"] = nullptr;
  s["worst_margin"] = nullptr;
  return s;
}

void attach_outcome(json& summary, const VerifyOutcome& vo, bool* failed) {
  if (!vo.error.empty()) {
    summary["verify_error"] = vo.error;
    *failed = true;
    return;
  }
  if (vo.violations) {
    summary["violations"] = *vo.violations;
    summary["worst_margin"] = *vo.worst_margin;
    if (*vo.violations > 0) *failed = true;
  }
}

RunArtifacts run_ode(const json& cfg, bool closed, double amplitude,
                     const fs::path& dir, bool plots, int stride) {
  liiss_ode* raw = nullptr;
  ck_cfg(liiss_ode_create(amplitude, &raw));
  OdePtr ode(raw, &liiss_ode_free);

  for (const char* k : {"horizon", "abs_tol", "rel_tol", "blowup_threshold",
                        "M", "eps"})
    if (cfg.contains(k)) ck_cfg(liiss_ode_set_scalar(ode.get(), k, as_num(cfg, k)));
  for (const char* k : {"m", "n", "samples"})
    if (cfg.contains(k))
      ck_cfg(liiss_ode_set_scalar(ode.get(), k,
                                  static_cast<double>(int_or(cfg, k, 0))));
  if (cfg.contains("x0")) {
    const json& x0 = cfg.at("x0");
    if (!x0.is_array() || x0.size() != 2 || !x0[0].is_number() ||
        !x0[1].is_number())
      throw ConfigError("field 'x0' must be an array of two numbers");
    ck_cfg(liiss_ode_set_scalar(ode.get(), "x0_1", x0[0].get<double>()));
    ck_cfg(liiss_ode_set_scalar(ode.get(), "x0_2", x0[1].get<double>()));
  }
  for (const char* k :
       {"g", "g_tilde", "b", "h1", "h1_deriv", "g1", "g2", "h2", "d"})
    if (cfg.contains(k))
      ck_cfg(liiss_ode_set_expr(ode.get(), k, as_str(cfg, k).c_str()));

  ck_cfg(liiss_ode_validate(ode.get()));

  liiss_traj* traw = nullptr;
  ck_run(liiss_ode_run(ode.get(), closed ? 1 : 0, &traw));
  TrajPtr traj(traw, &liiss_traj_free);
  TrajData d = extract(traj.get());

  write_csv(dir / "trajectory.csv", {"t", "x1", "x2", "norm", "input_energy"},
            {&d.times, &d.states[0], &d.states[1], &d.norms, &d.energy}, stride);

  if (plots) {
    write_svg(dir / "norms.svg", "state norm", "t", "|x(t)|",
              {{"|x|", d.times, d.norms}});
    write_svg(dir / "components.svg", "state components", "t", "x_i(t)",
              {{"x1", d.times, d.states[0]}, {"x2", d.times, d.states[1]}});
  }

  RunArtifacts out;
  out.summary = base_summary(closed ? "ode_closed" : "ode_open");
  out.summary["final_norm"] = d.norms.empty() ? 0.0 : d.norms.back();
  out.summary["sup_norm"] =
      d.norms.empty() ? 0.0 : *std::max_element(d.norms.begin(), d.norms.end());
  if (d.blow_up) out.summary["blow_up_time"] = *d.blow_up;

  if (cfg.contains("certificate")) {
    attach_outcome(out.summary, apply_cert(cfg.at("certificate"), traj.get()),
                   &out.failed);
  } else if (closed && !d.blow_up) {
    // The closed loop satisfies a dissipation inequality along solutions;
    // check it by default.  A diverging run has no meaningful finite
    // differences, so blow-ups skip the check.
    size_t v = 0;
    double w = 0;
    ck_run(liiss_ode_dissipation(ode.get(), traj.get(), &v, &w));
    out.summary["violations"] = v;
    out.summary["worst_margin"] = w;
    if (v > 0) out.failed = true;
  }
  return out;
}

RunArtifacts run_pde(const json& cfg, double amplitude, const fs::path& dir,
                     bool plots, int stride) {
  const double x0_scale = num_or(cfg, "x0_scale", 0.5);
  const double xi_min = num_or(cfg, "xi_min", 0.5);
  const double xi_max = num_or(cfg, "xi_max", 2.0);
  const int n_xi = static_cast<int>(int_or(cfg, "n_xi", 201));

  liiss_pde* raw = nullptr;
  ck_cfg(liiss_pde_create(amplitude, x0_scale, xi_min, xi_max, n_xi, &raw));
  PdePtr pde(raw, &liiss_pde_free);

  for (const char* k : {"dt", "horizon", "M", "m1", "m2", "underline_a",
                        "underline_c", "blowup_threshold"})
    if (cfg.contains(k)) ck_cfg(liiss_pde_set_scalar(pde.get(), k, as_num(cfg, k)));
  bool custom_input = false;
  for (const char* k : {"a", "c", "u", "h", "x0"}) {
    if (!cfg.contains(k)) continue;
    ck_cfg(liiss_pde_set_expr(pde.get(), k, as_str(cfg, k).c_str()));
    if (std::string(k) == "u") custom_input = true;
  }
  if (cfg.contains("snapshots")) {
    const json& sn = cfg.at("snapshots");
    if (!sn.is_array())
      throw ConfigError("field 'snapshots' must be an array of times");
    std::vector<double> times;
    for (const auto& v : sn) {
      if (!v.is_number())
        throw ConfigError("field 'snapshots' must be an array of times");
      times.push_back(v.get<double>());
    }
    ck_cfg(liiss_pde_set_snapshots(pde.get(), times.data(), times.size()));
  }

  ck_cfg(liiss_pde_validate(pde.get()));

  liiss_traj* traw = nullptr;
  ck_run(liiss_pde_run(pde.get(), &traw));
  TrajPtr traj(traw, &liiss_traj_free);
  TrajData d = extract(traj.get());

  write_csv(dir / "norms.csv", {"t", "l2_norm", "l3_norm", "input_energy"},
            {&d.times, &d.norms, &d.aux_norms, &d.energy}, stride);
  if (!d.snapshots.empty()) {
    std::ofstream f(dir / "snapshots.csv", std::ios::binary);
    if (!f) throw ConfigError("cannot write snapshots.csv");
    f << "xi";
    for (double t : d.snapshot_times) f << ",t_" << fmt17(t);
    f << "\n";
    for (size_t i = 0; i < d.grid.size(); ++i) {
      f << fmt17(d.grid[i]);
      for (const auto& snap : d.snapshots) f << "," << fmt17(snap[i]);
      f << "\n";
    }
  }

  if (plots) {
    write_svg(dir / "norms.svg", "solution norm", "t", "L2 norm",
              {{"||x||_2", d.times, d.norms}});
    if (!d.snapshots.empty()) {
      std::vector<Series> series;
      for (size_t k = 0; k < d.snapshots.size(); ++k)
        series.push_back(
            {"t=" + fmtg(d.snapshot_times[k], "%.3g"), d.grid, d.snapshots[k]});
      write_svg(dir / "snapshots.svg", "solution profiles", "xi", "x(xi,t)",
                series);
    }
  }

  RunArtifacts out;
  out.summary = base_summary("pde");
  out.summary["final_norm"] = d.norms.empty() ? 0.0 : d.norms.back();
  out.summary["sup_norm"] =
      d.norms.empty() ? 0.0 : *std::max_element(d.norms.begin(), d.norms.end());
  if (d.blow_up) out.summary["blow_up_time"] = *d.blow_up;

  if (cfg.contains("certificate")) {
    attach_outcome(out.summary, apply_cert(cfg.at("certificate"), traj.get()),
                   &out.failed);
  } else if (amplitude == 0.0 && !custom_input && !d.blow_up) {
    // The zero-input energy estimate applies; check it by default.
    size_t v = 0;
    double w = 0;
    ck_run(liiss_pde_dissipation(pde.get(), traj.get(), &v, &w));
    out.summary["violations"] = v;
    out.summary["worst_margin"] = w;
    if (v > 0) out.failed = true;
  }
  return out;
}

std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  double a = 0, b = 0;
  long long n = 0;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lld%c", &a, &b, &n, &extra) != 3 ||
      n < 1)
    throw ConfigError(what + " must have the form a:b:n with n >= 1, got '" +
                      spec + "'");
  std::vector<double> g(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] =
        n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

void beta_table_csv(std::ostream& os, liiss_beta* beta,
                    const std::vector<double>& s_grid,
                    const std::vector<double>& t_grid) {
  os << "s";
  for (double t : t_grid) os << ",t_" << fmt17(t);
  os << "\n";
  for (double s : s_grid) {
    os << fmt17(s);
    for (double t : t_grid) {
      double v = 0;
      ck_run(liiss_beta_eval(beta, s, t, &v));
      os << "," << fmt17(v);
    }
    os << "\n";
  }
}

RunArtifacts run_beta_table(const json& cfg, const fs::path& dir, bool plots) {
  for (const char* k : {"alpha", "g", "s_grid", "t_grid"})
    if (!cfg.contains(k))
      throw ConfigError(std::string("beta_table config is missing field '") +
                        k + "'");
  const std::string cls = str_or(cfg, "alpha_class", "KInf");
  if (cls != "K" && cls != "KInf")
    throw ConfigError("field 'alpha_class' must be \"K\" or \"KInf\"");
  auto s_grid = parse_grid(as_str(cfg, "s_grid"), "field 's_grid'");
  auto t_grid = parse_grid(as_str(cfg, "t_grid"), "field 't_grid'");

  liiss_beta* raw = nullptr;
  ck_cfg(liiss_beta_create(as_str(cfg, "alpha").c_str(),
                           cls == "K" ? LIISS_CLASS_K : LIISS_CLASS_KINF,
                           num_or(cfg, "domain_hi", 100.0),
                           as_str(cfg, "g").c_str(), &raw));
  BetaPtr beta(raw, &liiss_beta_free);

  std::ofstream f(dir / "beta.csv", std::ios::binary);
  if (!f) throw ConfigError("cannot write beta.csv");
  beta_table_csv(f, beta.get(), s_grid, t_grid);

  if (plots) {
    std::vector<Series> series;
    for (double s : s_grid) {
      Series ser;
      ser.name = "s=" + fmtg(s, "%.3g");
      for (double t : t_grid) {
        double v = 0;
        ck_run(liiss_beta_eval(beta.get(), s, t, &v));
        ser.xs.push_back(t);
        ser.ys.push_back(v);
      }
      series.push_back(std::move(ser));
    }
    write_svg(dir / "beta.svg", "decay bound", "t", "beta(s,t)", series);
  }

  RunArtifacts out;
  out.summary = base_summary("beta_table");
  return out;
}

// Pass/fail table for the acceptance suite, shared by `liiss verify` and the
// verify_suite experiment kind.  Timings go to the console only; data files
// must not change between identical reruns.
int verify_table(uint64_t seed, const std::string& corrupt, json* summary) {
  liiss_verify* raw = nullptr;
  ck_cfg(liiss_verify_run(seed, corrupt.empty() ? nullptr : corrupt.c_str(),
                          &raw));
  VerifyPtr v(raw, &liiss_verify_free);

  const size_t n = liiss_verify_count(v.get());
  size_t failed = 0;
  json failures = json::array();
  for (size_t i = 0; i < n; ++i) {
    const bool ok = liiss_verify_passed(v.get(), i) != 0;
    if (!ok) {
      ++failed;
      failures.push_back(liiss_verify_name(v.get(), i));
    }
    std::printf("%s  %-36s %6.2fs  %s\n", ok ? "PASS" : "FAIL",
                liiss_verify_name(v.get(), i), liiss_verify_seconds(v.get(), i),
                liiss_verify_detail(v.get(), i));
  }
  std::printf("%zu/%zu criteria passed\n", n - failed, n);

  if (summary) {
    *summary = base_summary("verify_suite");
    (*summary)["violations"] = failed;
    (*summary)["failed_criteria"] = failures;
  }
  return failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// The `run` subcommand: dispatch on kind, fan sweeps across workers.

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool no_plots, uint64_t seed) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "config error: cannot open '%s'\n",
                 config_path.c_str());
    return 2;
  }
  json cfg;
  try {
    cfg = json::parse(in);  // diagnostics include line and column
  } catch (const json::parse_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (!cfg.is_object()) {
    std::fprintf(stderr, "config error: top level must be a JSON object\n");
    return 2;
  }

  try {
    if (!cfg.contains("kind"))
      throw ConfigError("config is missing required field 'kind'");
    const std::string kind = as_str(cfg, "kind");

    const fs::path out_dir =
        !out_override.empty()
            ? fs::path(out_override)
            : cfg.contains("out")
                  ? fs::path(as_str(cfg, "out"))
                  : fs::path(fs::path(config_path).stem().string() + "_out");
    const bool plots = !no_plots && bool_or(cfg, "plots", true);
    const int stride = static_cast<int>(int_or(cfg, "stride", 1));
    if (stride < 1) throw ConfigError("field 'stride' must be >= 1");

    if (kind == "verify_suite") {
      require_keys(cfg, kVerifyKeys, "verify_suite config");
      if (cfg.contains("sweep"))
        throw ConfigError("field 'sweep' is not supported for kind '" + kind +
                          "'");
      uint64_t use_seed = seed != 0 ? seed
                                    : static_cast<uint64_t>(
                                          int_or(cfg, "seed", 0x5EED));
      json summary;
      int rc = verify_table(use_seed, str_or(cfg, "corrupt", ""), &summary);
      fs::create_directories(out_dir);
      summary["config_echo"] = cfg;
      std::ofstream f(out_dir / "summary.json", std::ios::binary);
      f << summary.dump(2) << "\n";
      return rc;
    }

    if (kind == "beta_table") {
      require_keys(cfg, kBetaKeys, "beta_table config");
      if (cfg.contains("sweep"))
        throw ConfigError("field 'sweep' is not supported for kind '" + kind +
                          "'");
      fs::create_directories(out_dir);
      RunArtifacts art = run_beta_table(cfg, out_dir, plots);
      art.summary["config_echo"] = cfg;
      std::ofstream f(out_dir / "summary.json", std::ios::binary);
      f << art.summary.dump(2) << "\n";
      return art.failed ? 1 : 0;
    }

    const bool is_ode = kind == "ode_open" || kind == "ode_closed";
    const bool is_pde = kind == "pde";
    if (!is_ode && !is_pde)
      throw ConfigError(
          "field 'kind' must be one of ode_open, ode_closed, pde, "
          "beta_table, verify_suite; got '" +
          kind + "'");
    require_keys(cfg, is_ode ? kOdeKeys : kPdeKeys, kind + " config");

    std::vector<double> amplitudes;
    if (cfg.contains("sweep")) {
      const json& sw = cfg.at("sweep");
      if (!sw.is_array() || sw.empty())
        throw ConfigError("field 'sweep' must be a non-empty array of numbers");
      for (const auto& v : sw) {
        if (!v.is_number())
          throw ConfigError(
              "field 'sweep' must be a non-empty array of numbers");
        amplitudes.push_back(v.get<double>());
      }
    } else {
      amplitudes.push_back(num_or(cfg, "amplitude", 0.0));
    }
    const bool sweeping = cfg.contains("sweep");

    fs::create_directories(out_dir);
    std::vector<fs::path> run_dirs;
    for (size_t i = 0; i < amplitudes.size(); ++i) {
      fs::path d = sweeping ? out_dir / ("run_" + std::to_string(i)) : out_dir;
      fs::create_directories(d);
      run_dirs.push_back(d);
    }

    // Fan runs across a bounded worker pool; every run writes only into its
    // own directory, the merge below happens on this thread.
    std::vector<RunArtifacts> results(amplitudes.size());
    std::vector<std::exception_ptr> errors(amplitudes.size());
    const unsigned workers = std::max(
        1u, std::min(std::thread::hardware_concurrency(),
                     static_cast<unsigned>(amplitudes.size())));
    std::atomic<size_t> next{0};
    auto work = [&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= amplitudes.size()) return;
        try {
          results[i] = is_ode ? run_ode(cfg, kind == "ode_closed",
                                        amplitudes[i], run_dirs[i], plots,
                                        stride)
                              : run_pde(cfg, amplitudes[i], run_dirs[i], plots,
                                        stride);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    bool failed = false;
    if (!sweeping) {
      results[0].summary["config_echo"] = cfg;
      std::ofstream f(run_dirs[0] / "summary.json", std::ios::binary);
      f << results[0].summary.dump(2) << "\n";
      failed = results[0].failed;
    } else {
      json merged;
      merged["kind"] = kind;
      merged["runs"] = json::array();
      for (size_t i = 0; i < amplitudes.size(); ++i) {
        json per = results[i].summary;
        per["amplitude"] = amplitudes[i];
        {
          std::ofstream f(run_dirs[i] / "summary.json", std::ios::binary);
          f << per.dump(2) << "\n";
        }
        per["out_dir"] = run_dirs[i].filename().string();
        merged["runs"].push_back(per);
        failed = failed || results[i].failed;
      }
      merged["config_echo"] = cfg;
      std::ofstream f(out_dir / "summary.json", std::ios::binary);
      f << merged.dump(2) << "\n";
    }
    return failed ? 1 : 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiISS laboratory: decay-bound tables, benchmark simulations, "
               "acceptance checks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, corrupt;
  bool no_plots = false;
  uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "execute a JSON experiment config");
  run->add_option("config", config_path, "experiment configuration file")
      ->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_flag("--no-plots", no_plots, "skip SVG plot generation");
  run->add_option("--seed", seed, "seed for randomized checks");

  CLI::App* verify =
      app.add_subcommand("verify", "run the full acceptance suite");
  verify->add_option("--seed", seed, "seed for randomized checks");
  verify->add_option("--corrupt", corrupt,
                     "force the named criterion to fail (test hook)");

  std::string alpha_expr, g_expr, s_spec, t_spec, cls = "KInf";
  double domain_hi = 100.0;
  CLI::App* beta =
      app.add_subcommand("beta", "print a decay-bound table as CSV");
  beta->add_option("--alpha", alpha_expr, "comparison function, e.g. \"s^2\"")
      ->required();
  beta->add_option("--g", g_expr, "rate coefficient, e.g. \"5/(1+t)\"")
      ->required();
  beta->add_option("--s-grid", s_spec, "initial values a:b:n")->required();
  beta->add_option("--t-grid", t_spec, "times a:b:n")->required();
  beta->add_option("--class", cls, "declared class: K or KInf");
  beta->add_option("--domain-hi", domain_hi, "upper end of alpha's domain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(config_path, out_dir, no_plots, seed);

  if (verify->parsed()) {
    try {
      return verify_table(seed != 0 ? seed : 0x5EED, corrupt, nullptr);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const NumericalError& e) {
      std::fprintf(stderr, "numerical failure: %s\n", e.what());
      return 3;
    }
  }

  // beta
  try {
    if (cls != "K" && cls != "KInf") {
      std::fprintf(stderr, "config error: --class must be K or KInf\n");
      return 2;
    }
    auto s_grid = parse_grid(s_spec, "--s-grid");
    auto t_grid = parse_grid(t_spec, "--t-grid");
    liiss_beta* raw = nullptr;
    ck_cfg(liiss_beta_create(alpha_expr.c_str(),
                             cls == "K" ? LIISS_CLASS_K : LIISS_CLASS_KINF,
                             domain_hi, g_expr.c_str(), &raw));
    BetaPtr b(raw, &liiss_beta_free);
    std::ostringstream os;
    beta_table_csv(os, b.get(), s_grid, t_grid);
    std::fputs(os.str().c_str(), stdout);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
