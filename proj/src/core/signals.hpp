#ifndef LIISS_CORE_SIGNALS_HPP
#define LIISS_CORE_SIGNALS_HPP

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/expr.hpp"
#include "core/numerics.hpp"

namespace liiss {

// Scalar signal of t >= 0: a parsed expression, a sampled table with linear
// interpolation, or an arbitrary callable.
class TimeSignal {
 public:
  static TimeSignal from_expr(Expr e, bool declared_nonneg = false);
  static TimeSignal from_expr(std::string_view src, bool declared_nonneg = false,
                              const std::map<std::string, double>& constants = {});
  static TimeSignal from_samples(std::vector<double> t, std::vector<double> v,
                                 bool declared_nonneg = false);
  static TimeSignal from_fn(std::function<double(double)> f, bool declared_nonneg,
                            std::string label);
  TimeSignal() = default;

  double operator()(double t) const { return fn_(t); }
  bool declared_nonneg() const { return nonneg_; }
  const std::string& label() const { return label_; }
  bool valid() const { return static_cast<bool>(fn_); }

  // Sampled nonnegativity check; throws InvalidArgument on a value below
  // -1e-12 when the signal is declared nonnegative.
  void check_nonneg(double t_hi, size_t n = 1001) const;

 private:
  std::function<double(double)> fn_;
  bool nonneg_ = false;
  std::string label_;
};

enum class FnClass { K, KInf, L };

// Comparison function on [0, domain_hi]: class K / K-infinity (increasing,
// zero at zero) or class L (decreasing to zero).  Declared membership is
// certified by sampled checks only.
class ComparisonFn {
 public:
  static ComparisonFn from_expr(Expr e, FnClass declared, double domain_hi,
                                bool validate = true);
  static ComparisonFn from_expr(std::string_view src, FnClass declared,
                                double domain_hi, bool validate = true,
                                const std::map<std::string, double>& constants = {});
  static ComparisonFn from_fn(std::function<double(double)> f, FnClass declared,
                              double domain_hi, std::string label,
                              bool validate = true);
  ComparisonFn() = default;

  double operator()(double s) const { return fn_(s); }
  FnClass declared_class() const { return cls_; }
  double domain_hi() const { return hi_; }
  const std::string& label() const { return label_; }
  bool is_identity() const { return identity_; }
  bool valid() const { return static_cast<bool>(fn_); }

  // Monotone inversion on [0, domain_hi] via bisection.
  double inverse(double y, const Tolerance& tol = {1e-14, 1e-12, 200}) const;

  // Sampled class membership check (grid of `n` points on [0, domain_hi]).
  // Throws InvalidArgument naming the first violated property.
  void validate(size_t n = 321) const;

 private:
  std::function<double(double)> fn_;
  FnClass cls_ = FnClass::K;
  double hi_ = 0;
  std::string label_;
  bool identity_ = false;
};

// Cached cumulative integral F(t) = integral of f over [anchor, t] chained
// from previously resolved anchors.  Queries may arrive in any order;
// monotone query sequences integrate only over the new increment.
// Internally synchronized.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, Tolerance quad = {});

  double value(double t) const;

 private:
  std::function<double(double)> f_;
  Tolerance quad_;
  mutable std::map<double, double> anchors_;
  mutable std::mutex mu_;
};

}  // namespace liiss

#endif
