#ifndef LIISS_CORE_EXPR_HPP
#define LIISS_CORE_EXPR_HPP

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/errors.hpp"

namespace liiss {

// Arithmetic mini-language for scalar coefficient functions.
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('+'|'-')* postfix
//   postfix := primary ('^' ('-')? number)*
//   primary := number | name | func '(' expr [',' expr] ')' | '(' expr ')'
//
// One-argument functions: sin cos exp sqrt qroot abs (qroot = fourth root).
// Two-argument functions: min max.  `pi` is built in; additional named
// constants may be bound at parse time.  Exponents are numeric literals;
// integer exponents are evaluated sign-correctly for negative bases.
class Expr {
 public:
  // `vars` fixes the evaluation argument order.  Unknown names error.
  static Expr parse(std::string_view src, std::span<const std::string> vars,
                    const std::map<std::string, double>& constants = {});

  double eval(std::span<const double> args) const;
  double eval1(double a) const;
  double eval2(double a, double b) const;
  double eval3(double a, double b, double c) const;

  size_t arity() const { return nvars_; }
  const std::string& source() const { return src_; }
  // True when the parsed tree is exactly the single variable.
  bool is_identity() const;

 private:
  enum class Op : unsigned char {
    Const, Var, Add, Sub, Mul, Div, Neg,
    Sin, Cos, Exp, Sqrt, Qroot, Abs, Min, Max, Pow, PowInt,
  };
  struct Node {
    Op op;
    double num = 0;  // Const value or Pow exponent
    int var = 0;
  };

  std::shared_ptr<const std::vector<Node>> code_;  // postorder program
  std::string src_;
  size_t nvars_ = 0;

  friend class ExprParser;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t offset)
      : Error(ErrorCode::Parse, what), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

}  // namespace liiss

#endif
