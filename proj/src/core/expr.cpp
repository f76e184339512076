#include "core/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace liiss {

namespace {

double pow_int(double base, long long e) {
  if (e < 0) return 1.0 / pow_int(base, -e);
  double r = 1.0, b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace

class ExprParser {
 public:
  ExprParser(std::string_view src, std::span<const std::string> vars,
             const std::map<std::string, double>& constants)
      : src_(src), vars_(vars), constants_(constants) {}

  std::vector<Expr::Node> run() {
    std::vector<Expr::Node> code;
    parse_expr(code);
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input '" +
                           std::string(src_.substr(pos_)) + "'",
                       pos_);
    return code;
  }

 private:
  using Node = Expr::Node;
  using Op = Expr::Op;

  std::string_view src_;
  std::span<const std::string> vars_;
  const std::map<std::string, double>& constants_;
  size_t pos_ = 0;

  [[noreturn]] void err(const std::string& what) { throw ParseError(what + " at position " + std::to_string(pos_), pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  void parse_expr(std::vector<Node>& code) {
    parse_term(code);
    for (;;) {
      if (eat('+')) {
        parse_term(code);
        code.push_back({Op::Add});
      } else if (eat('-')) {
        parse_term(code);
        code.push_back({Op::Sub});
      } else {
        return;
      }
    }
  }

  void parse_term(std::vector<Node>& code) {
    parse_unary(code);
    for (;;) {
      if (eat('*')) {
        parse_unary(code);
        code.push_back({Op::Mul});
      } else if (eat('/')) {
        parse_unary(code);
        code.push_back({Op::Div});
      } else {
        return;
      }
    }
  }

  void parse_unary(std::vector<Node>& code) {
    bool neg = false;
    for (;;) {
      if (eat('-')) neg = !neg;
      else if (eat('+')) continue;
      else break;
    }
    parse_postfix(code);
    if (neg) code.push_back({Op::Neg});
  }

  void parse_postfix(std::vector<Node>& code) {
    parse_primary(code);
    while (eat('^')) {
      bool neg = eat('-');
      double e = parse_number("exponent");
      if (neg) e = -e;
      double r = std::round(e);
      if (r == e && std::abs(e) < 1e9)
        code.push_back({Op::PowInt, e});
      else
        code.push_back({Op::Pow, e});
    }
  }

  double parse_number(const char* what) {
    skip_ws();
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) err(std::string("expected ") + what);
    pos_ += static_cast<size_t>(end - begin);
    return v;
  }

  void parse_primary(std::vector<Node>& code) {
    skip_ws();
    if (pos_ >= src_.size()) err("unexpected end of expression");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      code.push_back({Op::Const, parse_number("number")});
      return;
    }
    if (c == '(') {
      ++pos_;
      parse_expr(code);
      if (!eat(')')) err("expected ')'");
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      std::string name(src_.substr(start, pos_ - start));
      if (peek() == '(') {
        parse_call(name, code);
        return;
      }
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          code.push_back({Op::Var, 0, static_cast<int>(i)});
          return;
        }
      }
      if (name == "pi") {
        code.push_back({Op::Const, std::numbers::pi});
        return;
      }
      auto it = constants_.find(name);
      if (it != constants_.end()) {
        code.push_back({Op::Const, it->second});
        return;
      }
      pos_ = start;
      err("unknown name '" + name + "'");
    }
    err(std::string("unexpected character '") + c + "'");
  }

  void parse_call(const std::string& name, std::vector<Node>& code) {
    struct Fn { const char* name; Op op; int args; };
    static constexpr Fn table[] = {
        {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1}, {"exp", Op::Exp, 1},
        {"sqrt", Op::Sqrt, 1}, {"qroot", Op::Qroot, 1}, {"abs", Op::Abs, 1},
        {"min", Op::Min, 2},   {"max", Op::Max, 2},
    };
    for (const Fn& fn : table) {
      if (name == fn.name) {
        if (!eat('(')) err("expected '(' after '" + name + "'");
        parse_expr(code);
        for (int i = 1; i < fn.args; ++i) {
          if (!eat(',')) err("'" + name + "' takes " + std::to_string(fn.args) + " arguments");
          parse_expr(code);
        }
        if (!eat(')')) err("expected ')'");
        code.push_back({fn.op});
        return;
      }
    }
    err("unknown function '" + name + "'");
  }
};

Expr Expr::parse(std::string_view src, std::span<const std::string> vars,
                 const std::map<std::string, double>& constants) {
  ExprParser parser(src, vars, constants);
  Expr e;
  e.code_ = std::make_shared<const std::vector<Node>>(parser.run());
  e.src_ = std::string(src);
  e.nvars_ = vars.size();
  return e;
}

bool Expr::is_identity() const {
  return nvars_ == 1 && code_ && code_->size() == 1 &&
         (*code_)[0].op == Op::Var;
}

double Expr::eval(std::span<const double> args) const {
  if (args.size() != nvars_)
    fail(ErrorCode::DimensionMismatch,
         "expression '" + src_ + "' expects " + std::to_string(nvars_) +
             " arguments, got " + std::to_string(args.size()));
  double stack[64];
  size_t top = 0;
  for (const Node& n : *code_) {
    switch (n.op) {
      case Op::Const: stack[top++] = n.num; break;
      case Op::Var:   stack[top++] = args[static_cast<size_t>(n.var)]; break;
      case Op::Add:   --top; stack[top - 1] += stack[top]; break;
      case Op::Sub:   --top; stack[top - 1] -= stack[top]; break;
      case Op::Mul:   --top; stack[top - 1] *= stack[top]; break;
      case Op::Div:   --top; stack[top - 1] /= stack[top]; break;
      case Op::Neg:   stack[top - 1] = -stack[top - 1]; break;
      case Op::Sin:   stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::Cos:   stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::Exp:   stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::Sqrt:  stack[top - 1] = std::sqrt(stack[top - 1]); break;
      case Op::Qroot: stack[top - 1] = std::sqrt(std::sqrt(stack[top - 1])); break;
      case Op::Abs:   stack[top - 1] = std::abs(stack[top - 1]); break;
      case Op::Min:   --top; stack[top - 1] = std::min(stack[top - 1], stack[top]); break;
      case Op::Max:   --top; stack[top - 1] = std::max(stack[top - 1], stack[top]); break;
      case Op::Pow:   stack[top - 1] = std::pow(stack[top - 1], n.num); break;
      case Op::PowInt:
        stack[top - 1] = pow_int(stack[top - 1], static_cast<long long>(n.num));
        break;
    }
    if (top >= 63) fail(ErrorCode::InvalidArgument, "expression too deep: " + src_);
  }
  return stack[0];
}

double Expr::eval1(double a) const {
  const double args[1] = {a};
  return eval(args);
}

double Expr::eval2(double a, double b) const {
  const double args[2] = {a, b};
  return eval(args);
}

double Expr::eval3(double a, double b, double c) const {
  const double args[3] = {a, b, c};
  return eval(args);
}

}  // namespace liiss
