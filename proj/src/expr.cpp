#include "reggecurv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace reggecurv {

ParseError::ParseError(std::string msg, std::size_t offset, std::set<std::string> expected)
    : std::runtime_error(msg + " at offset " + std::to_string(offset)),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

ExprPtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprPtr make_const(double v) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.value = v;
  return make(n);
}

ExprPtr make_var(Var v) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.var = v;
  return make(n);
}

ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
  ExprNode n;
  n.kind = k;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(n);
}

ExprPtr make_neg(ExprPtr a) {
  ExprNode n;
  n.kind = ExprKind::Neg;
  n.lhs = std::move(a);
  return make(n);
}

ExprPtr make_pow(ExprPtr a, int e) {
  ExprNode n;
  n.kind = ExprKind::IntPow;
  n.lhs = std::move(a);
  n.exponent = e;
  return make(n);
}

ExprPtr make_call(ExprFn fn, ExprPtr a) {
  ExprNode n;
  n.kind = ExprKind::Call;
  n.fn = fn;
  n.lhs = std::move(a);
  return make(n);
}

bool is_const(const ExprPtr& e, double v) {
  return e->kind == ExprKind::Constant && e->value == v;
}

double eval_node(const ExprNode& n, double x, double y) {
  switch (n.kind) {
    case ExprKind::Constant:
      return n.value;
    case ExprKind::Variable:
      return n.var == Var::X ? x : y;
    case ExprKind::Add:
      return eval_node(*n.lhs, x, y) + eval_node(*n.rhs, x, y);
    case ExprKind::Sub:
      return eval_node(*n.lhs, x, y) - eval_node(*n.rhs, x, y);
    case ExprKind::Mul:
      return eval_node(*n.lhs, x, y) * eval_node(*n.rhs, x, y);
    case ExprKind::Div: {
      const double den = eval_node(*n.rhs, x, y);
      if (den == 0.0) throw EvalDomainError("division by zero");
      return eval_node(*n.lhs, x, y) / den;
    }
    case ExprKind::Neg:
      return -eval_node(*n.lhs, x, y);
    case ExprKind::IntPow: {
      const double b = eval_node(*n.lhs, x, y);
      int e = n.exponent;
      if (e < 0) {
        if (b == 0.0) throw EvalDomainError("zero raised to a negative power");
        return 1.0 / eval_node(ExprNode{ExprKind::IntPow, 0.0, Var::X, ExprFn::Sin, -e, n.lhs, nullptr}, x, y);
      }
      double r = 1.0, p = b;
      while (e > 0) {
        if (e & 1) r *= p;
        p *= p;
        e >>= 1;
      }
      return r;
    }
    case ExprKind::Call: {
      const double a = eval_node(*n.lhs, x, y);
      switch (n.fn) {
        case ExprFn::Sin:
          return std::sin(a);
        case ExprFn::Cos:
          return std::cos(a);
        case ExprFn::Exp:
          return std::exp(a);
        case ExprFn::Sqrt:
          if (a < 0.0) throw EvalDomainError("sqrt of negative value");
          return std::sqrt(a);
        case ExprFn::Atan:
          return std::atan(a);
      }
    }
  }
  throw std::logic_error("expr: unreachable");
}

ExprPtr diff_node(const ExprPtr& e, Var v);

ExprPtr diff_call(const ExprNode& n, Var v) {
  const ExprPtr da = diff_node(n.lhs, v);
  switch (n.fn) {
    case ExprFn::Sin:
      return make_binary(ExprKind::Mul, make_call(ExprFn::Cos, n.lhs), da);
    case ExprFn::Cos:
      return make_neg(make_binary(ExprKind::Mul, make_call(ExprFn::Sin, n.lhs), da));
    case ExprFn::Exp:
      return make_binary(ExprKind::Mul, make_call(ExprFn::Exp, n.lhs), da);
    case ExprFn::Sqrt:
      return make_binary(ExprKind::Div, da,
                         make_binary(ExprKind::Mul, make_const(2.0), make_call(ExprFn::Sqrt, n.lhs)));
    case ExprFn::Atan:
      return make_binary(ExprKind::Div, da,
                         make_binary(ExprKind::Add, make_const(1.0), make_pow(n.lhs, 2)));
  }
  throw std::logic_error("expr: unreachable");
}

ExprPtr diff_node(const ExprPtr& e, Var v) {
  const ExprNode& n = *e;
  switch (n.kind) {
    case ExprKind::Constant:
      return make_const(0.0);
    case ExprKind::Variable:
      return make_const(n.var == v ? 1.0 : 0.0);
    case ExprKind::Add:
      return make_binary(ExprKind::Add, diff_node(n.lhs, v), diff_node(n.rhs, v));
    case ExprKind::Sub:
      return make_binary(ExprKind::Sub, diff_node(n.lhs, v), diff_node(n.rhs, v));
    case ExprKind::Mul:
      return make_binary(ExprKind::Add, make_binary(ExprKind::Mul, diff_node(n.lhs, v), n.rhs),
                         make_binary(ExprKind::Mul, n.lhs, diff_node(n.rhs, v)));
    case ExprKind::Div:
      // (a/b)' = a'/b - a b'/b^2
      return make_binary(
          ExprKind::Sub, make_binary(ExprKind::Div, diff_node(n.lhs, v), n.rhs),
          make_binary(ExprKind::Div, make_binary(ExprKind::Mul, n.lhs, diff_node(n.rhs, v)),
                      make_pow(n.rhs, 2)));
    case ExprKind::Neg:
      return make_neg(diff_node(n.lhs, v));
    case ExprKind::IntPow:
      if (n.exponent == 0) return make_const(0.0);
      return make_binary(ExprKind::Mul, make_const(static_cast<double>(n.exponent)),
                         make_binary(ExprKind::Mul, make_pow(n.lhs, n.exponent - 1),
                                     diff_node(n.lhs, v)));
    case ExprKind::Call:
      return diff_call(n, v);
  }
  throw std::logic_error("expr: unreachable");
}

ExprPtr simplify_node(const ExprPtr& e) {
  const ExprNode& n = *e;
  switch (n.kind) {
    case ExprKind::Constant:
    case ExprKind::Variable:
      return e;
    case ExprKind::Add: {
      ExprPtr a = simplify_node(n.lhs), b = simplify_node(n.rhs);
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_const(a->value + b->value);
      return make_binary(ExprKind::Add, a, b);
    }
    case ExprKind::Sub: {
      ExprPtr a = simplify_node(n.lhs), b = simplify_node(n.rhs);
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return make_neg(b);
      if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_const(a->value - b->value);
      return make_binary(ExprKind::Sub, a, b);
    }
    case ExprKind::Mul: {
      ExprPtr a = simplify_node(n.lhs), b = simplify_node(n.rhs);
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_const(a->value * b->value);
      return make_binary(ExprKind::Mul, a, b);
    }
    case ExprKind::Div: {
      ExprPtr a = simplify_node(n.lhs), b = simplify_node(n.rhs);
      if (is_const(b, 1.0)) return a;
      if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
      if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && b->value != 0.0)
        return make_const(a->value / b->value);
      return make_binary(ExprKind::Div, a, b);
    }
    case ExprKind::Neg: {
      ExprPtr a = simplify_node(n.lhs);
      if (a->kind == ExprKind::Constant) return make_const(-a->value);
      if (a->kind == ExprKind::Neg) return a->lhs;
      return make_neg(a);
    }
    case ExprKind::IntPow: {
      ExprPtr a = simplify_node(n.lhs);
      if (n.exponent == 0) return make_const(1.0);
      if (n.exponent == 1) return a;
      if (a->kind == ExprKind::Constant) {
        ExprNode p{ExprKind::IntPow, 0.0, Var::X, ExprFn::Sin, n.exponent, a, nullptr};
        return make_const(eval_node(p, 0.0, 0.0));
      }
      return make_pow(a, n.exponent);
    }
    case ExprKind::Call: {
      ExprPtr a = simplify_node(n.lhs);
      return make_call(n.fn, a);
    }
  }
  throw std::logic_error("expr: unreachable");
}

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::IntPow:
      return 3;
    case ExprKind::Neg:
      return 4;
    default:
      return 5;
  }
}

void print_node(const ExprNode& n, std::ostream& os, int parent_prec) {
  const int prec = precedence(n.kind);
  const bool parens = prec < parent_prec;
  if (parens) os << '(';
  switch (n.kind) {
    case ExprKind::Constant: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      std::string s = tmp.str();
      if (n.value < 0.0) {
        os << '(' << s << ')';
      } else {
        os << s;
      }
      break;
    }
    case ExprKind::Variable:
      os << (n.var == Var::X ? 'x' : 'y');
      break;
    case ExprKind::Add:
      print_node(*n.lhs, os, prec);
      os << '+';
      print_node(*n.rhs, os, prec + 1);
      break;
    case ExprKind::Sub:
      print_node(*n.lhs, os, prec);
      os << '-';
      print_node(*n.rhs, os, prec + 1);
      break;
    case ExprKind::Mul:
      print_node(*n.lhs, os, prec);
      os << '*';
      print_node(*n.rhs, os, prec + 1);
      break;
    case ExprKind::Div:
      print_node(*n.lhs, os, prec);
      os << '/';
      print_node(*n.rhs, os, prec + 1);
      break;
    case ExprKind::Neg:
      os << '-';
      print_node(*n.lhs, os, prec);
      break;
    case ExprKind::IntPow:
      print_node(*n.lhs, os, prec + 1);
      os << '^' << n.exponent;
      break;
    case ExprKind::Call:
      switch (n.fn) {
        case ExprFn::Sin: os << "sin"; break;
        case ExprFn::Cos: os << "cos"; break;
        case ExprFn::Exp: os << "exp"; break;
        case ExprFn::Sqrt: os << "sqrt"; break;
        case ExprFn::Atan: os << "atan"; break;
      }
      os << '(';
      print_node(*n.lhs, os, 0);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Constant:
      return a.value == b.value;
    case ExprKind::Variable:
      return a.var == b.var;
    case ExprKind::IntPow:
      return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
    case ExprKind::Call:
      return a.fn == b.fn && nodes_equal(*a.lhs, *b.lhs);
    case ExprKind::Neg:
      return nodes_equal(*a.lhs, *b.lhs);
    default:
      return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
  }
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input", {"end of input"});
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected) {
    throw ParseError("syntax error: " + msg, pos_, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'", {std::string(1, c)});
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (accept('+')) {
        e = make_binary(ExprKind::Add, e, parse_term());
      } else if (accept('-')) {
        e = make_binary(ExprKind::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_power();
    for (;;) {
      if (accept('*')) {
        e = make_binary(ExprKind::Mul, e, parse_power());
      } else if (accept('/')) {
        e = make_binary(ExprKind::Div, e, parse_power());
      } else {
        return e;
      }
    }
  }

  // Unary minus binds tighter than '^': -x^2 parses as (-x)^2.
  ExprPtr parse_power() {
    ExprPtr base = parse_unary();
    while (accept('^')) {
      base = make_pow(base, parse_int_exponent());
    }
    return base;
  }

  ExprPtr parse_unary() {
    if (accept('-')) return make_neg(parse_unary());
    return parse_atom();
  }

  int parse_int_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      pos_ = start;
      fail("expected integer exponent", {"integer"});
    }
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000) fail("exponent too large", {"integer <= 1000"});
      ++pos_;
    }
    return static_cast<int>(neg ? -v : v);
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input", {"number", "identifier", "("});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("unexpected character", {"number", "identifier", "("});
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t esave = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = esave;  // 'e' was not an exponent marker
      }
    }
    const std::string tok = text_.substr(start, pos_ - start);
    if (tok.empty() || tok == ".") {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return make_const(std::strtod(tok.c_str(), nullptr));
  }

  ExprPtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make_var(Var::X);
    if (name == "y") return make_var(Var::Y);
    ExprFn fn;
    if (name == "sin") fn = ExprFn::Sin;
    else if (name == "cos") fn = ExprFn::Cos;
    else if (name == "exp") fn = ExprFn::Exp;
    else if (name == "sqrt") fn = ExprFn::Sqrt;
    else if (name == "atan") fn = ExprFn::Atan;
    else {
      pos_ = start;
      fail("unknown identifier '" + name + "'", {"x", "y", "sin", "cos", "exp", "sqrt", "atan"});
    }
    expect('(');
    ExprPtr arg = parse_expr();
    expect(')');
    return make_call(fn, arg);
  }
};

}  // namespace

Expr Expr::constant(double v) { return Expr(make_const(v)); }
Expr Expr::variable(Var v) { return Expr(make_var(v)); }

double Expr::evaluate(double x, double y) const {
  const double r = eval_node(*node_, x, y);
  return r;
}

Expr Expr::differentiate(Var v) const { return Expr(diff_node(node_, v)); }

Expr Expr::simplify() const { return Expr(simplify_node(node_)); }

std::string Expr::to_string() const {
  std::ostringstream os;
  print_node(*node_, os, 0);
  return os.str();
}

Expr Expr::operator+(const Expr& o) const { return Expr(make_binary(ExprKind::Add, node_, o.node_)); }
Expr Expr::operator-(const Expr& o) const { return Expr(make_binary(ExprKind::Sub, node_, o.node_)); }
Expr Expr::operator*(const Expr& o) const { return Expr(make_binary(ExprKind::Mul, node_, o.node_)); }
Expr Expr::operator/(const Expr& o) const { return Expr(make_binary(ExprKind::Div, node_, o.node_)); }
Expr Expr::operator-() const { return Expr(make_neg(node_)); }
Expr Expr::pow(int n) const { return Expr(make_pow(node_, n)); }
Expr Expr::call(ExprFn fn, const Expr& arg) { return Expr(make_call(fn, arg.ptr())); }

bool Expr::equals(const Expr& o) const {
  if (!node_ || !o.node_) return node_ == o.node_;
  return nodes_equal(*node_, *o.node_);
}

Expr parse(const std::string& text) { return Expr(Parser(text).run()); }

}  // namespace reggecurv
