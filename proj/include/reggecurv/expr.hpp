#ifndef REGGECURV_EXPR_HPP
#define REGGECURV_EXPR_HPP

#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace reggecurv {

// Scalar expressions in the two variables x and y, with symbolic
// differentiation. Nodes are immutable and shared, so Expr values are cheap
// to copy and safe to use from multiple threads.

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Neg, IntPow, Call };

enum class ExprFn { Sin, Cos, Exp, Sqrt, Atan };

enum class Var { X = 0, Y = 1 };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0;       // Constant
  Var var = Var::X;         // Variable
  ExprFn fn = ExprFn::Sin;  // Call
  int exponent = 0;         // IntPow
  ExprPtr lhs, rhs;         // children (lhs only for Neg/IntPow/Call)
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t offset, std::set<std::string> expected);
  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

class EvalDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expr {
 public:
  Expr() : node_(nullptr) {}
  explicit Expr(ExprPtr node) : node_(std::move(node)) {}

  static Expr constant(double v);
  static Expr variable(Var v);

  bool empty() const { return node_ == nullptr; }
  const ExprNode& node() const { return *node_; }
  ExprPtr ptr() const { return node_; }

  double evaluate(double x, double y) const;
  Expr differentiate(Var v) const;
  Expr simplify() const;
  std::string to_string() const;

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr operator-() const;
  Expr pow(int n) const;
  static Expr call(ExprFn fn, const Expr& arg);

  // Structural equality (same tree shape and payloads).
  bool equals(const Expr& o) const;

 private:
  ExprPtr node_;
};

// Grammar: precedence unary minus > ^ > * / > + -, parentheses, calls
// sin/cos/exp/sqrt/atan, numeric literals with optional decimal/exponent,
// variables x and y. Exponents of ^ are integer literals.
Expr parse(const std::string& text);

}  // namespace reggecurv

#endif
