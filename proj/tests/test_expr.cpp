#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "reggecurv/expr.hpp"

using namespace reggecurv;

namespace {

const char* kPaperF = "1/2*(x^2+y^2) - 1/12*(x^4+y^4)";
const char* kPaperK = "81*(1-x^2)*(1-y^2)/(9+x^2*(x^2-3)^2+y^2*(y^2-3)^2)^2";

// Random expression trees for the derivative/simplify properties. Constants
// and function choices are kept tame so evaluation stays finite.
Expr random_expr(std::mt19937& rng, int depth) {
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };
  if (depth <= 0 || pick(4) == 0) {
    switch (pick(3)) {
      case 0:
        return Expr::constant(0.25 + 0.1 * pick(20));
      case 1:
        return Expr::variable(Var::X);
      default:
        return Expr::variable(Var::Y);
    }
  }
  switch (pick(8)) {
    case 0:
      return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1:
      return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2:
      return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 3:
      // keep denominators away from zero
      return random_expr(rng, depth - 1) /
             (Expr::constant(2.0) + Expr::call(ExprFn::Sin, random_expr(rng, depth - 1)));
    case 4:
      return -random_expr(rng, depth - 1);
    case 5:
      return random_expr(rng, depth - 1).pow(1 + pick(3));
    case 6:
      return Expr::call(ExprFn::Sin, random_expr(rng, depth - 1));
    default:
      return Expr::call(ExprFn::Cos, random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse structure and round trip") {
  const Expr e = parse("x^2+y");
  const Expr expected = Expr::variable(Var::X).pow(2) + Expr::variable(Var::Y);
  CHECK(e.equals(expected));

  const Expr again = parse(e.to_string());
  CHECK(again.equals(e));
}

TEST_CASE("arithmetic examples") {
  CHECK(parse(kPaperF).evaluate(1.0, 1.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(parse("x*y").evaluate(2.0, 3.0) == doctest::Approx(6.0));
  CHECK(parse(kPaperK).evaluate(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("syntax errors carry offsets and expectations") {
  try {
    parse("sin(x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
    CHECK(e.expected().count(")") == 1);
  }
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse("x +"), ParseError);
  CHECK_THROWS_AS(parse("x^y"), ParseError);
}

TEST_CASE("unary minus binds tighter than power") {
  // -x^2 parses as (-x)^2
  CHECK(parse("-x^2").evaluate(3.0, 0.0) == doctest::Approx(9.0));
  CHECK(parse("0-x^2").evaluate(3.0, 0.0) == doctest::Approx(-9.0));
}

TEST_CASE("differentiate basics") {
  const Expr e = parse("x^2").differentiate(Var::X).simplify();
  CHECK(e.evaluate(5.0, 0.0) == doctest::Approx(10.0));
  const Expr z = parse("sin(x)").differentiate(Var::Y).simplify();
  CHECK(z.evaluate(0.3, 0.7) == doctest::Approx(0.0));
  const Expr df = parse(kPaperF).differentiate(Var::X);
  CHECK(df.evaluate(1.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("evaluate domain errors") {
  CHECK_THROWS_AS(parse("sqrt(x)").evaluate(-1.0, 0.0), EvalDomainError);
  CHECK_THROWS_AS(parse("1/x").evaluate(0.0, 0.0), EvalDomainError);
}

TEST_CASE("simplify identities") {
  CHECK(parse("0*x").simplify().to_string() == "0");
  CHECK(parse("x^1").simplify().to_string() == "x");
  const Expr two_x = parse("(1+1)*x").simplify();
  CHECK(two_x.equals(parse("2*x")));
}

TEST_CASE("derivative matches central finite differences") {
  std::mt19937 rng(20240811u);
  int checked = 0;
  while (checked < 100) {
    const Expr e = random_expr(rng, 6);
    const Expr dx = e.differentiate(Var::X);
    const double x = -1.0 + 2e-3 * static_cast<double>(rng() % 1000);
    const double y = -1.0 + 2e-3 * static_cast<double>(rng() % 1000);
    const double h = 1e-5;
    double v, d, fp, fm;
    try {
      v = e.evaluate(x, y);
      d = dx.evaluate(x, y);
      fp = e.evaluate(x + h, y);
      fm = e.evaluate(x - h, y);
    } catch (const EvalDomainError&) {
      continue;
    }
    if (!std::isfinite(v) || !std::isfinite(d) || std::abs(v) > 1e6 || std::abs(d) > 1e6) continue;
    const double fd = (fp - fm) / (2.0 * h);
    CHECK(std::abs(d - fd) <= 1e-6 * (1.0 + std::abs(v)) + 1e-4 * std::abs(d) * h);
    ++checked;
  }
}

TEST_CASE("simplify preserves value at random points") {
  std::mt19937 rng(77u);
  for (int i = 0; i < 50; ++i) {
    const Expr e = random_expr(rng, 5);
    const Expr s = e.simplify();
    const double x = -0.9 + 1.8e-3 * static_cast<double>(rng() % 1000);
    const double y = -0.9 + 1.8e-3 * static_cast<double>(rng() % 1000);
    double a, b;
    try {
      a = e.evaluate(x, y);
      b = s.evaluate(x, y);
    } catch (const EvalDomainError&) {
      continue;
    }
    if (!std::isfinite(a)) continue;
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("print/parse round trip on random trees") {
  std::mt19937 rng(321u);
  for (int i = 0; i < 60; ++i) {
    const Expr e = random_expr(rng, 5);
    const Expr back = parse(e.to_string());
    CHECK(back.equals(e));
  }
}
