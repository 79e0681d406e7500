#include "reggecurv/analytic.hpp"

#include <stdexcept>

namespace reggecurv {

AnalyticTensorField::AnalyticTensorField(const Expr& e11, const Expr& e12, const Expr& e22) {
  e_ = {e11.simplify(), e12.simplify(), e22.simplify()};
  for (int k = 0; k < 2; ++k) {
    const Var vk = k == 0 ? Var::X : Var::Y;
    for (int c = 0; c < 3; ++c) d_[k][c] = e_[c].differentiate(vk).simplify();
    for (int l = 0; l < 2; ++l) {
      const Var vl = l == 0 ? Var::X : Var::Y;
      for (int c = 0; c < 3; ++c) dd_[k][l][c] = d_[k][c].differentiate(vl).simplify();
    }
  }
}

AnalyticTensorField AnalyticTensorField::graph_metric(const Expr& f) {
  const Expr fx = f.differentiate(Var::X).simplify();
  const Expr fy = f.differentiate(Var::Y).simplify();
  const Expr one = Expr::constant(1.0);
  return AnalyticTensorField(one + fx * fx, fx * fy, one + fy * fy);
}

AnalyticTensorField AnalyticTensorField::identity() {
  return AnalyticTensorField(Expr::constant(1.0), Expr::constant(0.0), Expr::constant(1.0));
}

SymMat2 AnalyticTensorField::value(const Vec2& p) const {
  return {e_[0].evaluate(p.x, p.y), e_[1].evaluate(p.x, p.y), e_[2].evaluate(p.x, p.y)};
}

TensorJet AnalyticTensorField::jet(const Vec2& p, bool want_dd) const {
  TensorJet j;
  j.v = value(p);
  for (int k = 0; k < 2; ++k)
    j.d[k] = {d_[k][0].evaluate(p.x, p.y), d_[k][1].evaluate(p.x, p.y), d_[k][2].evaluate(p.x, p.y)};
  if (want_dd) {
    j.has_dd = true;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        j.dd[k][l] = {dd_[k][l][0].evaluate(p.x, p.y), dd_[k][l][1].evaluate(p.x, p.y),
                      dd_[k][l][2].evaluate(p.x, p.y)};
  }
  return j;
}

double gauss_curvature_at(const AnalyticMetric& g, const Vec2& p) {
  return gauss_curvature(g.jet(p, true));
}

double geodesic_curvature_at(const AnalyticMetric& g, const Vec2& p, const Vec2& unit_tau) {
  const TensorJet j = g.jet(p, false);
  return geodesic_curvature(j, edge_frame(j.v, unit_tau));
}

Vec2 connection_oneform_at(const AnalyticMetric& g, const Vec2& p) {
  return connection_coefficients(g.jet(p, false));
}

void require_spd(const SymMat2& g, double tol) {
  // eigenvalues of a symmetric 2x2
  const double mean = 0.5 * g.trace();
  const double disc = std::sqrt(std::max(0.0, mean * mean - g.det()));
  if (mean - disc <= tol) throw std::runtime_error("metric not positive definite at sample point");
}

}  // namespace reggecurv
