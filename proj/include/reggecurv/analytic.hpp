#ifndef REGGECURV_ANALYTIC_HPP
#define REGGECURV_ANALYTIC_HPP

#include <array>

#include "reggecurv/expr.hpp"
#include "reggecurv/geom.hpp"

namespace reggecurv {

// Symmetric 2x2 tensor field given by three expressions in (x, y), with all
// first and second partials precomputed symbolically. Serves both as the
// exact metric gex and as smooth test tensors sigma.
class AnalyticTensorField {
 public:
  AnalyticTensorField() = default;
  AnalyticTensorField(const Expr& e11, const Expr& e12, const Expr& e22);

  // Graph metric g = I + grad(f) grad(f)^T for a scalar expression f.
  static AnalyticTensorField graph_metric(const Expr& f);
  static AnalyticTensorField identity();

  SymMat2 value(const Vec2& p) const;
  TensorJet jet(const Vec2& p, bool want_dd = true) const;

  const Expr& entry(int i, int j) const { return e_[i + j]; }

 private:
  // e_[0] = g11, e_[1] = g12, e_[2] = g22; d_[k][c], dd_[k][l][c]
  std::array<Expr, 3> e_;
  std::array<std::array<Expr, 3>, 2> d_;
  std::array<std::array<std::array<Expr, 3>, 2>, 2> dd_;
};

using AnalyticMetric = AnalyticTensorField;

// Pointwise oracles combining a metric field with the geometry kernel.
double gauss_curvature_at(const AnalyticMetric& g, const Vec2& p);
// Geodesic curvature of a straight line through p with Euclidean-unit
// tangent tau, counterclockwise element-boundary convention.
double geodesic_curvature_at(const AnalyticMetric& g, const Vec2& p, const Vec2& unit_tau);
// Connection 1-form coefficients for the frame e_i = g^{-1/2} E_i.
Vec2 connection_oneform_at(const AnalyticMetric& g, const Vec2& p);

// Throws if g is not SPD (eigenvalues > tol) at the given point.
void require_spd(const SymMat2& g, double tol = 1e-12);

}  // namespace reggecurv

#endif
