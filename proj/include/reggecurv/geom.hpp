#ifndef REGGECURV_GEOM_HPP
#define REGGECURV_GEOM_HPP

#include "reggecurv/tensor.hpp"

namespace reggecurv {

// Pointwise differential-geometry kernel. Every operation takes jets (values
// plus partial derivatives) of the metric or of a symmetric test tensor, so
// each formula can be exercised in isolation against finite differences.

// Values and partials of a symmetric 2x2 tensor field at a point.
// d[k] = d/dx^k of the entries; dd[k][l] = d^2/(dx^k dx^l), symmetric in (k,l).
struct TensorJet {
  SymMat2 v;
  SymMat2 d[2];
  bool has_dd = false;
  SymMat2 dd[2][2];

  TensorJet scaled(double s) const;
  TensorJet plus(const TensorJet& o, double s = 1.0) const;  // this + s*o
};

using MetricJet = TensorJet;
using SigmaJet = TensorJet;

// Euclidean-unit tangent tau along an oriented straight edge, the inward
// Euclidean normal nu = rot90(tau), the metric normal nu_g = g^{-1} nu, and
// the g-orthonormal pair (that, nhat).
struct EdgeFrame {
  Vec2 tau, nu;
  Vec2 nu_g;
  Vec2 that, nhat;
  double g_tt = 0.0;  // g(tau, tau)
};

EdgeFrame edge_frame(const SymMat2& g, const Vec2& unit_tau);

// Christoffel symbols of the first kind, [i][j][l] = Gamma_{ijl}.
struct Christoffel1 {
  double c[2][2][2];
};
// Second kind, [i][j][k] = Gamma_{ij}^k.
struct Christoffel2 {
  double c[2][2][2];
};

Christoffel1 christoffel_first(const MetricJet& g);
Christoffel2 christoffel_second(const MetricJet& g);
// First-kind symbols of an arbitrary symmetric tensor jet (same formula).
Christoffel1 christoffel_first_of(const TensorJet& s);
// Gamma^l_{lq} = d_q(det g) / (2 det g).
double christoffel_trace(const MetricJet& g, int q);

// K = R_1221 / det g; requires second derivatives.
double gauss_curvature(const MetricJet& g);

// Straight-edge geodesic curvature kappa and the edge-source weight
// kappa * sqrt(g_tt) that multiplies dl in element-boundary integrals.
double geodesic_curvature(const MetricJet& g, const EdgeFrame& f);
double geodesic_curvature_weight(const MetricJet& g, const EdgeFrame& f);

// Counterclockwise angle from b to a in the g-inner product, in (-pi, pi].
double signed_angle(const SymMat2& g, const Vec2& a, const Vec2& b);
// Interior vertex angle between incoming and outgoing boundary tangents.
double interior_angle(const SymMat2& g, const Vec2& tau_in, const Vec2& tau_out);
// Reduce an angle to the principal value in (-pi, pi].
double principal_angle(double theta);

// Matrix square root of an SPD matrix and its partials.
SymMat2 spd_sqrt(const SymMat2& g);
void spd_sqrt_derivative(const MetricJet& g, SymMat2& b, SymMat2 db[2]);

// g-orthonormal frame e_i = g^{-1/2} E_i with partials de[k][i] = d_k e_i.
struct Frame {
  Vec2 e[2];
  Vec2 de[2][2];
};
Frame orthonormal_frame(const MetricJet& g);

// Connection 1-form coefficients omega_i = g(e_1, nabla_{d_i} e_2) for the
// frame above, symmetrized.
Vec2 connection_coefficients(const MetricJet& g);

// Covariant curl of a symmetric tensor, coefficients in dx^i.
Vec2 curl_g_sigma(const MetricJet& g, const SigmaJet& s);
// Covariant incompatibility; requires second derivatives of g and sigma.
double inc_g_sigma(const MetricJet& g, const SigmaJet& s);

// rot_g of a scalar with gradient du, components in the coordinate frame.
Vec2 rot_g_scalar(const MetricJet& g, const Vec2& du);
// rot_g of a vector field X with Jacobian dX (dX(i,j) = d_j X^i);
// out(m,p) = [rot_g X]^{mp}.
Mat2 rot_g_vector(const MetricJet& g, const Vec2& X, const Mat2& dX);

// Covariant divergence of a symmetric tensor (vector result) and of a vector
// field (scalar result).
Vec2 div_g_tensor(const MetricJet& g, const SigmaJet& s);
double div_g_vector(const MetricJet& g, const Vec2& X, const Mat2& dX);

// S_g sigma = sigma - tr_g(sigma) g, as a jet (first derivatives carried
// through; second derivatives too when both inputs have them).
TensorJet sg_transform(const MetricJet& g, const SigmaJet& s);

// div_g S_g sigma together with its partial derivatives, for the identity
// div_g div_g S_g sigma = -inc_g sigma. Requires second derivatives.
void div_g_tensor_jet(const MetricJet& g, const TensorJet& s, Vec2& value, Mat2& deriv);

// Hodge star of a 1-form with coefficients mu_i dx^i; returns the
// coefficients of the resulting 1-form.
Vec2 hodge_star_oneform(const SymMat2& g, const Vec2& mu);
// Lower an index: X^i -> (g X)_i.
Vec2 flat(const SymMat2& g, const Vec2& X);

// sigma(nhat, that) on an edge, and its derivative along tau
// (tau^i d_i of the scalar function sigma_{nhat that}).
double sigma_nt_hat(const SymMat2& g, const SymMat2& s, const Vec2& unit_tau);
double d_tau_sigma_nt_hat(const MetricJet& g, const SigmaJet& s, const Vec2& unit_tau);

// Boundary integrand of the distributional covariant curl:
// (g_tt sigma_{nu tau} - g_{nu tau} sigma_tt) / (g_tt sqrt(det g)).
double curl_boundary_density(const SymMat2& g, const SymMat2& s, const Vec2& unit_tau);

}  // namespace reggecurv

#endif
