#ifndef REGGECURV_LIFT_HPP
#define REGGECURV_LIFT_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "reggecurv/analytic.hpp"
#include "reggecurv/linalg.hpp"
#include "reggecurv/spaces.hpp"

namespace reggecurv {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Action of a distributional object on each basis function of a test space.
// Entries on essential dofs are assembled but ignored by the liftings.
struct Functional {
  const FeSpace* space = nullptr;
  std::vector<double> values;

  double action(const std::vector<double>& coeffs) const;
};

// Boundary curvature data. Dirichlet tags carry K(gex) traces, Neumann tags
// carry the geodesic curvature kappa(gex); the exact metric supplies the
// arclength weight sqrt(gex_tt) and the default corner angles.
struct BoundaryData {
  std::set<std::string> dirichlet_tags;
  std::set<std::string> neumann_tags;
  std::map<std::string, Expr> dirichlet;
  std::map<std::string, Expr> neumann;
  std::map<int, double> neumann_corner_angles;  // vertex id -> gex interior angle
  const AnalyticMetric* gex = nullptr;
};

// Pointwise jet providers, so the same assembly runs on Regge coefficient
// fields, analytic fields, differences and blended paths G(t).
using JetFn = std::function<TensorJet(int tri, const Vec2& p, bool want_dd)>;

JetFn regge_jets(const DofVector& g);
JetFn analytic_jets(const AnalyticTensorField& f);
JetFn difference_jets(const JetFn& a, const JetFn& b);     // a - b
JetFn blend_identity_jets(const JetFn& g, double t);       // delta + t (g - delta)
JetFn constant_identity_jets();

struct AssemblyQuad {
  int volume = 8;
  int edge = 8;
  static AssemblyQuad for_degrees(int k_regge, int k_test);
};

// --- Gauss curvature -------------------------------------------------------

// Element, edge, vertex and Neumann-data contributions of the distributional
// curvature against Lagrange test functions. Edges on Dirichlet tags are
// skipped; interior edges receive both sides.
Functional assemble_curvature_rhs(const JetFn& g, const FeSpace& V, const BoundaryData& bd,
                                  const AssemblyQuad& q);
Functional assemble_curvature_rhs(const DofVector& g, const FeSpace& V, const BoundaryData& bd,
                                  const AssemblyQuad& q);

// Solves the sqrt(det g)-weighted mass system with Dirichlet data eliminated.
DofVector lift_curvature(const JetFn& g, const FeSpace& V, const BoundaryData& bd,
                         const AssemblyQuad& q);
DofVector lift_curvature(const DofVector& g, const FeSpace& V, const BoundaryData& bd,
                         const AssemblyQuad& q);

// --- Connection 1-form -----------------------------------------------------

// Volume and interior-edge terms follow the frame construction; boundary
// edges whose normal trace is unconstrained need exact-metric data (the
// boundary part of the metric flow delta -> g), else the lift loses half an
// order at the boundary. Pass gex_boundary = nullptr to omit the data term.
Functional assemble_connection_rhs(const JetFn& g, const FeSpace& W, const AssemblyQuad& q,
                                   const AnalyticMetric* gex_boundary = nullptr);
Functional assemble_connection_rhs(const DofVector& g, const FeSpace& W, const AssemblyQuad& q,
                                   const AnalyticMetric* gex_boundary = nullptr);
DofVector lift_connection(const JetFn& g, const FeSpace& W, const AssemblyQuad& q,
                          const AnalyticMetric* gex_boundary = nullptr);
DofVector lift_connection(const DofVector& g, const FeSpace& W, const AssemblyQuad& q,
                          const AnalyticMetric* gex_boundary = nullptr);

// Action of the distributional connection on an arbitrary piecewise smooth
// g-normal-continuous field (evaluated per triangle).
double connection_action(const JetFn& g, const TriMesh& mesh,
                         const std::function<Vec2(int, const Vec2&)>& w, const AssemblyQuad& q);

// --- Covariant curl --------------------------------------------------------

// Two algebraically equal forms of the distributional covariant curl; both
// are kept as a cross-check.
enum class CurlForm { Boundary, RotAdjoint };

Functional assemble_curl_rhs(const JetFn& g, const JetFn& sigma, const FeSpace& W,
                             const AssemblyQuad& q, CurlForm form = CurlForm::Boundary);
DofVector lift_curl(const JetFn& g, const JetFn& sigma, const FeSpace& W, const AssemblyQuad& q,
                    CurlForm form = CurlForm::Boundary);

// --- Covariant incompatibility --------------------------------------------

enum class IncPath { Composed, Direct };

Functional assemble_inc_rhs(const JetFn& g, const JetFn& sigma, const FeSpace& V,
                            const AssemblyQuad& q, IncPath path = IncPath::Composed);
DofVector lift_inc(const JetFn& g, const JetFn& sigma, const FeSpace& V, const AssemblyQuad& q,
                   IncPath path = IncPath::Composed);

// --- Mass matrices and projections ----------------------------------------

SparseSym scalar_mass(const FeSpace& V, const JetFn* metric_weight, const AssemblyQuad& q);
SparseSym vector_mass(const FeSpace& W, const AssemblyQuad& q);

// L2 projection of a functional: essential dofs pinned to zero (or to given
// Dirichlet values for scalar spaces). Handles the div-constrained Bdm(0).
DofVector project_scalar(const SparseSym& mass, const Functional& f,
                         const std::vector<std::pair<int, double>>& dirichlet_values);
DofVector project_vector(const FeSpace& W, const SparseSym& mass, const Functional& f);

// --- Integral representation check ----------------------------------------

// Max over free test dofs of | int K_h u sqrt(det g) - 1/2 int_0^1 b_h |,
// with the t-integral evaluated by Gauss-Legendre with t_points points.
double verify_integral_representation(const DofVector& g, const FeSpace& V, int t_points,
                                      const AssemblyQuad& q);

// L2 norm of a lifted field given its coefficients and functional,
// ||w_h||^2 = c' M c = c' F for mass-solve liftings.
double lifted_l2_norm(const SparseSym& mass, const DofVector& field);

}  // namespace reggecurv

#endif
