#ifndef REGGECURV_SPACES_HPP
#define REGGECURV_SPACES_HPP

#include <Eigen/Dense>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "reggecurv/analytic.hpp"
#include "reggecurv/geom.hpp"
#include "reggecurv/mesh.hpp"

namespace reggecurv {

enum class SpaceKind { Lagrange, Regge, Bdm, Rt };

// Finite element space with local bases constructed numerically as duals of
// the degree-of-freedom functionals on each physical triangle.
//
// Global dof layout: [vertex dofs][edge dofs][triangle-interior dofs].
// Edge dofs are defined against the global edge orientation (tangential
// moments for Regge, normal moments for Bdm/Rt, nodes ordered lo->hi for
// Lagrange), which is what makes shared dofs mean the same functional from
// both sides.
class FeSpace {
 public:
  SpaceKind kind;
  int degree = 0;
  const TriMesh* mesh = nullptr;
  int dof_count = 0;

  int dofs_per_vertex = 0;
  int dofs_per_edge = 0;
  int dofs_per_tri = 0;

  std::vector<std::vector<int>> tri_dofs;   // local -> global
  std::vector<Eigen::MatrixXd> tri_basis;   // dual-basis coefficients over generators
  std::vector<char> essential;              // per global dof
  std::vector<Vec2> dof_point;              // Lagrange nodal coordinates
  std::vector<Vec2> tri_center;
  std::vector<double> tri_scale;

  // Bdm(0) is realized as Rt(0) with the element-wise divergence locked at
  // solve time.
  bool div_constrained = false;

  int vertex_dof(int v) const { return v; }
  int edge_dof(int e, int j) const {
    return dofs_per_vertex * mesh->num_vertices() + e * dofs_per_edge + j;
  }
  int tri_dof(int t, int j) const {
    return dofs_per_vertex * mesh->num_vertices() + dofs_per_edge * mesh->num_edges() +
           t * dofs_per_tri + j;
  }
  int local_dim() const;

  bool scalar_valued() const { return kind == SpaceKind::Lagrange; }
  bool vector_valued() const { return kind == SpaceKind::Bdm || kind == SpaceKind::Rt; }

  // Generator-space coefficients of a field on one triangle; evaluation then
  // reduces to a monomial contraction per point.
  Eigen::VectorXd generator_coeffs(int t, const std::vector<double>& coeffs) const;

  // Scalar fields (Lagrange).
  double eval_scalar(int t, const Vec2& p, const Eigen::VectorXd& gen_coeffs, Vec2* grad = nullptr) const;
  void scalar_basis(int t, const Vec2& p, std::vector<double>& vals, std::vector<Vec2>* grads = nullptr) const;

  // Symmetric tensor fields (Regge); derivatives are element-local.
  TensorJet eval_regge(int t, const Vec2& p, const Eigen::VectorXd& gen_coeffs, bool want_dd) const;

  // Vector fields (Bdm/Rt); jac(i,j) = d_j w^i, divergence = trace.
  Vec2 eval_vector(int t, const Vec2& p, const Eigen::VectorXd& gen_coeffs, Mat2* jac = nullptr) const;
  void vector_basis(int t, const Vec2& p, std::vector<Vec2>& vals, std::vector<Mat2>* jacs = nullptr) const;

  // Applies this space's dof functionals numerically to an arbitrary field
  // (over-integrated with the given quadrature degree). Used by the canonical
  // Regge interpolant and by the dof-duality tests.
  std::vector<double> apply_dofs(const std::function<SymMat2(const Vec2&)>& sigma, int quad_degree) const;
  std::vector<double> apply_dofs_vector(const std::function<Vec2(const Vec2&)>& w, int quad_degree) const;
};

struct DofVector {
  const FeSpace* space = nullptr;
  std::vector<double> coeffs;
};

FeSpace build_space(const TriMesh& mesh, SpaceKind kind, int degree,
                    const std::set<std::string>& essential_tags = {});

// Canonical Regge interpolant: edge tangential-tangential moments and
// interior symmetric moments match the input field.
DofVector regge_interpolate(const AnalyticTensorField& field, const FeSpace& space, int quad_degree);
DofVector regge_interpolate_fn(const std::function<SymMat2(const Vec2&)>& field, const FeSpace& space,
                               int quad_degree);

// Nodal interpolation of expression data on Lagrange boundary dofs of the
// given tags; returns (dof index, value) pairs.
std::vector<std::pair<int, double>> lagrange_boundary_values(
    const FeSpace& space, const std::map<std::string, Expr>& data_by_tag);

std::string dofvector_to_json(const DofVector& v);
DofVector dofvector_from_json(const FeSpace& space, const std::string& text);

}  // namespace reggecurv

#endif
