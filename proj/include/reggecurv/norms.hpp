#ifndef REGGECURV_NORMS_HPP
#define REGGECURV_NORMS_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "reggecurv/lift.hpp"
#include "reggecurv/spaces.hpp"

namespace reggecurv {

// Scalar and vector reference callables, evaluated per triangle so
// discontinuous FE fields can be differenced against them.
using ScalarFieldFn = std::function<double(int tri, const Vec2& p)>;
using VectorFieldFn = std::function<Vec2(int tri, const Vec2& p)>;

ScalarFieldFn scalar_fe_field(const DofVector& u);
VectorFieldFn vector_fe_field(const DofVector& w);

double l2_error_scalar(const TriMesh& mesh, const ScalarFieldFn& a, const ScalarFieldFn& b,
                       int quad_degree);
double l2_error_vector(const TriMesh& mesh, const VectorFieldFn& a, const VectorFieldFn& b,
                       int quad_degree);

// Discrete H^-1 norm of err: solve -laplace(w) = err with homogeneous
// Dirichlet data on all of the boundary using Lagrange elements of degree
// k+3, return the full H^1 norm of w.
double hminus1_error(const TriMesh& mesh, int k, const ScalarFieldFn& err);

struct ConvergenceRecord {
  int level = 0;
  int n = 0;
  double h_max = 0.0;
  int ndof = 0;
  std::map<std::string, double> errors;
  std::map<std::string, double> eoc;
};

// EOC_l = log(e_{l-1}/e_l) / log(h_{l-1}/h_l); first level and exactly
// resolved errors are left unset (rendered as "-" in CSV).
void fill_eoc(std::vector<ConvergenceRecord>& records);

// Columns: level,n,h,ndof,<norm>...,<norm>_eoc with 17 significant digits.
std::string records_to_csv(const std::vector<ConvergenceRecord>& records);

}  // namespace reggecurv

#endif
