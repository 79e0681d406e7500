#ifndef REGGECURV_QUAD_HPP
#define REGGECURV_QUAD_HPP

#include <vector>

#include "reggecurv/tensor.hpp"

namespace reggecurv {

// Quadrature rule on the reference triangle {x,y >= 0, x+y <= 1} or the
// reference edge [0,1]. Weights sum to the reference measure (1/2 resp. 1)
// and are all positive.
struct QuadRule {
  std::vector<Vec2> points;     // edge rules store the parameter in .x
  std::vector<double> weights;
};

// Symmetric tabulated rules for low degree, collapsed tensor Gauss-Jacobi
// beyond. Exact on all monomials of total degree <= degree. 0 <= degree <= 25.
const QuadRule& triangle_rule(int degree);

// Gauss-Legendre on [0,1] with ceil((degree+1)/2) points. degree <= 63.
const QuadRule& edge_rule(int degree);

// Gauss-Legendre on [0,1] by point count (for parameter integrals).
QuadRule gauss_rule_01(int npoints);

}  // namespace reggecurv

#endif
