#include "reggecurv/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace reggecurv {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

SparseSym SparseSym::assemble(int n, const std::vector<Triplet>& triplets) {
  std::vector<Eigen::Triplet<double>> ts;
  ts.reserve(triplets.size());
  for (const auto& t : triplets) ts.emplace_back(t.row, t.col, t.value);
  SparseSym m(n);
  m.mat_.setFromTriplets(ts.begin(), ts.end());
  m.mat_.makeCompressed();
  return m;
}

std::vector<double> SparseSym::multiply(const std::vector<double>& x) const {
  return from_eigen(mat_ * to_eigen(x));
}

void SparseSym::constrain(std::vector<double>& rhs, const std::vector<int>& essential_dofs,
                          const std::vector<double>& values) {
  std::vector<char> mask(size(), 0);
  std::vector<double> val(size(), 0.0);
  for (std::size_t i = 0; i < essential_dofs.size(); ++i) {
    mask[essential_dofs[i]] = 1;
    val[essential_dofs[i]] = values[i];
  }
  // move known columns to the rhs
  for (int col = 0; col < mat_.outerSize(); ++col) {
    if (mask[col]) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat_, col); it; ++it) {
      if (mask[it.row()]) rhs[col] -= it.value() * val[it.row()];
    }
  }
  // wipe rows/cols and place a unit diagonal
  for (int col = 0; col < mat_.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat_, col); it; ++it) {
      if (mask[it.row()] || mask[col]) it.valueRef() = (it.row() == col) ? 1.0 : 0.0;
    }
  }
  for (int d : essential_dofs) rhs[d] = val[d];
}

std::vector<double> cholesky_solve(const SparseSym& a, const std::vector<double>& b) {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  llt.compute(a.eigen());
  if (llt.info() != Eigen::Success)
    throw SolverError("cholesky_solve: factorization failed (matrix not SPD)");
  const Eigen::VectorXd x = llt.solve(to_eigen(b));
  return from_eigen(x);
}

std::vector<double> cg_solve(const SparseSym& a, const std::vector<double>& b, double tol, int maxit) {
  const auto& m = a.eigen();
  const Eigen::VectorXd rhs = to_eigen(b);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd dinv(rhs.size());
  for (Eigen::Index i = 0; i < rhs.size(); ++i) {
    const double d = m.coeff(i, i);
    if (d <= 0.0)
      throw SolverError("cg_solve: nonpositive diagonal at index " + std::to_string(i));
    dinv(i) = 1.0 / d;
  }
  Eigen::VectorXd r = rhs - m * x;
  Eigen::VectorXd z = dinv.asDiagonal() * r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return from_eigen(x);
  for (int it = 0; it < maxit; ++it) {
    if (r.norm() <= tol * bnorm) break;
    const Eigen::VectorXd ap = m * p;
    const double pap = p.dot(ap);
    if (pap <= 0.0) throw SolverError("cg_solve: breakdown, matrix not SPD");
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    z = dinv.asDiagonal() * r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (r.norm() > tol * bnorm) throw SolverError("cg_solve: no convergence within maxit");
  return from_eigen(x);
}

std::vector<double> lu_solve(const SparseSym& a, const std::vector<double>& b) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a.eigen());
  if (lu.info() != Eigen::Success) throw SolverError("lu_solve: factorization failed");
  return from_eigen(lu.solve(to_eigen(b)));
}

std::vector<double> solve_spd(const SparseSym& a, const std::vector<double>& b) {
  if (a.size() <= 200000) return cholesky_solve(a, b);
  return cg_solve(a, b, 1e-12, 20000);
}

}  // namespace reggecurv
