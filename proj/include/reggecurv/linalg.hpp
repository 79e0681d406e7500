#ifndef REGGECURV_LINALG_HPP
#define REGGECURV_LINALG_HPP

#include <Eigen/Sparse>
#include <vector>

namespace reggecurv {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  int row = 0, col = 0;
  double value = 0.0;
};

// Compressed sparse symmetric matrix (full pattern stored).
class SparseSym {
 public:
  SparseSym() = default;
  explicit SparseSym(int n) : mat_(n, n) {}

  static SparseSym assemble(int n, const std::vector<Triplet>& triplets);

  int size() const { return static_cast<int>(mat_.rows()); }
  const Eigen::SparseMatrix<double>& eigen() const { return mat_; }

  std::vector<double> multiply(const std::vector<double>& x) const;

  // Symmetric elimination of essential dofs: rows/cols replaced by identity,
  // right-hand side updated so constrained entries solve to the given values.
  void constrain(std::vector<double>& rhs, const std::vector<int>& essential_dofs,
                 const std::vector<double>& values);

 private:
  Eigen::SparseMatrix<double> mat_;
};

// Direct sparse Cholesky (SPD). Reports the pivot index on breakdown.
std::vector<double> cholesky_solve(const SparseSym& a, const std::vector<double>& b);

// Jacobi-preconditioned conjugate gradients, ||Ax-b|| <= tol*||b||.
std::vector<double> cg_solve(const SparseSym& a, const std::vector<double>& b, double tol = 1e-12,
                             int maxit = 10000);

// Pivoted sparse LU for symmetric indefinite systems (saddle points); the
// unpivoted LDL^T loses accuracy on the tiny multiplier regularization.
std::vector<double> lu_solve(const SparseSym& a, const std::vector<double>& b);

// Direct Cholesky up to 200k dofs, CG beyond.
std::vector<double> solve_spd(const SparseSym& a, const std::vector<double>& b);

}  // namespace reggecurv

#endif
