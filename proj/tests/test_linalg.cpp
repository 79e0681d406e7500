#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "reggecurv/linalg.hpp"

using namespace reggecurv;

TEST_CASE("identity system") {
  std::vector<Triplet> t;
  for (int i = 0; i < 5; ++i) t.push_back({i, i, 1.0});
  const SparseSym a = SparseSym::assemble(5, t);
  const std::vector<double> b{1, 2, 3, 4, 5};
  const auto x = cholesky_solve(a, b);
  for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(b[i]));
}

TEST_CASE("1d poisson against the closed-form inverse") {
  // T = tridiag(-1, 2, -1), n = 4; (T^{-1})_ij = min(i,j) (n+1-max(i,j)) / (n+1)
  const int n = 4;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i + 1 < n) {
      t.push_back({i, i + 1, -1.0});
      t.push_back({i + 1, i, -1.0});
    }
  }
  const SparseSym a = SparseSym::assemble(n, t);
  for (int col = 0; col < n; ++col) {
    std::vector<double> e(n, 0.0);
    e[col] = 1.0;
    const auto x = cholesky_solve(a, e);
    for (int i = 0; i < n; ++i) {
      const double exact =
          (std::min(i, col) + 1.0) * (n - std::max(i, col)) / (n + 1.0);
      CHECK(x[i] == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("direct and cg agree on a random spd system") {
  std::mt19937 rng(2024u);
  const int n = 50;
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = -1.0 + 2e-4 * static_cast<double>(rng() % 10000);
  Eigen::MatrixXd m = r.transpose() * r + 0.5 * Eigen::MatrixXd::Identity(n, n);
  std::vector<Triplet> trips;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trips.push_back({i, j, m(i, j)});
  const SparseSym a = SparseSym::assemble(n, trips);
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) b[i] = -1.0 + 2e-4 * static_cast<double>(rng() % 10000);
  const auto xd = cholesky_solve(a, b);
  const auto xc = cg_solve(a, b, 1e-14, 2000);
  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(xd[i]));
    diff = std::max(diff, std::abs(xd[i] - xc[i]));
  }
  CHECK(diff <= 1e-8 * scale);

  // direct solve residual
  const auto ax = a.multiply(xd);
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < n; ++i) {
    rn += (ax[i] - b[i]) * (ax[i] - b[i]);
    bn += b[i] * b[i];
  }
  CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(bn));
}

TEST_CASE("constrain pins essential dofs exactly") {
  const int n = 6;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 3.0});
    if (i + 1 < n) {
      t.push_back({i, i + 1, -1.0});
      t.push_back({i + 1, i, -1.0});
    }
  }
  SparseSym a = SparseSym::assemble(n, t);
  std::vector<double> b(n, 1.0);
  a.constrain(b, {0, 5}, {2.5, -1.25});
  const auto x = cholesky_solve(a, b);
  CHECK(x[0] == doctest::Approx(2.5));
  CHECK(x[5] == doctest::Approx(-1.25));
}

TEST_CASE("non-spd reported") {
  std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, -1.0}};
  const SparseSym a = SparseSym::assemble(2, t);
  CHECK_THROWS_AS(cholesky_solve(a, {1.0, 1.0}), SolverError);
}
