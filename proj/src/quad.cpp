#include "reggecurv/quad.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace reggecurv {

namespace {

// Golub-Welsch: nodes/weights on [-1,1] from the monic three-term recurrence
// p_{k+1} = (x - a_k) p_k - b_k p_{k-1}, with mu0 the weight integral.
void golub_welsch(const std::vector<double>& a, const std::vector<double>& b, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = a[i];
    if (i + 1 < n) {
      const double off = std::sqrt(b[i + 1]);
      J(i, i + 1) = off;
      J(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

// Gauss-Legendre on [0,1].
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (int k = 1; k < n; ++k) b[k] = k * k / (4.0 * k * k - 1.0);
  std::vector<double> xn, wn;
  golub_welsch(a, b, 2.0, xn, wn);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (1.0 + xn[i]);
    w[i] = 0.5 * wn[i];
  }
}

// Gauss-Jacobi with weight (1-t) on [0,1]; integrates f against (1-t) dt.
void gauss_jacobi10_01(int n, std::vector<double>& x, std::vector<double>& w) {
  // alpha=1, beta=0 on [-1,1], weight (1-s), mu0 = 2
  std::vector<double> a(n), b(n, 0.0);
  for (int k = 0; k < n; ++k) a[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k) {
    const double d = 2.0 * k + 1.0;
    b[k] = k * (k + 1.0) / (d * d);
  }
  std::vector<double> xn, wn;
  golub_welsch(a, b, 2.0, xn, wn);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (1.0 + xn[i]);
    w[i] = 0.25 * wn[i];  // (1-s)/2 * ds/2
  }
}

QuadRule collapsed_triangle_rule(int degree) {
  const int n = (degree + 2) / 2 + 1;  // one point of margin past exactness
  std::vector<double> xi, wi, eta, we;
  gauss_legendre01(n, xi, wi);
  gauss_jacobi10_01(n, eta, we);
  QuadRule rule;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({xi[i] * (1.0 - eta[j]), eta[j]});
      rule.weights.push_back(wi[i] * we[j]);
    }
  }
  return rule;
}

void push_orbit3(QuadRule& rule, double l1, double w) {
  // barycentric (l1, l1, 1-2*l1), weight in area coordinates summing to 1
  const double l3 = 1.0 - 2.0 * l1;
  rule.points.push_back({l1, l1});
  rule.points.push_back({l3, l1});
  rule.points.push_back({l1, l3});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(0.5 * w);
}

QuadRule tabulated_triangle_rule(int degree) {
  QuadRule rule;
  if (degree <= 1) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(0.5);
  } else if (degree == 2) {
    push_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
  } else {
    // degree 5, 7 points
    const double s15 = std::sqrt(15.0);
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(0.5 * 9.0 / 40.0);
    push_orbit3(rule, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    push_orbit3(rule, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
  }
  return rule;
}

}  // namespace

const QuadRule& triangle_rule(int degree) {
  if (degree < 0 || degree > 25) throw std::out_of_range("triangle_rule: degree out of range [0,25]");
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it != cache.end()) return it->second;
  QuadRule rule = degree <= 5 ? tabulated_triangle_rule(degree) : collapsed_triangle_rule(degree);
  return cache.emplace(degree, std::move(rule)).first->second;
}

QuadRule gauss_rule_01(int npoints) {
  if (npoints < 1) throw std::out_of_range("gauss_rule_01: need at least one point");
  std::vector<double> x, w;
  gauss_legendre01(npoints, x, w);
  QuadRule rule;
  for (int i = 0; i < npoints; ++i) {
    rule.points.push_back({x[i], 0.0});
    rule.weights.push_back(w[i]);
  }
  return rule;
}

const QuadRule& edge_rule(int degree) {
  if (degree < 0 || degree > 63) throw std::out_of_range("edge_rule: degree out of range [0,63]");
  const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x, w;
  gauss_legendre01(n, x, w);
  QuadRule rule;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back({x[i], 0.0});
    rule.weights.push_back(w[i]);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace reggecurv
