#include "reggecurv/norms.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "reggecurv/quad.hpp"

namespace reggecurv {

namespace {

struct TriMap {
  Vec2 v0, d1, d2;
  double jac;
};

TriMap tri_map(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  TriMap m;
  m.v0 = mesh.vertices[tri[0]];
  m.d1 = mesh.vertices[tri[1]] - m.v0;
  m.d2 = mesh.vertices[tri[2]] - m.v0;
  m.jac = cross(m.d1, m.d2);
  return m;
}

}  // namespace

ScalarFieldFn scalar_fe_field(const DofVector& u) {
  const FeSpace* space = u.space;
  auto gen = std::make_shared<std::vector<Eigen::VectorXd>>();
  for (int t = 0; t < space->mesh->num_triangles(); ++t)
    gen->push_back(space->generator_coeffs(t, u.coeffs));
  return [space, gen](int t, const Vec2& p) { return space->eval_scalar(t, p, (*gen)[t]); };
}

VectorFieldFn vector_fe_field(const DofVector& w) {
  const FeSpace* space = w.space;
  auto gen = std::make_shared<std::vector<Eigen::VectorXd>>();
  for (int t = 0; t < space->mesh->num_triangles(); ++t)
    gen->push_back(space->generator_coeffs(t, w.coeffs));
  return [space, gen](int t, const Vec2& p) { return space->eval_vector(t, p, (*gen)[t]); };
}

double l2_error_scalar(const TriMesh& mesh, const ScalarFieldFn& a, const ScalarFieldFn& b,
                       int quad_degree) {
  const QuadRule& rule = triangle_rule(quad_degree);
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriMap m = tri_map(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 p = m.v0 + m.d1 * rule.points[q].x + m.d2 * rule.points[q].y;
      const double d = a(t, p) - b(t, p);
      acc += rule.weights[q] * m.jac * d * d;
    }
  }
  return std::sqrt(acc);
}

double l2_error_vector(const TriMesh& mesh, const VectorFieldFn& a, const VectorFieldFn& b,
                       int quad_degree) {
  const QuadRule& rule = triangle_rule(quad_degree);
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriMap m = tri_map(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 p = m.v0 + m.d1 * rule.points[q].x + m.d2 * rule.points[q].y;
      const Vec2 d = a(t, p) - b(t, p);
      acc += rule.weights[q] * m.jac * dot(d, d);
    }
  }
  return std::sqrt(acc);
}

double hminus1_error(const TriMesh& mesh, int k, const ScalarFieldFn& err) {
  const int degree = k + 3;
  std::set<std::string> all_tags;
  for (const auto& [e, tag] : mesh.boundary_tags) all_tags.insert(tag);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, degree, all_tags);

  const int qd = std::min(25, 2 * degree + 4);
  const QuadRule& rule = triangle_rule(qd);
  std::vector<Triplet> trips;
  std::vector<double> rhs(V.dof_count, 0.0);
  std::vector<double> vals;
  std::vector<Vec2> grads;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = V.tri_dofs[t];
    const int nl = static_cast<int>(dofs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nl, nl);
    const TriMap m = tri_map(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 p = m.v0 + m.d1 * rule.points[q].x + m.d2 * rule.points[q].y;
      const double w = rule.weights[q] * m.jac;
      V.scalar_basis(t, p, vals, &grads);
      const double e = err(t, p);
      for (int a = 0; a < nl; ++a) {
        rhs[dofs[a]] += w * e * vals[a];
        for (int b = 0; b < nl; ++b) local(a, b) += w * dot(grads[a], grads[b]);
      }
    }
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b) trips.push_back({dofs[a], dofs[b], local(a, b)});
  }
  SparseSym stiff = SparseSym::assemble(V.dof_count, trips);
  std::vector<int> ess;
  std::vector<double> zero;
  for (int d = 0; d < V.dof_count; ++d)
    if (V.essential[d]) {
      ess.push_back(d);
      zero.push_back(0.0);
    }
  stiff.constrain(rhs, ess, zero);
  const std::vector<double> w = solve_spd(stiff, rhs);

  // full H1 norm of w_h
  DofVector wh;
  wh.space = &V;
  wh.coeffs = w;
  const ScalarFieldFn wf = scalar_fe_field(wh);
  double acc = 0.0;
  auto gen = std::make_shared<std::vector<Eigen::VectorXd>>();
  for (int t = 0; t < mesh.num_triangles(); ++t) gen->push_back(V.generator_coeffs(t, w));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriMap m = tri_map(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 p = m.v0 + m.d1 * rule.points[q].x + m.d2 * rule.points[q].y;
      Vec2 grad;
      const double v = V.eval_scalar(t, p, (*gen)[t], &grad);
      acc += rule.weights[q] * m.jac * (v * v + dot(grad, grad));
    }
  }
  return std::sqrt(acc);
}

void fill_eoc(std::vector<ConvergenceRecord>& records) {
  for (std::size_t l = 1; l < records.size(); ++l) {
    for (const auto& [name, e] : records[l].errors) {
      auto prev = records[l - 1].errors.find(name);
      if (prev == records[l - 1].errors.end()) continue;
      if (e <= 0.0 || prev->second <= 0.0) continue;
      const double hr = records[l - 1].h_max / records[l].h_max;
      records[l].eoc[name] = std::log(prev->second / e) / std::log(hr);
    }
  }
}

std::string records_to_csv(const std::vector<ConvergenceRecord>& records) {
  std::ostringstream os;
  std::vector<std::string> names;
  if (!records.empty())
    for (const auto& [name, v] : records.front().errors) names.push_back(name);
  os << "level,n,h,ndof";
  for (const auto& n : names) os << "," << n;
  for (const auto& n : names) os << "," << n << "_eoc";
  os << "\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    os << r.level << "," << r.n << "," << fmt(r.h_max) << "," << r.ndof;
    for (const auto& n : names) os << "," << fmt(r.errors.at(n));
    for (const auto& n : names) {
      auto it = r.eoc.find(n);
      os << "," << (it == r.eoc.end() ? std::string("-") : fmt(it->second));
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace reggecurv
