#include "reggecurv/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "reggecurv/quad.hpp"

namespace reggecurv {

namespace {

int n_monomials(int k) { return (k + 1) * (k + 2) / 2; }

// Fixed monomial order: by total degree, then by y-exponent.
void monomial_exponents(int k, std::vector<std::array<int, 2>>& exps) {
  exps.clear();
  for (int d = 0; d <= k; ++d)
    for (int b = 0; b <= d; ++b) exps.push_back({d - b, b});
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

struct MonomialTable {
  std::vector<double> val, dx, dy, dxx, dxy, dyy;
};

// Values and local-coordinate derivatives of all monomials of degree <= k.
void eval_monomials(int k, const Vec2& xi, bool second, MonomialTable& m) {
  std::vector<std::array<int, 2>> exps;
  monomial_exponents(k, exps);
  const int n = static_cast<int>(exps.size());
  m.val.resize(n);
  m.dx.resize(n);
  m.dy.resize(n);
  if (second) {
    m.dxx.resize(n);
    m.dxy.resize(n);
    m.dyy.resize(n);
  }
  for (int i = 0; i < n; ++i) {
    const int a = exps[i][0], b = exps[i][1];
    const double xa = ipow(xi.x, a), yb = ipow(xi.y, b);
    m.val[i] = xa * yb;
    m.dx[i] = a > 0 ? a * ipow(xi.x, a - 1) * yb : 0.0;
    m.dy[i] = b > 0 ? b * xa * ipow(xi.y, b - 1) : 0.0;
    if (second) {
      m.dxx[i] = a > 1 ? a * (a - 1) * ipow(xi.x, a - 2) * yb : 0.0;
      m.dxy[i] = (a > 0 && b > 0) ? a * b * ipow(xi.x, a - 1) * ipow(xi.y, b - 1) : 0.0;
      m.dyy[i] = b > 1 ? b * (b - 1) * xa * ipow(xi.y, b - 2) : 0.0;
    }
  }
}

double shifted_legendre(int j, double s) {
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t;
  if (j == 0) return p0;
  if (j == 1) return p1;
  for (int n = 1; n < j; ++n) {
    const double p2 = ((2.0 * n + 1.0) * t * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Number of generators of the local polynomial space.
int generator_count(SpaceKind kind, int k) {
  switch (kind) {
    case SpaceKind::Lagrange:
      return n_monomials(k);
    case SpaceKind::Regge:
      return 3 * n_monomials(k);
    case SpaceKind::Bdm:
      return 2 * n_monomials(k);
    case SpaceKind::Rt:
      return 2 * n_monomials(k) + (k + 1);
  }
  return 0;
}

// Vector generator evaluation in local coordinates: value and local jacobian.
void eval_vector_generators(SpaceKind kind, int k, const Vec2& xi, std::vector<Vec2>& vals,
                            std::vector<Mat2>* jacs) {
  MonomialTable m;
  eval_monomials(k, xi, false, m);
  const int nm = static_cast<int>(m.val.size());
  const int ng = generator_count(kind, k);
  vals.assign(ng, Vec2{});
  if (jacs) jacs->assign(ng, Mat2{});
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < nm; ++i) {
      const int g = c * nm + i;
      (c == 0 ? vals[g].x : vals[g].y) = m.val[i];
      if (jacs) {
        (*jacs)[g](c, 0) = m.dx[i];
        (*jacs)[g](c, 1) = m.dy[i];
      }
    }
  if (kind == SpaceKind::Rt) {
    // xi * (xi^(k-j) eta^j), homogeneous of degree k+1
    for (int j = 0; j <= k; ++j) {
      const int g = 2 * nm + j;
      const double mx = ipow(xi.x, k - j) * ipow(xi.y, j);
      vals[g] = {xi.x * mx, xi.y * mx};
      if (jacs) {
        const double dmx = (k - j) > 0 ? (k - j) * ipow(xi.x, k - j - 1) * ipow(xi.y, j) : 0.0;
        const double dmy = j > 0 ? j * ipow(xi.x, k - j) * ipow(xi.y, j - 1) : 0.0;
        (*jacs)[g](0, 0) = mx + xi.x * dmx;
        (*jacs)[g](0, 1) = xi.x * dmy;
        (*jacs)[g](1, 0) = xi.y * dmx;
        (*jacs)[g](1, 1) = mx + xi.y * dmy;
      }
    }
  }
}

struct EdgeGeom {
  Vec2 a, b;       // global orientation a -> b (lo -> hi)
  Vec2 tangent;    // unit, global direction
  Vec2 normal;     // rot90(tangent)
  double length;
};

EdgeGeom edge_geom(const TriMesh& mesh, int e) {
  EdgeGeom g;
  g.a = mesh.vertices[mesh.edges[e][0]];
  g.b = mesh.vertices[mesh.edges[e][1]];
  const Vec2 d = g.b - g.a;
  g.length = norm(d);
  g.tangent = d / g.length;
  g.normal = rot90(g.tangent);
  return g;
}

}  // namespace

int FeSpace::local_dim() const {
  switch (kind) {
    case SpaceKind::Lagrange:
      return n_monomials(degree);
    case SpaceKind::Regge:
      return 3 * n_monomials(degree);
    case SpaceKind::Bdm:
      return div_constrained ? 3 : (degree + 1) * (degree + 2);
    case SpaceKind::Rt:
      return (degree + 1) * (degree + 3);
  }
  return 0;
}

Eigen::VectorXd FeSpace::generator_coeffs(int t, const std::vector<double>& coeffs) const {
  const auto& dofs = tri_dofs[t];
  Eigen::VectorXd local(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) local(static_cast<Eigen::Index>(i)) = coeffs[dofs[i]];
  return tri_basis[t].transpose() * local;
}

double FeSpace::eval_scalar(int t, const Vec2& p, const Eigen::VectorXd& gen, Vec2* grad) const {
  const double h = tri_scale[t];
  const Vec2 xi = (p - tri_center[t]) / h;
  MonomialTable m;
  eval_monomials(degree, xi, false, m);
  double v = 0.0;
  Vec2 g{};
  for (int i = 0; i < gen.size(); ++i) {
    v += gen(i) * m.val[i];
    if (grad) {
      g.x += gen(i) * m.dx[i];
      g.y += gen(i) * m.dy[i];
    }
  }
  if (grad) *grad = g / h;
  return v;
}

void FeSpace::scalar_basis(int t, const Vec2& p, std::vector<double>& vals, std::vector<Vec2>* grads) const {
  const double h = tri_scale[t];
  const Vec2 xi = (p - tri_center[t]) / h;
  MonomialTable m;
  eval_monomials(degree, xi, false, m);
  const int nl = static_cast<int>(tri_dofs[t].size());
  const auto& B = tri_basis[t];
  vals.assign(nl, 0.0);
  if (grads) grads->assign(nl, Vec2{});
  for (int i = 0; i < nl; ++i) {
    double v = 0.0, gx = 0.0, gy = 0.0;
    for (int g = 0; g < B.cols(); ++g) {
      v += B(i, g) * m.val[g];
      if (grads) {
        gx += B(i, g) * m.dx[g];
        gy += B(i, g) * m.dy[g];
      }
    }
    vals[i] = v;
    if (grads) (*grads)[i] = Vec2{gx, gy} / h;
  }
}

TensorJet FeSpace::eval_regge(int t, const Vec2& p, const Eigen::VectorXd& gen, bool want_dd) const {
  const double h = tri_scale[t];
  const Vec2 xi = (p - tri_center[t]) / h;
  MonomialTable m;
  eval_monomials(degree, xi, want_dd, m);
  const int nm = static_cast<int>(m.val.size());
  TensorJet j;
  j.has_dd = want_dd;
  for (int c = 0; c < 3; ++c) {
    double v = 0.0, dx = 0.0, dy = 0.0, dxx = 0.0, dxy = 0.0, dyy = 0.0;
    for (int i = 0; i < nm; ++i) {
      const double w = gen(c * nm + i);
      v += w * m.val[i];
      dx += w * m.dx[i];
      dy += w * m.dy[i];
      if (want_dd) {
        dxx += w * m.dxx[i];
        dxy += w * m.dxy[i];
        dyy += w * m.dyy[i];
      }
    }
    const int i0 = c == 0 ? 0 : (c == 1 ? 0 : 1);
    const int j0 = c == 0 ? 0 : (c == 1 ? 1 : 1);
    j.v.entry(i0, j0) = v;
    j.d[0].entry(i0, j0) = dx / h;
    j.d[1].entry(i0, j0) = dy / h;
    if (want_dd) {
      j.dd[0][0].entry(i0, j0) = dxx / (h * h);
      j.dd[0][1].entry(i0, j0) = dxy / (h * h);
      j.dd[1][0].entry(i0, j0) = dxy / (h * h);
      j.dd[1][1].entry(i0, j0) = dyy / (h * h);
    }
  }
  return j;
}

Vec2 FeSpace::eval_vector(int t, const Vec2& p, const Eigen::VectorXd& gen, Mat2* jac) const {
  const double h = tri_scale[t];
  const Vec2 xi = (p - tri_center[t]) / h;
  std::vector<Vec2> vals;
  std::vector<Mat2> jacs;
  eval_vector_generators(kind, degree, xi, vals, jac ? &jacs : nullptr);
  Vec2 v{};
  Mat2 J{};
  for (int g = 0; g < gen.size(); ++g) {
    v = v + vals[g] * gen(g);
    if (jac)
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) J(i, k) += gen(g) * jacs[g](i, k);
  }
  if (jac) *jac = J * (1.0 / h);
  return v;
}

void FeSpace::vector_basis(int t, const Vec2& p, std::vector<Vec2>& vals, std::vector<Mat2>* jacs) const {
  const double h = tri_scale[t];
  const Vec2 xi = (p - tri_center[t]) / h;
  std::vector<Vec2> gv;
  std::vector<Mat2> gj;
  eval_vector_generators(kind, degree, xi, gv, jacs ? &gj : nullptr);
  const int nl = static_cast<int>(tri_dofs[t].size());
  const auto& B = tri_basis[t];
  vals.assign(nl, Vec2{});
  if (jacs) jacs->assign(nl, Mat2{});
  for (int i = 0; i < nl; ++i) {
    for (int g = 0; g < B.cols(); ++g) {
      vals[i] = vals[i] + gv[g] * B(i, g);
      if (jacs)
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) (*jacs)[i](r, c) += B(i, g) * gj[g](r, c) / h;
    }
  }
}

namespace {

// Rows of the local generalized Vandermonde: dof functionals applied to each
// generator. Returns the matrix (n_local x n_gen) plus bookkeeping needed to
// tie local dofs to global ones.
struct LocalDofs {
  Eigen::MatrixXd vandermonde;
  std::vector<int> global;  // global dof per local row
};

LocalDofs lagrange_local_dofs(const TriMesh& mesh, int k, int t, const FeSpace& space) {
  LocalDofs out;
  const auto& tri = mesh.triangles[t];
  std::vector<Vec2> nodes;
  std::vector<int> global;
  for (int v = 0; v < 3; ++v) {
    nodes.push_back(mesh.vertices[tri[v]]);
    global.push_back(space.vertex_dof(tri[v]));
  }
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.tri_edges[t][le].first;
    const EdgeGeom eg = edge_geom(mesh, e);
    for (int j = 1; j < k; ++j) {
      nodes.push_back(eg.a + (eg.b - eg.a) * (static_cast<double>(j) / k));
      global.push_back(space.edge_dof(e, j - 1));
    }
  }
  int idx = 0;
  for (int i = 1; i <= k - 1; ++i)
    for (int jj = 1; jj <= k - 1 - i; ++jj) {
      const double l1 = static_cast<double>(i) / k, l2 = static_cast<double>(jj) / k;
      nodes.push_back(mesh.vertices[tri[0]] * (1.0 - l1 - l2) + mesh.vertices[tri[1]] * l1 +
                      mesh.vertices[tri[2]] * l2);
      global.push_back(space.tri_dof(t, idx++));
    }

  const int nl = static_cast<int>(nodes.size());
  out.vandermonde.resize(nl, nl);
  for (int r = 0; r < nl; ++r) {
    const Vec2 xi = (nodes[r] - space.tri_center[t]) / space.tri_scale[t];
    MonomialTable m;
    eval_monomials(k, xi, false, m);
    for (int g = 0; g < nl; ++g) out.vandermonde(r, g) = m.val[g];
  }
  out.global = std::move(global);
  return out;
}

LocalDofs regge_local_dofs(const TriMesh& mesh, int k, int t, const FeSpace& space) {
  LocalDofs out;
  const int nm = n_monomials(k);
  const int ng = 3 * nm;
  const int n_interior = 3 * n_monomials(k - 1);
  out.vandermonde = Eigen::MatrixXd::Zero(ng, ng);
  out.global.clear();

  const QuadRule& erule = edge_rule(2 * k + 2);
  int row = 0;
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.tri_edges[t][le].first;
    const EdgeGeom eg = edge_geom(mesh, e);
    for (int j = 0; j <= k; ++j, ++row) {
      out.global.push_back(space.edge_dof(e, j));
      for (std::size_t q = 0; q < erule.points.size(); ++q) {
        const double s = erule.points[q].x;
        const Vec2 p = eg.a + (eg.b - eg.a) * s;
        const Vec2 xi = (p - space.tri_center[t]) / space.tri_scale[t];
        MonomialTable m;
        eval_monomials(k, xi, false, m);
        const double w = erule.weights[q] * shifted_legendre(j, s);
        // sigma_tt of generator (c, i): component times tau x tau weights
        const double ttw[3] = {eg.tangent.x * eg.tangent.x, 2.0 * eg.tangent.x * eg.tangent.y,
                               eg.tangent.y * eg.tangent.y};
        for (int c = 0; c < 3; ++c)
          for (int i = 0; i < nm; ++i) out.vandermonde(row, c * nm + i) += w * ttw[c] * m.val[i];
      }
    }
  }
  if (k >= 1) {
    const QuadRule& trule = triangle_rule(2 * k);
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.vertices[tri[0]];
    const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
    const double jac = cross(d1, d2);  // 2*area
    const int nml = n_monomials(k - 1);
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < nml; ++i) out.global.push_back(space.tri_dof(t, c * nml + i));
    for (std::size_t q = 0; q < trule.points.size(); ++q) {
      const Vec2 p = v0 + d1 * trule.points[q].x + d2 * trule.points[q].y;
      const Vec2 xi = (p - space.tri_center[t]) / space.tri_scale[t];
      MonomialTable mk, ml;
      eval_monomials(k, xi, false, mk);
      eval_monomials(k - 1, xi, false, ml);
      const double w = trule.weights[q] * jac / (0.5 * jac);  // measure / |T|
      // sigma : (m * S_c), with S_0 = E11, S_1 = sym E12 (ddot weight 2), S_2 = E22
      for (int cmom = 0; cmom < 3; ++cmom) {
        const double comp_w = cmom == 1 ? 2.0 : 1.0;
        for (int i = 0; i < nml; ++i) {
          const int r = row + cmom * nml + i;
          for (int ig = 0; ig < nm; ++ig)
            out.vandermonde(r, cmom * nm + ig) += 0.5 * w * comp_w * ml.val[i] * mk.val[ig];
        }
      }
    }
    row += n_interior;
  }
  return out;
}

LocalDofs vector_local_dofs(const TriMesh& mesh, SpaceKind kind, int k, int t, const FeSpace& space) {
  LocalDofs out;
  const int ng = generator_count(kind, k);
  const int n_edge = 3 * (k + 1);
  const int n_interior = ng - n_edge;
  out.vandermonde = Eigen::MatrixXd::Zero(ng, ng);

  const QuadRule& erule = edge_rule(2 * k + 4);
  int row = 0;
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.tri_edges[t][le].first;
    const EdgeGeom eg = edge_geom(mesh, e);
    for (int j = 0; j <= k; ++j, ++row) {
      out.global.push_back(space.edge_dof(e, j));
      for (std::size_t q = 0; q < erule.points.size(); ++q) {
        const double s = erule.points[q].x;
        const Vec2 p = eg.a + (eg.b - eg.a) * s;
        const Vec2 xi = (p - space.tri_center[t]) / space.tri_scale[t];
        std::vector<Vec2> gv;
        eval_vector_generators(kind, k, xi, gv, nullptr);
        const double w = erule.weights[q] * shifted_legendre(j, s);
        for (int g = 0; g < ng; ++g) out.vandermonde(row, g) += w * dot(gv[g], eg.normal);
      }
    }
  }
  if (n_interior > 0) {
    // Complete with L2 moments against an orthonormal basis of the subspace
    // with vanishing edge moments (nullspace of the rows above).
    Eigen::MatrixXd edge_rows = out.vandermonde.topRows(n_edge);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(edge_rows);
    lu.setThreshold(1e-10);
    Eigen::MatrixXd kernel = lu.kernel();
    if (kernel.cols() != n_interior)
      throw std::runtime_error("vector space: unexpected edge-moment kernel dimension");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(ng, n_interior);

    // Gram matrix of generators over the triangle (local coordinates).
    const QuadRule& trule = triangle_rule(2 * k + 4);
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.vertices[tri[0]];
    const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
    const double jac = cross(d1, d2);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(ng, ng);
    for (std::size_t qp = 0; qp < trule.points.size(); ++qp) {
      const Vec2 p = v0 + d1 * trule.points[qp].x + d2 * trule.points[qp].y;
      const Vec2 xi = (p - space.tri_center[t]) / space.tri_scale[t];
      std::vector<Vec2> gv;
      eval_vector_generators(kind, k, xi, gv, nullptr);
      const double w = trule.weights[qp] * jac / (0.5 * jac);
      for (int gcol = 0; gcol < ng; ++gcol)
        for (int grow = 0; grow < ng; ++grow) gram(grow, gcol) += w * dot(gv[grow], gv[gcol]);
    }
    const Eigen::MatrixXd interior_rows = q.transpose() * gram;
    for (int j = 0; j < n_interior; ++j) {
      out.global.push_back(space.tri_dof(t, j));
      out.vandermonde.row(row + j) = interior_rows.row(j);
    }
  }
  return out;
}

}  // namespace

FeSpace build_space(const TriMesh& mesh, SpaceKind kind, int degree,
                    const std::set<std::string>& essential_tags) {
  FeSpace s;
  s.kind = kind;
  s.degree = degree;
  s.mesh = &mesh;

  switch (kind) {
    case SpaceKind::Lagrange:
      if (degree < 1) throw std::invalid_argument("build_space: Lagrange requires degree >= 1");
      s.dofs_per_vertex = 1;
      s.dofs_per_edge = degree - 1;
      s.dofs_per_tri = (degree - 1) * (degree - 2) / 2;
      break;
    case SpaceKind::Regge:
      if (degree < 0) throw std::invalid_argument("build_space: Regge requires degree >= 0");
      s.dofs_per_edge = degree + 1;
      s.dofs_per_tri = 3 * n_monomials(degree - 1);
      break;
    case SpaceKind::Bdm:
      if (degree < 0) throw std::invalid_argument("build_space: Bdm requires degree >= 0");
      if (degree == 0) {
        // realized as div-constrained Rt(0)
        s.kind = SpaceKind::Rt;
        s.div_constrained = true;
        s.dofs_per_edge = 1;
        s.dofs_per_tri = 0;
      } else {
        s.dofs_per_edge = degree + 1;
        s.dofs_per_tri = (degree + 1) * (degree - 1);
      }
      break;
    case SpaceKind::Rt:
      if (degree < 0) throw std::invalid_argument("build_space: Rt requires degree >= 0");
      s.dofs_per_edge = degree + 1;
      s.dofs_per_tri = degree * (degree + 1);
      break;
  }

  s.dof_count = s.dofs_per_vertex * mesh.num_vertices() + s.dofs_per_edge * mesh.num_edges() +
                s.dofs_per_tri * mesh.num_triangles();
  s.essential.assign(s.dof_count, 0);
  s.tri_dofs.resize(mesh.num_triangles());
  s.tri_basis.resize(mesh.num_triangles());
  s.tri_center.resize(mesh.num_triangles());
  s.tri_scale.resize(mesh.num_triangles());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    s.tri_center[t] = mesh.centroid(t);
    double h = 0.0;
    for (int i = 0; i < 3; ++i)
      h = std::max(h, norm(mesh.vertices[tri[i]] - mesh.vertices[tri[(i + 1) % 3]]));
    s.tri_scale[t] = h;
  }

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    LocalDofs local;
    switch (s.kind) {
      case SpaceKind::Lagrange:
        local = lagrange_local_dofs(mesh, degree, t, s);
        break;
      case SpaceKind::Regge:
        local = regge_local_dofs(mesh, degree, t, s);
        break;
      case SpaceKind::Bdm:
      case SpaceKind::Rt:
        local = vector_local_dofs(mesh, s.kind, degree, t, s);
        break;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(local.vandermonde);
    if (!lu.isInvertible())
      throw std::runtime_error("build_space: singular local dof system on triangle " + std::to_string(t));
    s.tri_basis[t] = lu.inverse().transpose();
    s.tri_dofs[t] = std::move(local.global);
  }

  if (kind == SpaceKind::Lagrange) {
    s.dof_point.assign(s.dof_count, Vec2{});
    for (int v = 0; v < mesh.num_vertices(); ++v) s.dof_point[s.vertex_dof(v)] = mesh.vertices[v];
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const EdgeGeom eg = edge_geom(mesh, e);
      for (int j = 1; j < degree; ++j)
        s.dof_point[s.edge_dof(e, j - 1)] = eg.a + (eg.b - eg.a) * (static_cast<double>(j) / degree);
    }
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles[t];
      int idx = 0;
      for (int i = 1; i <= degree - 1; ++i)
        for (int j = 1; j <= degree - 1 - i; ++j) {
          const double l1 = static_cast<double>(i) / degree, l2 = static_cast<double>(j) / degree;
          s.dof_point[s.tri_dof(t, idx++)] = mesh.vertices[tri[0]] * (1.0 - l1 - l2) +
                                             mesh.vertices[tri[1]] * l1 + mesh.vertices[tri[2]] * l2;
        }
    }
  }

  if (!essential_tags.empty()) {
    for (const auto& [e, tag] : mesh.boundary_tags) {
      if (!essential_tags.count(tag)) continue;
      if (s.kind == SpaceKind::Lagrange) {
        s.essential[s.vertex_dof(mesh.edges[e][0])] = 1;
        s.essential[s.vertex_dof(mesh.edges[e][1])] = 1;
        for (int j = 0; j < s.dofs_per_edge; ++j) s.essential[s.edge_dof(e, j)] = 1;
      } else {
        for (int j = 0; j < s.dofs_per_edge; ++j) s.essential[s.edge_dof(e, j)] = 1;
      }
    }
  }
  return s;
}

std::vector<double> FeSpace::apply_dofs(const std::function<SymMat2(const Vec2&)>& sigma,
                                        int quad_degree) const {
  if (kind != SpaceKind::Regge) throw std::logic_error("apply_dofs: Regge space expected");
  std::vector<double> vals(dof_count, 0.0);
  const QuadRule& erule = edge_rule(quad_degree);
  for (int e = 0; e < mesh->num_edges(); ++e) {
    const EdgeGeom eg = edge_geom(*mesh, e);
    for (int j = 0; j <= degree; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < erule.points.size(); ++q) {
        const double s = erule.points[q].x;
        const Vec2 p = eg.a + (eg.b - eg.a) * s;
        acc += erule.weights[q] * shifted_legendre(j, s) * sigma(p).apply(eg.tangent, eg.tangent);
      }
      vals[edge_dof(e, j)] = acc;
    }
  }
  if (degree >= 1) {
    const QuadRule& trule = triangle_rule(quad_degree);
    const int nml = n_monomials(degree - 1);
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const auto& tri = mesh->triangles[t];
      const Vec2 v0 = mesh->vertices[tri[0]];
      const Vec2 d1 = mesh->vertices[tri[1]] - v0, d2 = mesh->vertices[tri[2]] - v0;
      const double jac = cross(d1, d2);
      for (std::size_t q = 0; q < trule.points.size(); ++q) {
        const Vec2 p = v0 + d1 * trule.points[q].x + d2 * trule.points[q].y;
        const Vec2 xi = (p - tri_center[t]) / tri_scale[t];
        MonomialTable ml;
        eval_monomials(degree - 1, xi, false, ml);
        const SymMat2 sv = sigma(p);
        const double w = trule.weights[q] * jac / (0.5 * jac);
        for (int i = 0; i < nml; ++i) {
          vals[tri_dof(t, 0 * nml + i)] += 0.5 * w * ml.val[i] * sv.m11;
          vals[tri_dof(t, 1 * nml + i)] += 0.5 * w * ml.val[i] * 2.0 * sv.m12;
          vals[tri_dof(t, 2 * nml + i)] += 0.5 * w * ml.val[i] * sv.m22;
        }
      }
    }
  }
  return vals;
}

std::vector<double> FeSpace::apply_dofs_vector(const std::function<Vec2(const Vec2&)>& wfn,
                                               int quad_degree) const {
  if (!vector_valued()) throw std::logic_error("apply_dofs_vector: vector space expected");
  std::vector<double> vals(dof_count, 0.0);
  const QuadRule& erule = edge_rule(quad_degree);
  for (int e = 0; e < mesh->num_edges(); ++e) {
    const EdgeGeom eg = edge_geom(*mesh, e);
    for (int j = 0; j <= degree; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < erule.points.size(); ++q) {
        const double s = erule.points[q].x;
        const Vec2 p = eg.a + (eg.b - eg.a) * s;
        acc += erule.weights[q] * shifted_legendre(j, s) * dot(wfn(p), eg.normal);
      }
      vals[edge_dof(e, j)] = acc;
    }
  }
  // interior moments are triangle-specific (orthonormal complements); not
  // needed by any caller so far
  if (dofs_per_tri > 0)
    throw std::logic_error("apply_dofs_vector: interior dofs not supported");
  return vals;
}

DofVector regge_interpolate_fn(const std::function<SymMat2(const Vec2&)>& field, const FeSpace& space,
                               int quad_degree) {
  DofVector v;
  v.space = &space;
  v.coeffs = space.apply_dofs(field, quad_degree);
  return v;
}

DofVector regge_interpolate(const AnalyticTensorField& field, const FeSpace& space, int quad_degree) {
  return regge_interpolate_fn([&](const Vec2& p) { return field.value(p); }, space, quad_degree);
}

std::vector<std::pair<int, double>> lagrange_boundary_values(
    const FeSpace& space, const std::map<std::string, Expr>& data_by_tag) {
  if (space.kind != SpaceKind::Lagrange)
    throw std::logic_error("lagrange_boundary_values: Lagrange space expected");
  std::vector<std::pair<int, double>> out;
  std::vector<char> seen(space.dof_count, 0);
  const TriMesh& mesh = *space.mesh;
  for (const auto& [e, tag] : mesh.boundary_tags) {
    auto it = data_by_tag.find(tag);
    if (it == data_by_tag.end()) continue;
    auto emit = [&](int dof) {
      if (seen[dof]) return;
      seen[dof] = 1;
      const Vec2 p = space.dof_point[dof];
      out.emplace_back(dof, it->second.evaluate(p.x, p.y));
    };
    emit(space.vertex_dof(mesh.edges[e][0]));
    emit(space.vertex_dof(mesh.edges[e][1]));
    for (int j = 0; j < space.dofs_per_edge; ++j) emit(space.edge_dof(e, j));
  }
  return out;
}

std::string dofvector_to_json(const DofVector& v) {
  nlohmann::json j;
  switch (v.space->kind) {
    case SpaceKind::Lagrange: j["kind"] = "lagrange"; break;
    case SpaceKind::Regge: j["kind"] = "regge"; break;
    case SpaceKind::Bdm: j["kind"] = "bdm"; break;
    case SpaceKind::Rt: j["kind"] = v.space->div_constrained ? "bdm" : "rt"; break;
  }
  j["degree"] = v.space->div_constrained ? 0 : v.space->degree;
  j["dof_count"] = v.space->dof_count;
  j["coeffs"] = v.coeffs;
  return j.dump();
}

DofVector dofvector_from_json(const FeSpace& space, const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  DofVector v;
  v.space = &space;
  v.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (static_cast<int>(v.coeffs.size()) != space.dof_count)
    throw std::runtime_error("dofvector_from_json: dof count mismatch");
  return v;
}

}  // namespace reggecurv
