#include "reggecurv/lift.hpp"

#include <cmath>

#include "reggecurv/quad.hpp"

namespace reggecurv {

namespace {

constexpr double kEps[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};

struct TriQuadPoint {
  Vec2 p;
  double w;  // physical measure weight
};

void map_triangle(const TriMesh& mesh, int t, const QuadRule& rule, std::vector<TriQuadPoint>& out) {
  const auto& tri = mesh.triangles[t];
  const Vec2 v0 = mesh.vertices[tri[0]];
  const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
  const double jac = cross(d1, d2);
  out.resize(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    out[q].p = v0 + d1 * rule.points[q].x + d2 * rule.points[q].y;
    out[q].w = rule.weights[q] * jac;
  }
}

void check_spd(const SymMat2& g) {
  if (!g.spd()) throw NumericalError("metric not positive definite at quadrature point");
}

// First frame vector e_1 = g^{-1/2} E_1 (value only).
Vec2 frame_e1(const SymMat2& g) {
  const SymMat2 binv = spd_sqrt(g).inverse();
  return {binv.m11, binv.m12};
}

Vec2 normalized_in(const SymMat2& g, const Vec2& v) {
  return v / std::sqrt(g.apply(v, v));
}

int local_edge_index(const TriMesh& mesh, int t, int e) {
  for (int le = 0; le < 3; ++le)
    if (mesh.tri_edges[t][le].first == e) return le;
  throw std::logic_error("local_edge_index: edge not on triangle");
}

const std::string* edge_tag(const TriMesh& mesh, int e) {
  auto it = mesh.boundary_tags.find(e);
  return it == mesh.boundary_tags.end() ? nullptr : &it->second;
}

}  // namespace

double Functional::action(const std::vector<double>& coeffs) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * coeffs[i];
  return s;
}

AssemblyQuad AssemblyQuad::for_degrees(int k_regge, int k_test) {
  AssemblyQuad q;
  q.volume = std::min(25, 2 * std::max(k_regge, k_test) + 6);
  q.edge = 2 * std::max(k_regge, k_test) + 6;
  return q;
}

JetFn regge_jets(const DofVector& g) {
  const FeSpace* space = g.space;
  auto gen = std::make_shared<std::vector<Eigen::VectorXd>>();
  gen->reserve(space->mesh->num_triangles());
  for (int t = 0; t < space->mesh->num_triangles(); ++t)
    gen->push_back(space->generator_coeffs(t, g.coeffs));
  return [space, gen](int t, const Vec2& p, bool want_dd) {
    return space->eval_regge(t, p, (*gen)[t], want_dd);
  };
}

JetFn analytic_jets(const AnalyticTensorField& f) {
  return [&f](int, const Vec2& p, bool want_dd) { return f.jet(p, want_dd); };
}

JetFn difference_jets(const JetFn& a, const JetFn& b) {
  return [a, b](int t, const Vec2& p, bool want_dd) {
    return a(t, p, want_dd).plus(b(t, p, want_dd), -1.0);
  };
}

JetFn constant_identity_jets() {
  return [](int, const Vec2&, bool want_dd) {
    TensorJet j;
    j.v = SymMat2::identity();
    j.has_dd = want_dd;
    return j;
  };
}

JetFn blend_identity_jets(const JetFn& g, double t) {
  return [g, t](int tri, const Vec2& p, bool want_dd) {
    TensorJet j = g(tri, p, want_dd).scaled(t);
    j.v.m11 += 1.0 - t;
    j.v.m22 += 1.0 - t;
    return j;
  };
}

// --- curvature --------------------------------------------------------------

Functional assemble_curvature_rhs(const JetFn& g, const FeSpace& V, const BoundaryData& bd,
                                  const AssemblyQuad& q) {
  const TriMesh& mesh = *V.mesh;
  Functional F;
  F.space = &V;
  F.values.assign(V.dof_count, 0.0);

  const QuadRule& vrule = triangle_rule(q.volume);
  const QuadRule& erule = edge_rule(q.edge);
  std::vector<TriQuadPoint> pts;
  std::vector<double> vals;

  const SymMat2 id = SymMat2::identity();

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = V.tri_dofs[t];

    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts) {
      const TensorJet jet = g(t, qp.p, true);
      check_spd(jet.v);
      const double kg = gauss_curvature(jet);
      const double vol = std::sqrt(jet.v.det());
      V.scalar_basis(t, qp.p, vals);
      for (std::size_t a = 0; a < dofs.size(); ++a)
        F.values[dofs[a]] += qp.w * kg * vol * vals[a];
    }

    for (int le = 0; le < 3; ++le) {
      const auto side = mesh.side(t, le);
      const std::string* tag = edge_tag(mesh, side.edge);
      const bool neumann = tag && bd.neumann_tags.count(*tag);
      if (tag && bd.dirichlet_tags.count(*tag)) continue;
      const Expr* kappa_data = nullptr;
      if (neumann) {
        auto it = bd.neumann.find(*tag);
        if (it == bd.neumann.end())
          throw NumericalError("missing Neumann data for tag '" + *tag + "'");
        kappa_data = &it->second;
      }
      for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
        const double s = erule.points[iq].x;
        const Vec2 p = side.from + (side.to - side.from) * s;
        const double dl = erule.weights[iq] * side.length;
        const TensorJet jet = g(t, p, false);
        check_spd(jet.v);
        const EdgeFrame frame = edge_frame(jet.v, side.tangent);
        double w = geodesic_curvature_weight(jet, frame);
        if (kappa_data) {
          const SymMat2 gex = bd.gex->value(p);
          w -= kappa_data->evaluate(p.x, p.y) * std::sqrt(gex.apply(side.tangent, side.tangent));
        }
        V.scalar_basis(t, p, vals);
        for (std::size_t a = 0; a < dofs.size(); ++a) F.values[dofs[a]] += dl * w * vals[a];
      }
    }

    const auto& tri = mesh.triangles[t];
    for (int lv = 0; lv < 3; ++lv) {
      const Vec2 pv = mesh.vertices[tri[lv]];
      const Vec2 tau_out = mesh.vertices[tri[(lv + 1) % 3]] - pv;
      const Vec2 tau_in = pv - mesh.vertices[tri[(lv + 2) % 3]];
      const SymMat2 gv = g(t, pv, false).v;
      const double ang = interior_angle(id, tau_in, tau_out) - interior_angle(gv, tau_in, tau_out);
      F.values[V.vertex_dof(tri[lv])] += ang;
    }
  }

  // Neumann vertex weights: net contribution (angle_gex - sum_T angle_g) per
  // vertex, of which (angle_gex - sum_T angle_delta) remains to be added here.
  if (!bd.neumann_tags.empty()) {
    if (!bd.gex) throw NumericalError("Neumann data requires the exact metric");
    std::vector<char> is_neumann_vertex(mesh.num_vertices(), 0);
    for (const auto& [e, tag] : mesh.boundary_tags)
      if (bd.neumann_tags.count(tag)) {
        is_neumann_vertex[mesh.edges[e][0]] = 1;
        is_neumann_vertex[mesh.edges[e][1]] = 1;
      }
    std::vector<std::vector<int>> vertex_bedges(mesh.num_vertices());
    for (const auto& [e, tag] : mesh.boundary_tags) {
      (void)tag;
      vertex_bedges[mesh.edges[e][0]].push_back(e);
      vertex_bedges[mesh.edges[e][1]].push_back(e);
    }
    const auto vtris = mesh.vertex_tris();
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (!is_neumann_vertex[v]) continue;
      double sum_delta = 0.0;
      for (int t : vtris[v]) {
        const auto& tri = mesh.triangles[t];
        int lv = 0;
        while (tri[lv] != v) ++lv;
        const Vec2 pv = mesh.vertices[v];
        const Vec2 tau_out = mesh.vertices[tri[(lv + 1) % 3]] - pv;
        const Vec2 tau_in = pv - mesh.vertices[tri[(lv + 2) % 3]];
        sum_delta += interior_angle(id, tau_in, tau_out);
      }
      double ang_gex;
      auto it = bd.neumann_corner_angles.find(v);
      if (it != bd.neumann_corner_angles.end()) {
        ang_gex = it->second;
      } else {
        if (vertex_bedges[v].size() != 2)
          throw NumericalError("Neumann vertex without exactly two boundary edges");
        Vec2 dirs[2];
        for (int i = 0; i < 2; ++i) {
          const int e = vertex_bedges[v][i];
          const int other = mesh.edges[e][0] == v ? mesh.edges[e][1] : mesh.edges[e][0];
          dirs[i] = mesh.vertices[other] - mesh.vertices[v];
        }
        const SymMat2 gexv = bd.gex->value(mesh.vertices[v]);
        const double c = gexv.apply(dirs[0], dirs[1]) /
                         (std::sqrt(gexv.apply(dirs[0], dirs[0])) * std::sqrt(gexv.apply(dirs[1], dirs[1])));
        ang_gex = std::acos(std::clamp(c, -1.0, 1.0));
      }
      F.values[V.vertex_dof(v)] += ang_gex - sum_delta;
    }
  }
  return F;
}

Functional assemble_curvature_rhs(const DofVector& g, const FeSpace& V, const BoundaryData& bd,
                                  const AssemblyQuad& q) {
  return assemble_curvature_rhs(regge_jets(g), V, bd, q);
}

DofVector lift_curvature(const JetFn& g, const FeSpace& V, const BoundaryData& bd,
                         const AssemblyQuad& q) {
  const Functional F = assemble_curvature_rhs(g, V, bd, q);
  const SparseSym mass = scalar_mass(V, &g, q);
  std::vector<std::pair<int, double>> dirichlet;
  std::map<std::string, Expr> data;
  for (const auto& tag : bd.dirichlet_tags) {
    auto it = bd.dirichlet.find(tag);
    if (it == bd.dirichlet.end())
      throw NumericalError("missing Dirichlet data for tag '" + tag + "'");
    data.emplace(tag, it->second);
  }
  if (!data.empty()) dirichlet = lagrange_boundary_values(V, data);
  return project_scalar(mass, F, dirichlet);
}

DofVector lift_curvature(const DofVector& g, const FeSpace& V, const BoundaryData& bd,
                         const AssemblyQuad& q) {
  return lift_curvature(regge_jets(g), V, bd, q);
}

// --- connection --------------------------------------------------------------

namespace {

// Frame rotation across an edge: both frames are measured against the metric
// normalization of the same Euclidean reference normal, and the difference is
// reduced to (-pi, pi]. The principal value makes per-edge sign flips of the
// reference normal irrelevant (they shift both angles by pi). The pairing
// sign in the functionals below is pinned by the discrete identity
// curl_g(connection) = curvature functional.
double frame_jump_angle(const SymMat2& gp, const SymMat2& gm, const Vec2& nu_e) {
  const Vec2 refp = normalized_in(gp, gp.inverse() * nu_e);
  const Vec2 refm = normalized_in(gm, gm.inverse() * nu_e);
  const double tp = signed_angle(gp, frame_e1(gp), refp);
  const double tm = signed_angle(gm, frame_e1(gm), refm);
  return principal_angle(tp - tm);
}

}  // namespace

namespace {

// 1/2 int_0^1 of the covariant-curl boundary density along the metric flow
// delta + t*sigma; the boundary counterpart of the interior frame jumps.
double half_flow_density(const SymMat2& sigma, const Vec2& unit_tau, const QuadRule& trule) {
  double acc = 0.0;
  const SymMat2 id = SymMat2::identity();
  for (std::size_t i = 0; i < trule.points.size(); ++i) {
    const double t = trule.points[i].x;
    acc += trule.weights[i] * curl_boundary_density(id + sigma * t, sigma, unit_tau);
  }
  return 0.5 * acc;
}

}  // namespace

Functional assemble_connection_rhs(const JetFn& g, const FeSpace& W, const AssemblyQuad& q,
                                   const AnalyticMetric* gex_boundary) {
  const TriMesh& mesh = *W.mesh;
  Functional F;
  F.space = &W;
  F.values.assign(W.dof_count, 0.0);

  const QuadRule& vrule = triangle_rule(q.volume);
  const QuadRule& erule = edge_rule(q.edge);
  std::vector<TriQuadPoint> pts;
  std::vector<Vec2> vals;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = W.tri_dofs[t];
    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts) {
      const TensorJet jet = g(t, qp.p, false);
      check_spd(jet.v);
      const Vec2 omega = connection_coefficients(jet);
      W.vector_basis(t, qp.p, vals);
      for (std::size_t a = 0; a < dofs.size(); ++a)
        F.values[dofs[a]] += qp.w * dot(omega, vals[a]);
    }
  }

  const int k = W.degree;
  const QuadRule trule = gauss_rule_01(12);
  const SymMat2 id = SymMat2::identity();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Vec2 a = mesh.vertices[mesh.edges[e][0]], b = mesh.vertices[mesh.edges[e][1]];
    const double len = norm(b - a);
    const Vec2 tau_e = (b - a) / len;
    const Vec2 nu_e = rot90(tau_e);

    if (mesh.is_boundary_edge(e)) {
      if (!gex_boundary || W.essential[W.edge_dof(e, 0)]) continue;
      const int t = mesh.edge_tris[e][0] >= 0 ? mesh.edge_tris[e][0] : mesh.edge_tris[e][1];
      const int le = local_edge_index(mesh, t, e);
      const Vec2 tau_side = tau_e * static_cast<double>(mesh.tri_edges[t][le].second);
      const Vec2 nu_side = rot90(tau_side);
      for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
        const double s = erule.points[iq].x;
        const Vec2 p = a + (b - a) * s;
        const double dl = erule.weights[iq] * len;
        const SymMat2 gv = g(t, p, false).v;
        check_spd(gv);
        const double corr = half_flow_density(gv - id, tau_side, trule) -
                            half_flow_density(gex_boundary->value(p) - id, tau_side, trule);
        W.vector_basis(t, p, vals);
        for (int j = 0; j <= k; ++j)
          F.values[W.edge_dof(e, j)] += dl * corr * dot(vals[le * (k + 1) + j], nu_side);
      }
      continue;
    }

    const int tp = mesh.edge_tris[e][0], tm = mesh.edge_tris[e][1];
    const int le_p = local_edge_index(mesh, tp, e);
    for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
      const double s = erule.points[iq].x;
      const Vec2 p = a + (b - a) * s;
      const double dl = erule.weights[iq] * len;
      const SymMat2 gp = g(tp, p, false).v;
      const SymMat2 gm = g(tm, p, false).v;
      check_spd(gp);
      check_spd(gm);
      const double theta = frame_jump_angle(gp, gm, nu_e);
      W.vector_basis(tp, p, vals);
      for (int j = 0; j <= k; ++j)
        F.values[W.edge_dof(e, j)] -= dl * theta * dot(vals[le_p * (k + 1) + j], nu_e);
    }
  }
  return F;
}

Functional assemble_connection_rhs(const DofVector& g, const FeSpace& W, const AssemblyQuad& q,
                                   const AnalyticMetric* gex_boundary) {
  return assemble_connection_rhs(regge_jets(g), W, q, gex_boundary);
}

DofVector lift_connection(const JetFn& g, const FeSpace& W, const AssemblyQuad& q,
                          const AnalyticMetric* gex_boundary) {
  const Functional F = assemble_connection_rhs(g, W, q, gex_boundary);
  const SparseSym mass = vector_mass(W, q);
  return project_vector(W, mass, F);
}

DofVector lift_connection(const DofVector& g, const FeSpace& W, const AssemblyQuad& q,
                          const AnalyticMetric* gex_boundary) {
  return lift_connection(regge_jets(g), W, q, gex_boundary);
}

double connection_action(const JetFn& g, const TriMesh& mesh,
                         const std::function<Vec2(int, const Vec2&)>& w, const AssemblyQuad& q) {
  const QuadRule& vrule = triangle_rule(q.volume);
  const QuadRule& erule = edge_rule(q.edge);
  std::vector<TriQuadPoint> pts;
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts)
      acc += qp.w * dot(connection_coefficients(g(t, qp.p, false)), w(t, qp.p));
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary_edge(e)) continue;
    const int tp = mesh.edge_tris[e][0], tm = mesh.edge_tris[e][1];
    const Vec2 a = mesh.vertices[mesh.edges[e][0]], b = mesh.vertices[mesh.edges[e][1]];
    const double len = norm(b - a);
    const Vec2 tau_e = (b - a) / len;
    const Vec2 nu_e = rot90(tau_e);
    for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
      const double s = erule.points[iq].x;
      const Vec2 p = a + (b - a) * s;
      const double theta =
          frame_jump_angle(g(tp, p, false).v, g(tm, p, false).v, nu_e);
      acc -= erule.weights[iq] * len * theta * dot(w(tp, p), nu_e);
    }
  }
  return acc;
}

// --- covariant curl ---------------------------------------------------------

Functional assemble_curl_rhs(const JetFn& g, const JetFn& sigma, const FeSpace& W,
                             const AssemblyQuad& q, CurlForm form) {
  const TriMesh& mesh = *W.mesh;
  Functional F;
  F.space = &W;
  F.values.assign(W.dof_count, 0.0);

  const QuadRule& vrule = triangle_rule(q.volume);
  const QuadRule& erule = edge_rule(q.edge);
  std::vector<TriQuadPoint> pts;
  std::vector<Vec2> vals;
  std::vector<Mat2> jacs;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = W.tri_dofs[t];
    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts) {
      const TensorJet gj = g(t, qp.p, false);
      check_spd(gj.v);
      const TensorJet sj = sigma(t, qp.p, false);
      if (form == CurlForm::Boundary) {
        const Vec2 c = curl_g_sigma(gj, sj);
        W.vector_basis(t, qp.p, vals);
        for (std::size_t a = 0; a < dofs.size(); ++a)
          F.values[dofs[a]] += qp.w * dot(c, vals[a]);
      } else {
        const Christoffel2 c2 = christoffel_second(gj);
        const double tr[2] = {christoffel_trace(gj, 0), christoffel_trace(gj, 1)};
        const double sd = std::sqrt(gj.v.det());
        W.vector_basis(t, qp.p, vals, &jacs);
        for (std::size_t a = 0; a < dofs.size(); ++a) {
          double acc = 0.0;
          for (int m = 0; m < 2; ++m)
            for (int kk = 0; kk < 2; ++kk) {
              double term = 0.0;
              for (int j = 0; j < 2; ++j) {
                if (kEps[kk][j] == 0.0) continue;
                double inner = jacs[a](m, j) - tr[j] * vals[a][m];
                for (int i = 0; i < 2; ++i) inner += c2.c[j][i][m] * vals[a][i];
                term += kEps[kk][j] * inner;
              }
              acc += sj.v(m, kk) * term;
            }
          F.values[dofs[a]] += qp.w * acc / sd;
        }
      }
    }

    for (int le = 0; le < 3; ++le) {
      const auto side = mesh.side(t, le);
      const bool boundary = mesh.is_boundary_edge(side.edge);
      if (form == CurlForm::Boundary && boundary && W.essential[W.edge_dof(side.edge, 0)]) continue;
      for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
        const double s = erule.points[iq].x;
        const Vec2 p = side.from + (side.to - side.from) * s;
        const double dl = erule.weights[iq] * side.length;
        const TensorJet gj = g(t, p, false);
        check_spd(gj.v);
        const TensorJet sj = sigma(t, p, false);
        W.vector_basis(t, p, vals);
        if (form == CurlForm::Boundary) {
          const double dens = curl_boundary_density(gj.v, sj.v, side.tangent);
          for (std::size_t a = 0; a < dofs.size(); ++a)
            F.values[dofs[a]] -= dl * dens * dot(vals[a], side.normal);
        } else {
          const double g_tt = gj.v.apply(side.tangent, side.tangent);
          const double s_tt = sj.v.apply(side.tangent, side.tangent);
          const double c = s_tt / (g_tt * std::sqrt(gj.v.det()));
          for (std::size_t a = 0; a < dofs.size(); ++a)
            F.values[dofs[a]] += dl * c * gj.v.apply(vals[a], side.tangent);
        }
      }
    }
  }
  return F;
}

DofVector lift_curl(const JetFn& g, const JetFn& sigma, const FeSpace& W, const AssemblyQuad& q,
                    CurlForm form) {
  const Functional F = assemble_curl_rhs(g, sigma, W, q, form);
  const SparseSym mass = vector_mass(W, q);
  return project_vector(W, mass, F);
}

// --- covariant incompatibility ---------------------------------------------

Functional assemble_inc_rhs(const JetFn& g, const JetFn& sigma, const FeSpace& V,
                            const AssemblyQuad& q, IncPath path) {
  const TriMesh& mesh = *V.mesh;
  Functional F;
  F.space = &V;
  F.values.assign(V.dof_count, 0.0);

  const QuadRule& vrule = triangle_rule(q.volume);
  const QuadRule& erule = edge_rule(q.edge);
  std::vector<TriQuadPoint> pts;
  std::vector<double> vals;
  std::vector<Vec2> grads;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = V.tri_dofs[t];
    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts) {
      if (path == IncPath::Composed) {
        const TensorJet gj = g(t, qp.p, false);
        check_spd(gj.v);
        const TensorJet sj = sigma(t, qp.p, false);
        const Vec2 c = curl_g_sigma(gj, sj);
        V.scalar_basis(t, qp.p, vals, &grads);
        for (std::size_t a = 0; a < dofs.size(); ++a) {
          const Vec2 rot_u{grads[a].y, -grads[a].x};
          F.values[dofs[a]] += qp.w * dot(c, rot_u);
        }
      } else {
        const TensorJet gj = g(t, qp.p, true);
        check_spd(gj.v);
        const TensorJet sj = sigma(t, qp.p, true);
        const double inc = inc_g_sigma(gj, sj);
        const double vol = std::sqrt(gj.v.det());
        V.scalar_basis(t, qp.p, vals);
        for (std::size_t a = 0; a < dofs.size(); ++a)
          F.values[dofs[a]] += qp.w * inc * vol * vals[a];
      }
    }

    for (int le = 0; le < 3; ++le) {
      const auto side = mesh.side(t, le);
      for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
        const double s = erule.points[iq].x;
        const Vec2 p = side.from + (side.to - side.from) * s;
        const double dl = erule.weights[iq] * side.length;
        const TensorJet gj = g(t, p, false);
        check_spd(gj.v);
        const TensorJet sj = sigma(t, p, false);
        if (path == IncPath::Composed) {
          const double dens = curl_boundary_density(gj.v, sj.v, side.tangent);
          V.scalar_basis(t, p, vals, &grads);
          for (std::size_t a = 0; a < dofs.size(); ++a) {
            const Vec2 rot_u{grads[a].y, -grads[a].x};
            F.values[dofs[a]] -= dl * dens * dot(rot_u, side.normal);
          }
        } else {
          const Vec2 c = curl_g_sigma(gj, sj);
          const double density = dot(c, side.tangent) + d_tau_sigma_nt_hat(gj, sj, side.tangent);
          V.scalar_basis(t, p, vals);
          for (std::size_t a = 0; a < dofs.size(); ++a)
            F.values[dofs[a]] -= dl * density * vals[a];
        }
      }
    }

    if (path == IncPath::Direct) {
      const auto& tri = mesh.triangles[t];
      for (int lv = 0; lv < 3; ++lv) {
        const Vec2 pv = mesh.vertices[tri[lv]];
        const TensorJet gj = g(t, pv, false);
        const TensorJet sj = sigma(t, pv, false);
        // outgoing edge lv -> lv+1, incoming edge lv-1 -> lv
        const Vec2 t_out = mesh.vertices[tri[(lv + 1) % 3]] - pv;
        const Vec2 t_in = pv - mesh.vertices[tri[(lv + 2) % 3]];
        const double jump = sigma_nt_hat(gj.v, sj.v, t_out / norm(t_out)) -
                            sigma_nt_hat(gj.v, sj.v, t_in / norm(t_in));
        F.values[V.vertex_dof(tri[lv])] -= jump;
      }
    }
  }
  return F;
}

DofVector lift_inc(const JetFn& g, const JetFn& sigma, const FeSpace& V, const AssemblyQuad& q,
                   IncPath path) {
  const Functional F = assemble_inc_rhs(g, sigma, V, q, path);
  const SparseSym mass = scalar_mass(V, nullptr, q);
  return project_scalar(mass, F, {});
}

// --- masses and projections -------------------------------------------------

SparseSym scalar_mass(const FeSpace& V, const JetFn* metric_weight, const AssemblyQuad& q) {
  const TriMesh& mesh = *V.mesh;
  const QuadRule& vrule = triangle_rule(std::max(q.volume, 2 * V.degree + 2));
  std::vector<TriQuadPoint> pts;
  std::vector<double> vals;
  std::vector<Triplet> trips;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = V.tri_dofs[t];
    const int nl = static_cast<int>(dofs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nl, nl);
    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts) {
      double w = qp.w;
      if (metric_weight) {
        const SymMat2 gv = (*metric_weight)(t, qp.p, false).v;
        check_spd(gv);
        w *= std::sqrt(gv.det());
      }
      V.scalar_basis(t, qp.p, vals);
      for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) local(a, b) += w * vals[a] * vals[b];
    }
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b) trips.push_back({dofs[a], dofs[b], local(a, b)});
  }
  return SparseSym::assemble(V.dof_count, trips);
}

SparseSym vector_mass(const FeSpace& W, const AssemblyQuad& q) {
  const TriMesh& mesh = *W.mesh;
  const QuadRule& vrule = triangle_rule(std::max(q.volume, 2 * W.degree + 4));
  std::vector<TriQuadPoint> pts;
  std::vector<Vec2> vals;
  std::vector<Triplet> trips;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& dofs = W.tri_dofs[t];
    const int nl = static_cast<int>(dofs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nl, nl);
    map_triangle(mesh, t, vrule, pts);
    for (const auto& qp : pts) {
      W.vector_basis(t, qp.p, vals);
      for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) local(a, b) += qp.w * dot(vals[a], vals[b]);
    }
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b) trips.push_back({dofs[a], dofs[b], local(a, b)});
  }
  return SparseSym::assemble(W.dof_count, trips);
}

DofVector project_scalar(const SparseSym& mass, const Functional& f,
                         const std::vector<std::pair<int, double>>& dirichlet_values) {
  const FeSpace& V = *f.space;
  SparseSym m = mass;
  std::vector<double> rhs = f.values;
  std::vector<int> ess;
  std::vector<double> vals;
  std::vector<double> value_of(V.dof_count, 0.0);
  for (const auto& [dof, v] : dirichlet_values) value_of[dof] = v;
  for (int d = 0; d < V.dof_count; ++d)
    if (V.essential[d]) {
      ess.push_back(d);
      vals.push_back(value_of[d]);
    }
  m.constrain(rhs, ess, vals);
  DofVector out;
  out.space = &V;
  out.coeffs = solve_spd(m, rhs);
  return out;
}

DofVector project_vector(const FeSpace& W, const SparseSym& mass, const Functional& f) {
  DofVector out;
  out.space = &W;
  if (!W.div_constrained) {
    SparseSym m = mass;
    std::vector<double> rhs = f.values;
    std::vector<int> ess;
    std::vector<double> vals;
    for (int d = 0; d < W.dof_count; ++d)
      if (W.essential[d]) {
        ess.push_back(d);
        vals.push_back(0.0);
      }
    m.constrain(rhs, ess, vals);
    out.coeffs = solve_spd(m, rhs);
    return out;
  }

  // Bdm(0): Rt(0) with element-wise div locked through multipliers.
  const TriMesh& mesh = *W.mesh;
  const int n = W.dof_count, nt = mesh.num_triangles();
  std::vector<Triplet> trips;
  double diag_scale = 0.0;
  {
    const auto& m = mass.eigen();
    for (int col = 0; col < m.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
        if (W.essential[it.row()] || W.essential[col]) {
          if (it.row() == col) trips.push_back({col, col, 1.0});
          continue;
        }
        trips.push_back({static_cast<int>(it.row()), col, it.value()});
        if (it.row() == col) diag_scale += it.value();
      }
  }
  diag_scale /= n;
  std::vector<Vec2> vals;
  std::vector<Mat2> jacs;
  for (int t = 0; t < nt; ++t) {
    const auto& dofs = W.tri_dofs[t];
    const double area = mesh.signed_area(t);
    W.vector_basis(t, mesh.centroid(t), vals, &jacs);  // div constant for Rt(0)
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      if (W.essential[dofs[a]]) continue;
      const double div_a = jacs[a](0, 0) + jacs[a](1, 1);
      trips.push_back({n + t, dofs[a], area * div_a});
      trips.push_back({dofs[a], n + t, area * div_a});
    }
    trips.push_back({n + t, n + t, -1e-10 * diag_scale});
  }
  SparseSym saddle = SparseSym::assemble(n + nt, trips);
  std::vector<double> rhs(n + nt, 0.0);
  for (int d = 0; d < n; ++d) rhs[d] = W.essential[d] ? 0.0 : f.values[d];
  const std::vector<double> sol = lu_solve(saddle, rhs);
  out.coeffs.assign(sol.begin(), sol.begin() + n);
  return out;
}

// --- integral representation -------------------------------------------------

double verify_integral_representation(const DofVector& g, const FeSpace& V, int t_points,
                                      const AssemblyQuad& q) {
  const TriMesh& mesh = *V.mesh;
  const JetFn gfn = regge_jets(g);

  BoundaryData bd;
  for (const auto& [e, tag] : mesh.boundary_tags) {
    bd.dirichlet_tags.insert(tag);
    bd.dirichlet.emplace(tag, Expr::constant(0.0));
  }
  const DofVector kh = lift_curvature(gfn, V, bd, q);
  const SparseSym mass = scalar_mass(V, &gfn, q);
  const std::vector<double> lhs = mass.multiply(kh.coeffs);

  const JetFn sigma = difference_jets(gfn, constant_identity_jets());
  std::vector<double> rhs(V.dof_count, 0.0);
  const QuadRule trule = gauss_rule_01(t_points);
  for (std::size_t i = 0; i < trule.points.size(); ++i) {
    const double t = trule.points[i].x;
    Functional ft;
    try {
      ft = assemble_inc_rhs(blend_identity_jets(gfn, t), sigma, V, q, IncPath::Composed);
    } catch (const NumericalError& err) {
      throw NumericalError(std::string(err.what()) + " on the blended path at t = " + std::to_string(t));
    }
    for (int a = 0; a < V.dof_count; ++a) rhs[a] += trule.weights[i] * (-0.5) * ft.values[a];
  }

  double res = 0.0;
  for (int a = 0; a < V.dof_count; ++a)
    if (!V.essential[a]) res = std::max(res, std::abs(lhs[a] - rhs[a]));
  return res;
}

double lifted_l2_norm(const SparseSym& mass, const DofVector& field) {
  const std::vector<double> mc = mass.multiply(field.coeffs);
  double s = 0.0;
  for (std::size_t i = 0; i < mc.size(); ++i) s += mc[i] * field.coeffs[i];
  return std::sqrt(std::max(0.0, s));
}

}  // namespace reggecurv
