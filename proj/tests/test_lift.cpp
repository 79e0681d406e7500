#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "reggecurv/norms.hpp"
#include "reggecurv/ops_check.hpp"
#include "reggecurv/quad.hpp"

using namespace reggecurv;

namespace {

const char* kPaperF = "1/2*(x^2+y^2) - 1/12*(x^4+y^4)";
const char* kPaperK = "81*(1-x^2)*(1-y^2)/(9+x^2*(x^2-3)^2+y^2*(y^2-3)^2)^2";

StudyConfig paper_config() {
  StudyConfig cfg = load_config(R"json({
    "metric": {"graph": "1/2*(x^2+y^2) - 1/12*(x^4+y^4)"},
    "domain": {"origin": [0,0], "extent": [1,1]},
    "mesh": {"n0": 2, "levels": 2, "perturb_amplitude": 0.25, "seed": 7},
    "degrees": [1],
    "boundary": {
      "dirichlet_tags": ["right", "bottom"],
      "neumann_tags": ["left", "top"],
      "dirichlet": {"right": "auto", "bottom": "auto"},
      "neumann": {"left": "0", "top": "auto"}
    }
  })json");
  return cfg;
}

std::set<std::string> all_tags(const TriMesh& mesh) {
  std::set<std::string> tags;
  for (const auto& [e, tag] : mesh.boundary_tags) tags.insert(tag);
  return tags;
}

}  // namespace

TEST_CASE("flat metric gives the zero functional and zero lift") {
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 5);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, 1);
  const DofVector g = regge_interpolate(AnalyticMetric::identity(), R, 8);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 2, all_tags(mesh));

  BoundaryData bd;
  bd.dirichlet_tags = all_tags(mesh);
  for (const auto& tag : bd.dirichlet_tags) bd.dirichlet.emplace(tag, Expr::constant(0.0));

  const AssemblyQuad q = AssemblyQuad::for_degrees(1, 2);
  const Functional f = assemble_curvature_rhs(g, V, bd, q);
  for (int d = 0; d < V.dof_count; ++d)
    if (!V.essential[d]) CHECK(std::abs(f.values[d]) <= 1e-12);

  const DofVector kh = lift_curvature(g, V, bd, q);
  for (double c : kh.coeffs) CHECK(std::abs(c) <= 1e-10);

  // connection of the flat metric vanishes too
  const FeSpace W = build_space(mesh, SpaceKind::Bdm, 1, all_tags(mesh));
  const DofVector omega = lift_connection(g, W, q);
  for (double c : omega.coeffs) CHECK(std::abs(c) <= 1e-10);
}

TEST_CASE("high-degree interpolant reproduces the exact curvature") {
  const StudyConfig cfg = paper_config();
  const TriMesh mesh = perturb(structured_unit_square(4), 0.25, 11);
  const int k = 4;
  const AssemblyQuad q = AssemblyQuad::for_degrees(k, k + 1);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, k);
  const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, cfg.dirichlet_tags);
  const BoundaryData bd = make_boundary_data(cfg, mesh);
  const DofVector kh = lift_curvature(g, V, bd, q);

  const ScalarFieldFn kh_fn = scalar_fe_field(kh);
  const double err = l2_error_scalar(
      mesh, kh_fn, [&](int, const Vec2& p) { return gauss_curvature_at(cfg.gex, p); }, 16);
  CHECK(err <= 1e-4);
}

TEST_CASE("interior edge sources shrink for interpolated smooth metrics") {
  const StudyConfig cfg = paper_config();
  const int k = 1;
  std::vector<double> edge_mass;
  for (int n : {4, 8, 16}) {
    const TriMesh mesh = perturb(structured_unit_square(n), 0.25, 7 + n);
    const AssemblyQuad q = AssemblyQuad::for_degrees(k, k + 1);
    const FeSpace R = build_space(mesh, SpaceKind::Regge, k);
    const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
    const JetFn gfn = regge_jets(g);

    // h-scaled skeleton norm of the geodesic weight jump,
    // sqrt(sum_E h_E int |jump|^2 dl); pointwise jumps scale like h^k and
    // the edge-length weight absorbs the growing skeleton measure
    const QuadRule& erule = edge_rule(q.edge);
    double acc = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (mesh.is_boundary_edge(e)) continue;
      const int tp = mesh.edge_tris[e][0], tm = mesh.edge_tris[e][1];
      const Vec2 a = mesh.vertices[mesh.edges[e][0]], b = mesh.vertices[mesh.edges[e][1]];
      const double len = norm(b - a);
      const Vec2 tau = (b - a) / len;
      for (std::size_t iq = 0; iq < erule.points.size(); ++iq) {
        const Vec2 p = a + (b - a) * erule.points[iq].x;
        const TensorJet jp = gfn(tp, p, false), jm = gfn(tm, p, false);
        const double wp = geodesic_curvature_weight(jp, edge_frame(jp.v, tau));
        const double wm = geodesic_curvature_weight(jm, edge_frame(jm.v, -tau));
        acc += len * erule.weights[iq] * len * (wp + wm) * (wp + wm);
      }
    }
    edge_mass.push_back(std::sqrt(acc));
  }
  const double rate = std::log(edge_mass[0] / edge_mass[2]) / std::log(4.0);
  CHECK(rate >= k - 0.3);
}

TEST_CASE("frame jump consistency at interior vertices") {
  // sum over edges at an interior vertex of the signed frame jumps plus the
  // interior angles closes up to 2 pi
  const StudyConfig cfg = paper_config();
  const TriMesh mesh = perturb(structured_unit_square(2), 0.25, 3);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, 0);
  const DofVector g = regge_interpolate(cfg.gex, R, 8);
  const JetFn gfn = regge_jets(g);

  // locate the interior vertex
  std::vector<char> on_boundary(mesh.num_vertices(), 0);
  for (const auto& [e, tag] : mesh.boundary_tags) {
    (void)tag;
    on_boundary[mesh.edges[e][0]] = 1;
    on_boundary[mesh.edges[e][1]] = 1;
  }
  int vc = -1;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!on_boundary[v]) vc = v;
  REQUIRE(vc >= 0);

  double angle_sum = 0.0;
  const auto vtris = mesh.vertex_tris();
  for (int t : vtris[vc]) {
    const auto& tri = mesh.triangles[t];
    int lv = 0;
    while (tri[lv] != vc) ++lv;
    const Vec2 pv = mesh.vertices[vc];
    const Vec2 tin = pv - mesh.vertices[tri[(lv + 2) % 3]];
    const Vec2 tout = mesh.vertices[tri[(lv + 1) % 3]] - pv;
    angle_sum += interior_angle(gfn(t, pv, false).v, tin, tout);
  }

  double jump_sum = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary_edge(e)) continue;
    const int lo = mesh.edges[e][0], hi = mesh.edges[e][1];
    if (lo != vc && hi != vc) continue;
    const int tp = mesh.edge_tris[e][0], tm = mesh.edge_tris[e][1];
    const Vec2 pv = mesh.vertices[vc];
    const Vec2 tau_e = mesh.edge_tangent(e);
    const Vec2 nu_e = rot90(tau_e);
    const SymMat2 gp = gfn(tp, pv, false).v;
    const SymMat2 gm = gfn(tm, pv, false).v;
    // theta at the vertex, oriented: s_EV = +1 if the global tangent points
    // towards the vertex
    const double s_ev = (hi == vc) ? 1.0 : -1.0;
    const SymMat2 gpi = gp.inverse(), gmi = gm.inverse();
    const Vec2 refp = (gpi * nu_e) / std::sqrt(gp.apply(gpi * nu_e, gpi * nu_e));
    const Vec2 refm = (gmi * nu_e) / std::sqrt(gm.apply(gmi * nu_e, gmi * nu_e));
    const SymMat2 bp = spd_sqrt(gp).inverse();
    const SymMat2 bm = spd_sqrt(gm).inverse();
    const double theta = principal_angle(signed_angle(gp, {bp.m11, bp.m12}, refp) -
                                         signed_angle(gm, {bm.m11, bm.m12}, refm));
    jump_sum += s_ev * theta;
  }
  CHECK(jump_sum + angle_sum == doctest::Approx(2.0 * M_PI).epsilon(1e-10));
}

TEST_CASE("distributional curl of the connection is the curvature functional") {
  const StudyConfig cfg = paper_config();
  const TriMesh mesh = perturb(structured_unit_square(4), 0.25, 13);
  const AssemblyQuad q = AssemblyQuad::for_degrees(1, 2);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, 1);
  const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
  CHECK(checks::connection_curl_identity_gap(g, mesh, 2, q, 7u) <= 1e-7);
}

TEST_CASE("smooth polynomial sigma in flat metric reduces to the volume curl") {
  // sigma globally smooth polynomial: the element-boundary terms cancel and
  // the functional equals the plain integral of curl(sigma) against w
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 23);
  const AnalyticTensorField sigma(parse("x^2+y"), parse("x*y/2"), parse("1+y^2"));
  const FeSpace W = build_space(mesh, SpaceKind::Bdm, 1, all_tags(mesh));
  AssemblyQuad q;
  q.volume = 10;
  q.edge = 10;
  const Functional f =
      assemble_curl_rhs(constant_identity_jets(), analytic_jets(sigma), W, q, CurlForm::Boundary);

  Functional vol;
  vol.space = &W;
  vol.values.assign(W.dof_count, 0.0);
  const QuadRule& rule = triangle_rule(10);
  std::vector<Vec2> vals;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.vertices[tri[0]];
    const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
    const double jac = cross(d1, d2);
    for (std::size_t iq = 0; iq < rule.points.size(); ++iq) {
      const Vec2 p = v0 + d1 * rule.points[iq].x + d2 * rule.points[iq].y;
      const TensorJet sj = sigma.jet(p, false);
      const Vec2 curl{sj.d[0].m12 - sj.d[1].m11, sj.d[0].m22 - sj.d[1].m12};
      W.vector_basis(t, p, vals);
      for (std::size_t a = 0; a < vals.size(); ++a)
        vol.values[W.tri_dofs[t][a]] += rule.weights[iq] * jac * dot(curl, vals[a]);
    }
  }
  for (int d = 0; d < W.dof_count; ++d)
    if (!W.essential[d]) CHECK(f.values[d] == doctest::Approx(vol.values[d]).epsilon(1e-11));
}

TEST_CASE("euclidean orthogonality identities") {
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 29);
  for (int k : {0, 1, 2}) {
    CHECK(checks::feec_curl_orthogonality(mesh, k) <= 1e-10);
    CHECK(checks::feec_inc_orthogonality(mesh, k) <= 1e-10);
  }
}

TEST_CASE("inc assemblies agree between the direct and composed paths") {
  const StudyConfig cfg = paper_config();
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 31);
  const AssemblyQuad q = AssemblyQuad::for_degrees(1, 2);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, 1);
  const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
  const DofVector sh = regge_interpolate(cfg.sigma, R, q.volume);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 2, all_tags(mesh));
  CHECK(checks::inc_path_gap(regge_jets(g), regge_jets(sh), V, q) <= 1e-8);
}

TEST_CASE("both covariant curl forms agree") {
  const StudyConfig cfg = paper_config();
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 37);
  const AssemblyQuad q = AssemblyQuad::for_degrees(1, 2);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, 1);
  const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
  const DofVector sh = regge_interpolate(cfg.sigma, R, q.volume);
  const FeSpace W = build_space(mesh, SpaceKind::Bdm, 1, all_tags(mesh));
  CHECK(checks::curl_form_gap(regge_jets(g), regge_jets(sh), W, q) <= 1e-9);
}

TEST_CASE("integral representation of the lifted curvature") {
  const StudyConfig cfg = paper_config();
  const TriMesh mesh = perturb(structured_unit_square(4), 0.25, 41);
  const AssemblyQuad q = AssemblyQuad::for_degrees(1, 2);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, 1);
  const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 2, all_tags(mesh));

  const double r10 = verify_integral_representation(g, V, 10, q);
  const double r20 = verify_integral_representation(g, V, 20, q);
  const double r40 = verify_integral_representation(g, V, 40, q);
  CHECK(r20 <= 1e-6);
  CHECK(r20 <= r10 * 1.1 + 1e-15);
  CHECK(r40 <= r20 * 1.1 + 1e-15);
}

TEST_CASE("discrete gauss-bonnet of the assembled functional") {
  StudyConfig cfg = paper_config();
  CHECK(checks::functional_gauss_bonnet_gap(cfg, 8, 1) <= 2e-3);
}

TEST_CASE("neumann vertex weights keep curvature exact at metric kinks") {
  // metric with nonzero g12 at the domain corner (0, 1): the corner angle in
  // gex differs from pi/2, which exercises the Neumann vertex correction
  StudyConfig cfg = load_config(R"json({
    "metric": {"graph": "x + y + x*y"},
    "mesh": {"n0": 4, "levels": 1, "perturb_amplitude": 0.2, "seed": 3},
    "degrees": [4],
    "boundary": {
      "dirichlet_tags": ["right", "bottom"],
      "neumann_tags": ["left", "top"],
      "dirichlet": {"right": "auto", "bottom": "auto"},
      "neumann": {"left": "auto", "top": "auto"}
    }
  })json");
  const TriMesh mesh = study_meshes(cfg)[0];
  const int k = 4;
  const AssemblyQuad q = AssemblyQuad::for_degrees(k, k + 1);
  const FeSpace R = build_space(mesh, SpaceKind::Regge, k);
  const DofVector g = regge_interpolate(cfg.gex, R, q.volume);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, cfg.dirichlet_tags);
  const BoundaryData bd = make_boundary_data(cfg, mesh);
  const DofVector kh = lift_curvature(g, V, bd, q);
  const double err = l2_error_scalar(
      mesh, scalar_fe_field(kh), [&](int, const Vec2& p) { return gauss_curvature_at(cfg.gex, p); },
      16);
  CHECK(err <= 1e-4);
}

TEST_CASE("bdm0 lift reproduces constant fields and is divergence free") {
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 43);
  const FeSpace W = build_space(mesh, SpaceKind::Bdm, 0);
  REQUIRE(W.div_constrained);
  AssemblyQuad q;
  q.volume = 6;
  q.edge = 6;
  const SparseSym mass = vector_mass(W, q);

  // project the constant field (0.3, -0.7)
  Functional f;
  f.space = &W;
  f.values.assign(W.dof_count, 0.0);
  const Vec2 c{0.3, -0.7};
  const QuadRule& rule = triangle_rule(6);
  std::vector<Vec2> vals;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.vertices[tri[0]];
    const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
    const double jac = cross(d1, d2);
    for (std::size_t iq = 0; iq < rule.points.size(); ++iq) {
      const Vec2 p = v0 + d1 * rule.points[iq].x + d2 * rule.points[iq].y;
      W.vector_basis(t, p, vals);
      for (std::size_t a = 0; a < vals.size(); ++a)
        f.values[W.tri_dofs[t][a]] += rule.weights[iq] * jac * dot(c, vals[a]);
    }
  }
  const DofVector w = project_vector(W, mass, f);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Mat2 jac;
    const Vec2 v = W.eval_vector(t, mesh.centroid(t), W.generator_coeffs(t, w.coeffs), &jac);
    CHECK(v.x == doctest::Approx(c.x).epsilon(1e-8));
    CHECK(v.y == doctest::Approx(c.y).epsilon(1e-8));
    CHECK(std::abs(jac(0, 0) + jac(1, 1)) <= 1e-7);
  }
}
