#include "reggecurv/ops_check.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "reggecurv/quad.hpp"

namespace reggecurv {

bool CheckReport::all_pass() const {
  for (const auto& it : items)
    if (!it.pass) return false;
  return true;
}

std::string CheckReport::to_string() const {
  std::ostringstream os;
  for (const auto& it : items) {
    os.precision(3);
    os << (it.pass ? "PASS" : "FAIL") << "  " << it.name << "  value=" << std::scientific << it.value
       << "  tol=" << it.tolerance << "\n";
  }
  return os.str();
}

namespace checks {

namespace {

double rnd(std::mt19937& rng) { return -1.0 + 2e-4 * static_cast<double>(rng() % 10000); }

SymMat2 random_sym(std::mt19937& rng, double scale) {
  return {scale * rnd(rng), scale * rnd(rng), scale * rnd(rng)};
}

TensorJet random_jet(std::mt19937& rng, bool metric) {
  TensorJet j;
  j.v = metric ? SymMat2{1.0, 0.0, 1.0} + random_sym(rng, 0.3) : random_sym(rng, 1.0);
  for (int k = 0; k < 2; ++k) j.d[k] = random_sym(rng, 0.7);
  j.has_dd = true;
  j.dd[0][0] = random_sym(rng, 0.7);
  j.dd[1][1] = random_sym(rng, 0.7);
  j.dd[0][1] = j.dd[1][0] = random_sym(rng, 0.7);
  return j;
}

// sigma with polynomial entries of total degree deg, fixed coefficients.
AnalyticTensorField polynomial_sigma(int deg, unsigned seed) {
  std::mt19937 rng(seed);
  auto poly = [&rng, deg]() {
    const Expr x = Expr::variable(Var::X), y = Expr::variable(Var::Y);
    Expr acc = Expr::constant(rnd(rng));
    for (int d = 1; d <= deg; ++d)
      for (int b = 0; b <= d; ++b) acc = acc + Expr::constant(rnd(rng)) * x.pow(d - b) * y.pow(b);
    return acc.simplify();
  };
  return AnalyticTensorField(poly(), poly(), poly());
}

}  // namespace

double gauss_bonnet_residual(unsigned seed, int trials, int quad_degree) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const Vec2 v0{0.1 * rnd(rng), 0.1 * rnd(rng)};
    const Vec2 v1 = v0 + Vec2{1.0 + 0.2 * rnd(rng), 0.3 * rnd(rng)};
    const Vec2 v2 = v0 + Vec2{0.3 * rnd(rng), 1.0 + 0.2 * rnd(rng)};
    auto re = [&rng] { return Expr::constant(0.2 * rnd(rng)); };
    auto poly = [&]() {
      const Expr x = Expr::variable(Var::X), y = Expr::variable(Var::Y);
      return re() + re() * x + re() * y + re() * x * x + re() * x * y + re() * y * y;
    };
    const AnalyticMetric g(Expr::constant(1.0) + poly(), poly(), Expr::constant(1.0) + poly());

    const QuadRule& vrule = triangle_rule(quad_degree);
    const QuadRule& erule = edge_rule(quad_degree);
    const Vec2 d1 = v1 - v0, d2 = v2 - v0;
    const double jac = cross(d1, d2);
    double total = 0.0;
    for (std::size_t q = 0; q < vrule.points.size(); ++q) {
      const Vec2 p = v0 + d1 * vrule.points[q].x + d2 * vrule.points[q].y;
      const TensorJet j = g.jet(p, true);
      total += vrule.weights[q] * jac * gauss_curvature(j) * std::sqrt(j.v.det());
    }
    const Vec2 verts[3] = {v0, v1, v2};
    for (int e = 0; e < 3; ++e) {
      const Vec2 a = verts[e], b = verts[(e + 1) % 3];
      const double len = norm(b - a);
      const Vec2 tau = (b - a) / len;
      for (std::size_t q = 0; q < erule.points.size(); ++q) {
        const Vec2 p = a + (b - a) * erule.points[q].x;
        const TensorJet j = g.jet(p, false);
        total += erule.weights[q] * len * geodesic_curvature_weight(j, edge_frame(j.v, tau));
      }
    }
    for (int vi = 0; vi < 3; ++vi) {
      const Vec2 in = verts[vi] - verts[(vi + 2) % 3];
      const Vec2 out = verts[(vi + 1) % 3] - verts[vi];
      total += 3.14159265358979323846 - interior_angle(g.value(verts[vi]), in, out);
    }
    worst = std::max(worst, std::abs(total - 2.0 * 3.14159265358979323846));
  }
  return worst;
}

VariationMismatch variation_mismatch(const AnalyticMetric& gm, const AnalyticTensorField& sm) {
  const Vec2 p{0.45, 0.6};
  const TensorJet g = gm.jet(p, true);
  const TensorJet s = sm.jet(p, true);
  const Vec2 tau{0.6, 0.8};
  const Vec2 t_in{1.0, 0.1}, t_out{-0.2, 1.0};

  auto run = [&](double t, double out[3]) {
    auto kvol = [&](double tt) {
      const TensorJet gt = g.plus(s, tt);
      return gauss_curvature(gt) * std::sqrt(gt.v.det());
    };
    out[0] = std::abs((kvol(t) - kvol(-t)) / (2.0 * t) -
                      (-0.5 * std::sqrt(g.v.det()) * inc_g_sigma(g, s)));
    auto kedge = [&](double tt) {
      const TensorJet gt = g.plus(s, tt);
      return geodesic_curvature_weight(gt, edge_frame(gt.v, tau));
    };
    out[1] = std::abs((kedge(t) - kedge(-t)) / (2.0 * t) -
                      0.5 * (dot(curl_g_sigma(g, s), tau) + d_tau_sigma_nt_hat(g, s, tau)));
    auto angle = [&](double tt) {
      const TensorJet gt = g.plus(s, tt);
      return interior_angle(gt.v, t_in, t_out);
    };
    const double jump = sigma_nt_hat(g.v, s.v, t_out / norm(t_out)) -
                        sigma_nt_hat(g.v, s.v, t_in / norm(t_in));
    out[2] = std::abs((angle(t) - angle(-t)) / (2.0 * t) + 0.5 * jump);
  };

  VariationMismatch m;
  run(1e-3, m.coarse);
  run(1e-4, m.fine);
  return m;
}

double divcurl_identity_residual(unsigned seed, int trials) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const TensorJet g = random_jet(rng, true);
    const TensorJet s = random_jet(rng, false);
    const TensorJet sg = sg_transform(g, s);
    const Vec2 lhs = hodge_star_oneform(g.v, flat(g.v, div_g_tensor(g, sg)));
    const Vec2 rhs = curl_g_sigma(g, s) * (-1.0);
    worst = std::max({worst, std::abs(lhs.x - rhs.x) / (1.0 + std::abs(rhs.x)),
                      std::abs(lhs.y - rhs.y) / (1.0 + std::abs(rhs.y))});
  }
  return worst;
}

double divdiv_identity_residual(unsigned seed, int trials) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const TensorJet g = random_jet(rng, true);
    const TensorJet s = random_jet(rng, false);
    const TensorJet sg = sg_transform(g, s);
    Vec2 val;
    Mat2 deriv;
    div_g_tensor_jet(g, sg, val, deriv);
    const double lhs = div_g_vector(g, val, deriv);
    const double rhs = -inc_g_sigma(g, s);
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

double feec_curl_orthogonality(const TriMesh& mesh, int k) {
  const AnalyticTensorField sigma = polynomial_sigma(k + 2, 1234u + k);
  const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
  std::set<std::string> all_tags;
  for (const auto& [e, tag] : mesh.boundary_tags) all_tags.insert(tag);
  const FeSpace W = build_space(mesh, SpaceKind::Bdm, k, all_tags);

  AssemblyQuad q;
  q.volume = std::min(25, 2 * (k + 3) + 2);
  q.edge = 2 * (k + 3) + 2;
  const DofVector sh = regge_interpolate(sigma, rspace, q.volume);
  const JetFn diff = difference_jets(analytic_jets(sigma), regge_jets(sh));
  const Functional f = assemble_curl_rhs(constant_identity_jets(), diff, W, q, CurlForm::Boundary);
  const Functional scale_f =
      assemble_curl_rhs(constant_identity_jets(), analytic_jets(sigma), W, q, CurlForm::Boundary);
  if (W.div_constrained) {
    // Bdm(0) lives inside Rt(0); the orthogonality holds only on the
    // div-constrained subspace, so compare the constrained lifts.
    const SparseSym mass = vector_mass(W, q);
    const DofVector lifted = project_vector(W, mass, f);
    const DofVector lifted_scale = project_vector(W, mass, scale_f);
    return lifted_l2_norm(mass, lifted) / std::max(lifted_l2_norm(mass, lifted_scale), 1e-30);
  }
  double worst = 0.0, scale = 1e-30;
  for (int d = 0; d < W.dof_count; ++d) {
    if (W.essential[d]) continue;
    worst = std::max(worst, std::abs(f.values[d]));
    scale = std::max(scale, std::abs(scale_f.values[d]));
  }
  return worst / scale;
}

double feec_inc_orthogonality(const TriMesh& mesh, int k) {
  const AnalyticTensorField sigma = polynomial_sigma(k + 2, 4321u + k);
  const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
  std::set<std::string> all_tags;
  for (const auto& [e, tag] : mesh.boundary_tags) all_tags.insert(tag);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, all_tags);

  AssemblyQuad q;
  q.volume = std::min(25, 2 * (k + 3) + 2);
  q.edge = 2 * (k + 3) + 2;
  const DofVector sh = regge_interpolate(sigma, rspace, q.volume);
  const JetFn diff = difference_jets(analytic_jets(sigma), regge_jets(sh));
  const Functional f = assemble_inc_rhs(constant_identity_jets(), diff, V, q, IncPath::Composed);
  const Functional scale_f =
      assemble_inc_rhs(constant_identity_jets(), analytic_jets(sigma), V, q, IncPath::Composed);
  double worst = 0.0, scale = 1e-30;
  for (int d = 0; d < V.dof_count; ++d) {
    if (V.essential[d]) continue;
    worst = std::max(worst, std::abs(f.values[d]));
    scale = std::max(scale, std::abs(scale_f.values[d]));
  }
  return worst / scale;
}

double inc_path_gap(const JetFn& g, const JetFn& sigma, const FeSpace& V, const AssemblyQuad& q) {
  const Functional fc = assemble_inc_rhs(g, sigma, V, q, IncPath::Composed);
  const Functional fd = assemble_inc_rhs(g, sigma, V, q, IncPath::Direct);
  double gap = 0.0, scale = 1e-30;
  for (int d = 0; d < V.dof_count; ++d) {
    if (V.essential[d]) continue;
    gap = std::max(gap, std::abs(fc.values[d] - fd.values[d]));
    scale = std::max(scale, std::abs(fc.values[d]));
  }
  return gap / scale;
}

double curl_form_gap(const JetFn& g, const JetFn& sigma, const FeSpace& W, const AssemblyQuad& q) {
  const Functional f1 = assemble_curl_rhs(g, sigma, W, q, CurlForm::Boundary);
  const Functional f2 = assemble_curl_rhs(g, sigma, W, q, CurlForm::RotAdjoint);
  double gap = 0.0, scale = 1e-30;
  for (int d = 0; d < W.dof_count; ++d) {
    if (W.essential[d]) continue;
    gap = std::max(gap, std::abs(f1.values[d] - f2.values[d]));
    scale = std::max(scale, std::abs(f1.values[d]));
  }
  return gap / scale;
}

double connection_curl_identity_gap(const DofVector& g, const TriMesh& mesh, int k_test,
                                    const AssemblyQuad& q, unsigned seed) {
  const JetFn gfn = regge_jets(g);
  std::set<std::string> all_tags;
  for (const auto& [e, tag] : mesh.boundary_tags) all_tags.insert(tag);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k_test, all_tags);

  BoundaryData bd;  // no Dirichlet skipping, no Neumann data: the raw functional
  const Functional kg = assemble_curvature_rhs(gfn, V, bd, q);

  std::mt19937 rng(seed);
  auto gen = std::make_shared<std::vector<Eigen::VectorXd>>();
  double gap = 0.0, scale = 1e-30;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> u(V.dof_count, 0.0);
    for (int d = 0; d < V.dof_count; ++d)
      if (!V.essential[d]) u[d] = rnd(rng);
    gen->clear();
    for (int t = 0; t < mesh.num_triangles(); ++t) gen->push_back(V.generator_coeffs(t, u));
    auto rot_u = [&](int t, const Vec2& p) {
      Vec2 grad;
      V.eval_scalar(t, p, (*gen)[t], &grad);
      return Vec2{grad.y, -grad.x};
    };
    const double lhs = connection_action(gfn, mesh, rot_u, q);
    const double rhs = kg.action(u);
    gap = std::max(gap, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  return gap / scale;
}

double functional_gauss_bonnet_gap(const StudyConfig& cfg, int n, int k) {
  const TriMesh mesh = perturb(structured_unit_square(n, cfg.origin, cfg.extent),
                               cfg.perturb_amplitude, cfg.seed);
  const AssemblyQuad q = study_quad(cfg, k, k + 1);
  const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
  const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1);

  // all-Neumann data derived symbolically from the metric
  BoundaryData bd;
  bd.gex = &cfg.gex;
  std::set<std::string> tags;
  for (const auto& [e, tag] : mesh.boundary_tags) tags.insert(tag);
  for (const auto& tag : tags) {
    bd.neumann_tags.insert(tag);
    bd.neumann.emplace(tag, symbolic_geodesic_curvature(cfg.gex.entry(0, 0), cfg.gex.entry(0, 1),
                                                        cfg.gex.entry(1, 1),
                                                        rectangle_tag_tangent(tag)));
  }
  const Functional f = assemble_curvature_rhs(regge_jets(g), V, bd, q);
  const std::vector<double> ones(V.dof_count, 1.0);
  const double action = f.action(ones);

  const QuadRule& rule = triangle_rule(std::min(25, q.volume + 4));
  double exact = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.vertices[tri[0]];
    const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
    const double jac = cross(d1, d2);
    for (std::size_t iq = 0; iq < rule.points.size(); ++iq) {
      const Vec2 p = v0 + d1 * rule.points[iq].x + d2 * rule.points[iq].y;
      exact += rule.weights[iq] * jac * gauss_curvature_at(cfg.gex, p) *
               std::sqrt(cfg.gex.value(p).det());
    }
  }
  return std::abs(action - exact);
}

}  // namespace checks

CheckReport run_ops_check(const StudyConfig& cfg) {
  CheckReport rep;
  auto add = [&rep](const std::string& name, double value, double tol) {
    rep.items.push_back({name, value, tol, value <= tol});
  };

  add("per-element gauss-bonnet", checks::gauss_bonnet_residual(91u, 6, 16), 1e-8);

  const auto vm = checks::variation_mismatch(cfg.gex, cfg.sigma);
  const char* names[3] = {"variation volume", "variation edge", "variation vertex"};
  for (int i = 0; i < 3; ++i) {
    add(std::string(names[i]) + " (t=1e-4)", vm.fine[i], 1e-6);
    add(std::string(names[i]) + " O(t^2) ratio", std::abs(vm.coarse[i] / vm.fine[i] - 100.0), 30.0);
  }

  add("identity star(div Sg)flat = -curl_g", checks::divcurl_identity_residual(61u, 100), 1e-8);
  add("identity div div Sg = -inc_g", checks::divdiv_identity_residual(62u, 100), 1e-8);

  const TriMesh mesh = perturb(structured_unit_square(4, cfg.origin, cfg.extent),
                               cfg.perturb_amplitude, cfg.seed);
  for (int k = 0; k <= 2; ++k) {
    add("euclidean curl orthogonality k=" + std::to_string(k), checks::feec_curl_orthogonality(mesh, k),
        1e-10);
    add("euclidean inc orthogonality k=" + std::to_string(k), checks::feec_inc_orthogonality(mesh, k),
        1e-10);
  }

  {
    const int k = 1;
    const AssemblyQuad q = study_quad(cfg, k, k + 1);
    const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
    const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
    const DofVector sh = regge_interpolate(cfg.sigma, rspace, q.volume);
    std::set<std::string> all_tags;
    for (const auto& [e, tag] : mesh.boundary_tags) all_tags.insert(tag);
    const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, all_tags);
    const FeSpace W = build_space(mesh, SpaceKind::Bdm, k, all_tags);
    add("inc direct vs composed", checks::inc_path_gap(regge_jets(g), regge_jets(sh), V, q), 1e-8);
    add("curl form agreement", checks::curl_form_gap(regge_jets(g), regge_jets(sh), W, q), 1e-9);
    add("curl of connection equals curvature",
        checks::connection_curl_identity_gap(g, mesh, k + 1, q, 7u), 1e-7);

    const double r10 = verify_integral_representation(g, V, 10, q);
    const double r20 = verify_integral_representation(g, V, 20, q);
    const double r40 = verify_integral_representation(g, V, 40, q);
    add("integral representation (20 t-points)", r20, 1e-6);
    add("integral representation monotone 10->20", r20 / std::max(r10, 1e-300), 1.1);
    add("integral representation monotone 20->40", r40 / std::max(r20, 1e-300), 1.1);
  }

  add("functional gauss-bonnet vs exact curvature integral",
      checks::functional_gauss_bonnet_gap(cfg, 8, 1), 2e-3);
  return rep;
}

}  // namespace reggecurv
