#include "reggecurv/study.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reggecurv/quad.hpp"

namespace reggecurv {

namespace {

using nlohmann::json;

Expr parse_config_expr(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError("config: '" + where + "' must be an expression string");
  try {
    return parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ConfigError("config: bad expression in '" + where + "': " + e.what());
  }
}

std::optional<Expr> parse_data_expr(const json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "auto") return std::nullopt;
  return parse_config_expr(j, where);
}

AnalyticTensorField default_sigma() {
  return AnalyticTensorField(parse("exp(x*y/2)"), parse("sin(x+2*y)/3"), parse("2+cos(x-y)/2"));
}

const std::set<std::string> kRectangleTags{"left", "right", "top", "bottom"};

}  // namespace

Vec2 rectangle_tag_tangent(const std::string& tag) {
  // counterclockwise traversal of the rectangle boundary
  if (tag == "bottom") return {1.0, 0.0};
  if (tag == "right") return {0.0, 1.0};
  if (tag == "top") return {-1.0, 0.0};
  if (tag == "left") return {0.0, -1.0};
  throw ConfigError("unknown rectangle tag '" + tag + "'");
}

StudyConfig load_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  StudyConfig cfg;
  cfg.sigma = default_sigma();

  if (!j.contains("metric")) throw ConfigError("config: missing 'metric'");
  const json& m = j["metric"];
  if (m.contains("graph")) {
    cfg.gex = AnalyticTensorField::graph_metric(parse_config_expr(m["graph"], "metric.graph"));
  } else if (m.contains("entries")) {
    const json& e = m["entries"];
    cfg.gex = AnalyticTensorField(parse_config_expr(e.at("g11"), "metric.entries.g11"),
                                  parse_config_expr(e.at("g12"), "metric.entries.g12"),
                                  parse_config_expr(e.at("g22"), "metric.entries.g22"));
  } else {
    throw ConfigError("config: metric needs either 'graph' or 'entries'");
  }

  if (j.contains("domain")) {
    const json& d = j["domain"];
    if (d.contains("origin")) cfg.origin = {d["origin"].at(0), d["origin"].at(1)};
    if (d.contains("extent")) cfg.extent = {d["extent"].at(0), d["extent"].at(1)};
    if (cfg.extent.x <= 0.0 || cfg.extent.y <= 0.0)
      throw ConfigError("config: domain extent must be positive");
  }

  if (j.contains("mesh")) {
    const json& mm = j["mesh"];
    cfg.n0 = mm.value("n0", cfg.n0);
    cfg.levels = mm.value("levels", cfg.levels);
    cfg.perturb_amplitude = mm.value("perturb_amplitude", cfg.perturb_amplitude);
    cfg.seed = mm.value("seed", cfg.seed);
    if (cfg.n0 < 1 || cfg.levels < 1) throw ConfigError("config: mesh.n0 and mesh.levels must be >= 1");
    if (cfg.perturb_amplitude < 0.0 || cfg.perturb_amplitude > 0.25)
      throw ConfigError("config: mesh.perturb_amplitude must lie in [0, 0.25]");
  }

  if (j.contains("degrees")) {
    cfg.degrees.clear();
    for (const auto& d : j["degrees"]) {
      const int k = d.get<int>();
      if (k < 0) throw ConfigError("config: degrees must be >= 0");
      cfg.degrees.push_back(k);
    }
    if (cfg.degrees.empty()) throw ConfigError("config: degrees must be nonempty");
  }

  if (j.contains("boundary")) {
    const json& b = j["boundary"];
    for (const auto& t : b.value("dirichlet_tags", json::array())) {
      const std::string tag = t.get<std::string>();
      if (!kRectangleTags.count(tag)) throw ConfigError("config: unknown boundary tag '" + tag + "'");
      cfg.dirichlet_tags.insert(tag);
    }
    for (const auto& t : b.value("neumann_tags", json::array())) {
      const std::string tag = t.get<std::string>();
      if (!kRectangleTags.count(tag)) throw ConfigError("config: unknown boundary tag '" + tag + "'");
      if (cfg.dirichlet_tags.count(tag))
        throw ConfigError("config: tag '" + tag + "' is both Dirichlet and Neumann");
      cfg.neumann_tags.insert(tag);
    }
    if (b.contains("dirichlet"))
      for (const auto& [tag, expr] : b["dirichlet"].items())
        cfg.dirichlet_data[tag] = parse_data_expr(expr, "boundary.dirichlet." + tag);
    if (b.contains("neumann"))
      for (const auto& [tag, expr] : b["neumann"].items())
        cfg.neumann_data[tag] = parse_data_expr(expr, "boundary.neumann." + tag);
    if (b.contains("corner_angles"))
      for (const auto& c : b["corner_angles"])
        cfg.corner_angles.push_back({{c.at("at").at(0), c.at("at").at(1)}, c.at("angle")});
    for (const auto& tag : cfg.neumann_tags)
      if (!cfg.neumann_data.count(tag))
        throw ConfigError("config: missing Neumann expression for tag '" + tag + "'");
    for (const auto& tag : cfg.dirichlet_tags)
      if (!cfg.dirichlet_data.count(tag))
        throw ConfigError("config: missing Dirichlet expression for tag '" + tag + "'");
  }

  if (j.contains("connection")) {
    const json& c = j["connection"];
    cfg.connection_space = c.value("space", cfg.connection_space);
    if (cfg.connection_space != "bdm" && cfg.connection_space != "rt")
      throw ConfigError("config: connection.space must be 'bdm' or 'rt'");
    if (c.contains("essential_tags")) {
      const json& e = c["essential_tags"];
      std::set<std::string> tags;
      if (e.is_string()) {
        if (e.get<std::string>() == "all") {
          tags = kRectangleTags;
        } else if (e.get<std::string>() == "none") {
          // empty
        } else {
          throw ConfigError("config: connection.essential_tags must be 'all', 'none' or a list");
        }
      } else {
        for (const auto& t : e) tags.insert(t.get<std::string>());
      }
      cfg.connection_essential = tags;
    }
  }

  if (j.contains("sigma")) {
    const json& s = j["sigma"];
    cfg.sigma = AnalyticTensorField(parse_config_expr(s.at("s11"), "sigma.s11"),
                                    parse_config_expr(s.at("s12"), "sigma.s12"),
                                    parse_config_expr(s.at("s22"), "sigma.s22"));
  }

  if (j.contains("quadrature")) {
    cfg.quad_volume = j["quadrature"].value("volume", -1);
    cfg.quad_edge = j["quadrature"].value("edge", -1);
  }
  if (j.contains("output")) cfg.write_vtk = j["output"].value("vtk", false);
  return cfg;
}

StudyConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

// --- symbolic boundary data ---------------------------------------------------

namespace {

struct SymbolicMetric {
  Expr g[2][2];
  Expr dg[2][2][2];  // dg[k][i][j] = d_k g_ij
  Expr det;
  Expr inv[2][2];

  explicit SymbolicMetric(const Expr& g11, const Expr& g12, const Expr& g22) {
    g[0][0] = g11;
    g[0][1] = g[1][0] = g12;
    g[1][1] = g22;
    for (int k = 0; k < 2; ++k) {
      const Var v = k == 0 ? Var::X : Var::Y;
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj) dg[k][i][jj] = g[i][jj].differentiate(v).simplify();
    }
    det = (g11 * g22 - g12 * g12).simplify();
    inv[0][0] = (g22 / det).simplify();
    inv[0][1] = inv[1][0] = (-(g12 / det)).simplify();
    inv[1][1] = (g11 / det).simplify();
  }

  Expr gamma1(int i, int j, int l) const {
    return ((dg[i][j][l] + dg[j][l][i] - dg[l][i][j]) * Expr::constant(0.5)).simplify();
  }
  Expr gamma2(int i, int j, int k) const {
    Expr acc = Expr::constant(0.0);
    for (int l = 0; l < 2; ++l) acc = acc + inv[k][l] * gamma1(i, j, l);
    return acc.simplify();
  }
};

}  // namespace

Expr symbolic_gauss_curvature(const Expr& g11, const Expr& g12, const Expr& g22) {
  const SymbolicMetric m(g11, g12, g22);
  // R_1221 (1-based) = d_0 Gamma_{110} - d_1 Gamma_{010}
  //                    - Gamma_{00p} Gamma_{11}^p + Gamma_{10p} Gamma_{01}^p
  Expr r = m.gamma1(1, 1, 0).differentiate(Var::X) - m.gamma1(0, 1, 0).differentiate(Var::Y);
  for (int p = 0; p < 2; ++p)
    r = r - m.gamma1(0, 0, p) * m.gamma2(1, 1, p) + m.gamma1(1, 0, p) * m.gamma2(0, 1, p);
  return (r / m.det).simplify();
}

Expr symbolic_geodesic_curvature(const Expr& g11, const Expr& g12, const Expr& g22, const Vec2& tau) {
  const SymbolicMetric m(g11, g12, g22);
  const Vec2 nu = rot90(tau);
  const double t[2] = {tau.x, tau.y}, n[2] = {nu.x, nu.y};
  Expr gamma_ttn = Expr::constant(0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        gamma_ttn = gamma_ttn + Expr::constant(t[i] * t[j] * n[k]) * m.gamma2(i, j, k);
  Expr gtt = Expr::constant(0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gtt = gtt + Expr::constant(t[i] * t[j]) * m.g[i][j];
  gtt = gtt.simplify();
  const Expr sq = Expr::call(ExprFn::Sqrt, m.det);
  return (sq * gamma_ttn / (gtt * Expr::call(ExprFn::Sqrt, gtt))).simplify();
}

// --- common study plumbing ----------------------------------------------------

AssemblyQuad study_quad(const StudyConfig& cfg, int k_regge, int k_test) {
  AssemblyQuad q = AssemblyQuad::for_degrees(k_regge, k_test);
  if (cfg.quad_volume >= 0) q.volume = cfg.quad_volume;
  if (cfg.quad_edge >= 0) q.edge = cfg.quad_edge;
  return q;
}

BoundaryData make_boundary_data(const StudyConfig& cfg, const TriMesh& mesh) {
  BoundaryData bd;
  bd.dirichlet_tags = cfg.dirichlet_tags;
  bd.neumann_tags = cfg.neumann_tags;
  bd.gex = &cfg.gex;
  for (const auto& [tag, data] : cfg.dirichlet_data) {
    if (data) {
      bd.dirichlet.emplace(tag, *data);
    } else {
      bd.dirichlet.emplace(tag, symbolic_gauss_curvature(cfg.gex.entry(0, 0), cfg.gex.entry(0, 1),
                                                         cfg.gex.entry(1, 1)));
    }
  }
  for (const auto& [tag, data] : cfg.neumann_data) {
    if (data) {
      bd.neumann.emplace(tag, *data);
    } else {
      bd.neumann.emplace(tag, symbolic_geodesic_curvature(cfg.gex.entry(0, 0), cfg.gex.entry(0, 1),
                                                          cfg.gex.entry(1, 1),
                                                          rectangle_tag_tangent(tag)));
    }
  }
  for (const auto& [at, angle] : cfg.corner_angles) {
    const double tol = 1e-9 * (1.0 + mesh.h_max);
    for (int v = 0; v < mesh.num_vertices(); ++v)
      if (norm(mesh.vertices[v] - at) <= tol) bd.neumann_corner_angles[v] = angle;
  }
  return bd;
}

std::vector<TriMesh> study_meshes(const StudyConfig& cfg) {
  return mesh_sequence(cfg.n0, cfg.levels, cfg.perturb_amplitude, cfg.seed, cfg.origin, cfg.extent);
}

namespace {

std::string degree_file(const std::string& stem, const std::string& suffix, int k) {
  return stem + "_" + suffix + std::to_string(k) + ".csv";
}

}  // namespace

// --- studies -------------------------------------------------------------------

std::vector<ConvergenceRecord> curvature_records(const StudyConfig& cfg, int k,
                                                 const std::vector<TriMesh>& meshes) {
  std::vector<ConvergenceRecord> records;
  for (std::size_t level = 0; level < meshes.size(); ++level) {
    const TriMesh& mesh = meshes[level];
    const AssemblyQuad q = study_quad(cfg, k, k + 1);
    const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
    const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
    const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, cfg.dirichlet_tags);
    const BoundaryData bd = make_boundary_data(cfg, mesh);
    const DofVector kh = lift_curvature(g, V, bd, q);

    const ScalarFieldFn kh_fn = scalar_fe_field(kh);
    const ScalarFieldFn kex_fn = [&cfg](int, const Vec2& p) {
      return gauss_curvature_at(cfg.gex, p);
    };
    const int err_qd = std::min(25, 2 * (k + 3) + 4);
    ConvergenceRecord rec;
    rec.level = static_cast<int>(level);
    rec.n = cfg.n0 << level;
    rec.h_max = mesh.h_max;
    rec.ndof = V.dof_count;
    rec.errors["l2"] = l2_error_scalar(mesh, kex_fn, kh_fn, err_qd);
    rec.errors["hminus1"] = hminus1_error(
        mesh, k, [&](int t, const Vec2& p) { return kex_fn(t, p) - kh_fn(t, p); });
    records.push_back(rec);
  }
  fill_eoc(records);
  return records;
}

StudyResult run_curvature_study(const StudyConfig& cfg) {
  StudyResult out;
  const auto meshes = study_meshes(cfg);
  for (int k : cfg.degrees) {
    const auto records = curvature_records(cfg, k, meshes);
    out.csv[degree_file("curvature", "k", k)] = records_to_csv(records);
    if (cfg.write_vtk) {
      const TriMesh& mesh = meshes.back();
      const AssemblyQuad q = study_quad(cfg, k, k + 1);
      const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
      const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
      const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, cfg.dirichlet_tags);
      const DofVector kh = lift_curvature(g, V, make_boundary_data(cfg, mesh), q);
      out.vtk["curvature_k" + std::to_string(k) + ".vtk"] =
          vtk_scalar(mesh, V, kh.coeffs, "K_h", k + 2);
    }
  }
  return out;
}

std::vector<ConvergenceRecord> connection_records(const StudyConfig& cfg, int k,
                                                  const std::vector<TriMesh>& meshes,
                                                  const std::string& space_kind) {
  const SpaceKind kind = space_kind == "bdm" ? SpaceKind::Bdm : SpaceKind::Rt;
  std::set<std::string> essential = kRectangleTags;
  if (cfg.connection_essential) essential = *cfg.connection_essential;
  std::vector<ConvergenceRecord> records;
  for (std::size_t level = 0; level < meshes.size(); ++level) {
    const TriMesh& mesh = meshes[level];
    const AssemblyQuad q = study_quad(cfg, k, k + 1);
    const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
    const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
    const FeSpace W = build_space(mesh, kind, k, essential);
    const DofVector omega_h = lift_connection(g, W, q, &cfg.gex);

    const VectorFieldFn w_fn = vector_fe_field(omega_h);
    const VectorFieldFn wex_fn = [&cfg](int, const Vec2& p) {
      return connection_oneform_at(cfg.gex, p);
    };
    ConvergenceRecord rec;
    rec.level = static_cast<int>(level);
    rec.n = cfg.n0 << level;
    rec.h_max = mesh.h_max;
    rec.ndof = W.dof_count;
    rec.errors["l2"] = l2_error_vector(mesh, wex_fn, w_fn, std::min(25, 2 * (k + 3) + 4));
    records.push_back(rec);
  }
  fill_eoc(records);
  return records;
}

StudyResult run_connection_study(const StudyConfig& cfg) {
  StudyResult out;
  const auto meshes = study_meshes(cfg);
  for (int k : cfg.degrees) {
    const auto records = connection_records(cfg, k, meshes, cfg.connection_space);
    out.csv[degree_file("connection", cfg.connection_space, k)] = records_to_csv(records);
    if (cfg.write_vtk) {
      const TriMesh& mesh = meshes.back();
      const AssemblyQuad q = study_quad(cfg, k, k + 1);
      const SpaceKind kind = cfg.connection_space == "bdm" ? SpaceKind::Bdm : SpaceKind::Rt;
      std::set<std::string> essential = kRectangleTags;
      if (cfg.connection_essential) essential = *cfg.connection_essential;
      const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
      const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
      const FeSpace W = build_space(mesh, kind, k, essential);
      const DofVector omega_h = lift_connection(g, W, q, &cfg.gex);
      out.vtk["connection_" + cfg.connection_space + std::to_string(k) + ".vtk"] =
          vtk_vector(mesh, W, omega_h.coeffs, "omega_h", k + 2);
    }
  }
  return out;
}

std::vector<ConvergenceRecord> curl_records(const StudyConfig& cfg, int k,
                                            const std::vector<TriMesh>& meshes) {
  std::vector<ConvergenceRecord> records;
  {
    for (std::size_t level = 0; level < meshes.size(); ++level) {
      const TriMesh& mesh = meshes[level];
      // interpolation-difference functionals are tiny; over-integrate so the
      // two-form comparison is not dominated by quadrature noise
      AssemblyQuad q = study_quad(cfg, k, k);
      q.volume = std::min(25, std::max(q.volume, 2 * k + 12));
      q.edge = std::max(q.edge, 2 * k + 12);
      const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
      const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
      const DofVector sh = regge_interpolate(cfg.sigma, rspace, q.volume);
      const FeSpace W = build_space(mesh, SpaceKind::Bdm, k, kRectangleTags);

      const JetFn gfn = regge_jets(g);
      const JetFn diff = difference_jets(analytic_jets(cfg.sigma), regge_jets(sh));
      const Functional f1 = assemble_curl_rhs(gfn, diff, W, q, CurlForm::Boundary);
      const Functional f2 = assemble_curl_rhs(gfn, diff, W, q, CurlForm::RotAdjoint);
      const SparseSym mass = vector_mass(W, q);
      const DofVector lifted = project_vector(W, mass, f1);

      double gap = 0.0, scale = 0.0;
      for (int d = 0; d < W.dof_count; ++d) {
        if (W.essential[d]) continue;
        gap = std::max(gap, std::abs(f1.values[d] - f2.values[d]));
        scale = std::max(scale, std::abs(f1.values[d]));
      }
      ConvergenceRecord rec;
      rec.level = static_cast<int>(level);
      rec.n = cfg.n0 << level;
      rec.h_max = mesh.h_max;
      rec.ndof = W.dof_count;
      rec.errors["lifted_l2"] = lifted_l2_norm(mass, lifted);
      rec.errors["form_gap"] = scale > 0.0 ? gap / scale : gap;
      records.push_back(rec);
    }
  }
  fill_eoc(records);
  return records;
}

StudyResult run_curl_study(const StudyConfig& cfg) {
  StudyResult out;
  const auto meshes = study_meshes(cfg);
  for (int k : cfg.degrees)
    out.csv[degree_file("curl", "k", k)] = records_to_csv(curl_records(cfg, k, meshes));
  return out;
}

std::vector<ConvergenceRecord> inc_records(const StudyConfig& cfg, int k,
                                           const std::vector<TriMesh>& meshes) {
  std::vector<ConvergenceRecord> records;
  {
    for (std::size_t level = 0; level < meshes.size(); ++level) {
      const TriMesh& mesh = meshes[level];
      AssemblyQuad q = study_quad(cfg, k, k + 1);
      q.volume = std::min(25, std::max(q.volume, 2 * k + 12));
      q.edge = std::max(q.edge, 2 * k + 12);
      const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
      const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
      const DofVector sh = regge_interpolate(cfg.sigma, rspace, q.volume);
      std::set<std::string> all_tags;
      for (const auto& [e, tag] : mesh.boundary_tags) all_tags.insert(tag);
      const FeSpace V = build_space(mesh, SpaceKind::Lagrange, k + 1, all_tags);

      const JetFn gfn = regge_jets(g);
      const JetFn diff = difference_jets(analytic_jets(cfg.sigma), regge_jets(sh));
      const Functional fc = assemble_inc_rhs(gfn, diff, V, q, IncPath::Composed);
      const Functional fd = assemble_inc_rhs(gfn, diff, V, q, IncPath::Direct);
      const SparseSym mass = scalar_mass(V, nullptr, q);
      const DofVector lifted = project_scalar(mass, fc, {});

      double gap = 0.0, scale = 0.0;
      for (int d = 0; d < V.dof_count; ++d) {
        if (V.essential[d]) continue;
        gap = std::max(gap, std::abs(fc.values[d] - fd.values[d]));
        scale = std::max(scale, std::abs(fc.values[d]));
      }
      ConvergenceRecord rec;
      rec.level = static_cast<int>(level);
      rec.n = cfg.n0 << level;
      rec.h_max = mesh.h_max;
      rec.ndof = V.dof_count;
      rec.errors["lifted_l2"] = lifted_l2_norm(mass, lifted);
      rec.errors["path_gap"] = scale > 0.0 ? gap / scale : gap;
      records.push_back(rec);
    }
  }
  fill_eoc(records);
  return records;
}

StudyResult run_inc_study(const StudyConfig& cfg) {
  StudyResult out;
  const auto meshes = study_meshes(cfg);
  for (int k : cfg.degrees)
    out.csv[degree_file("inc", "k", k)] = records_to_csv(inc_records(cfg, k, meshes));
  return out;
}

std::vector<ConvergenceRecord> interpolation_records(const StudyConfig& cfg, int k,
                                                     const std::vector<TriMesh>& meshes) {
  std::vector<ConvergenceRecord> records;
  {
    for (std::size_t level = 0; level < meshes.size(); ++level) {
      const TriMesh& mesh = meshes[level];
      const AssemblyQuad q = study_quad(cfg, k, k);
      const FeSpace rspace = build_space(mesh, SpaceKind::Regge, k);
      const DofVector g = regge_interpolate(cfg.gex, rspace, q.volume);
      const JetFn gfn = regge_jets(g);

      const QuadRule& rule = triangle_rule(std::min(25, 2 * k + 6));
      double max_err = 0.0, l2 = 0.0;
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 v0 = mesh.vertices[tri[0]];
        const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
        const double jac = cross(d1, d2);
        for (std::size_t iq = 0; iq < rule.points.size(); ++iq) {
          const Vec2 p = v0 + d1 * rule.points[iq].x + d2 * rule.points[iq].y;
          const SymMat2 diff = gfn(t, p, false).v - cfg.gex.value(p);
          const double e2 = ddot(diff, diff);
          max_err = std::max(max_err, std::sqrt(e2));
          l2 += rule.weights[iq] * jac * e2;
        }
      }
      ConvergenceRecord rec;
      rec.level = static_cast<int>(level);
      rec.n = cfg.n0 << level;
      rec.h_max = mesh.h_max;
      rec.ndof = rspace.dof_count;
      rec.errors["max"] = max_err;
      rec.errors["l2"] = std::sqrt(l2);
      records.push_back(rec);
    }
  }
  fill_eoc(records);
  return records;
}

StudyResult run_interpolation_study(const StudyConfig& cfg) {
  StudyResult out;
  const auto meshes = study_meshes(cfg);
  for (int k : cfg.degrees)
    out.csv[degree_file("interpolate", "k", k)] = records_to_csv(interpolation_records(cfg, k, meshes));
  return out;
}

// --- VTK -------------------------------------------------------------------------

namespace {

struct VtkSamples {
  std::vector<Vec2> points;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> point_tri;  // owning triangle per point
};

VtkSamples refine_mesh(const TriMesh& mesh, int refine) {
  VtkSamples s;
  const int r = std::max(1, refine);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.vertices[tri[0]];
    const Vec2 d1 = mesh.vertices[tri[1]] - v0, d2 = mesh.vertices[tri[2]] - v0;
    const int base = static_cast<int>(s.points.size());
    auto idx = [&](int i, int jj) { return base + jj * (r + 2) - jj * (jj - 1) / 2 - jj + i; };
    for (int jj = 0; jj <= r; ++jj)
      for (int i = 0; i + jj <= r; ++i) {
        s.points.push_back(v0 + d1 * (static_cast<double>(i) / r) + d2 * (static_cast<double>(jj) / r));
        s.point_tri.push_back(t);
      }
    for (int jj = 0; jj < r; ++jj)
      for (int i = 0; i + jj < r; ++i) {
        s.cells.push_back({idx(i, jj), idx(i + 1, jj), idx(i, jj + 1)});
        if (i + jj + 1 < r) s.cells.push_back({idx(i + 1, jj), idx(i + 1, jj + 1), idx(i, jj + 1)});
      }
  }
  return s;
}

std::string vtk_header(const VtkSamples& s, const std::string& title) {
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << s.points.size() << " double\n";
  os.precision(17);
  for (const auto& p : s.points) os << p.x << " " << p.y << " 0\n";
  os << "CELLS " << s.cells.size() << " " << 4 * s.cells.size() << "\n";
  for (const auto& c : s.cells) os << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  os << "CELL_TYPES " << s.cells.size() << "\n";
  for (std::size_t i = 0; i < s.cells.size(); ++i) os << "5\n";
  return os.str();
}

}  // namespace

std::string vtk_scalar(const TriMesh& mesh, const FeSpace& space, const std::vector<double>& coeffs,
                       const std::string& name, int refine) {
  const VtkSamples s = refine_mesh(mesh, refine);
  std::ostringstream os;
  os << vtk_header(s, name);
  os << "POINT_DATA " << s.points.size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  os.precision(17);
  std::vector<Eigen::VectorXd> gen;
  for (int t = 0; t < mesh.num_triangles(); ++t) gen.push_back(space.generator_coeffs(t, coeffs));
  for (std::size_t i = 0; i < s.points.size(); ++i)
    os << space.eval_scalar(s.point_tri[i], s.points[i], gen[s.point_tri[i]]) << "\n";
  return os.str();
}

std::string vtk_vector(const TriMesh& mesh, const FeSpace& space, const std::vector<double>& coeffs,
                       const std::string& name, int refine) {
  const VtkSamples s = refine_mesh(mesh, refine);
  std::ostringstream os;
  os << vtk_header(s, name);
  os << "POINT_DATA " << s.points.size() << "\nVECTORS " << name << " double\n";
  os.precision(17);
  std::vector<Eigen::VectorXd> gen;
  for (int t = 0; t < mesh.num_triangles(); ++t) gen.push_back(space.generator_coeffs(t, coeffs));
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const Vec2 v = space.eval_vector(s.point_tri[i], s.points[i], gen[s.point_tri[i]]);
    os << v.x << " " << v.y << " 0\n";
  }
  return os.str();
}

}  // namespace reggecurv
