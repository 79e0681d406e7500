#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "reggecurv/study.hpp"

using namespace reggecurv;

namespace {

const char* kSmokeConfig = R"json({
  "metric": {"graph": "1/2*(x^2+y^2) - 1/12*(x^4+y^4)"},
  "domain": {"origin": [0,0], "extent": [1,1]},
  "mesh": {"n0": 2, "levels": 2, "perturb_amplitude": 0.25, "seed": 7},
  "degrees": [0],
  "boundary": {
    "dirichlet_tags": ["right", "bottom"],
    "neumann_tags": ["left", "top"],
    "dirichlet": {"right": "auto", "bottom": "auto"},
    "neumann": {"left": "0", "top": "auto"}
  },
  "connection": {"space": "bdm", "essential_tags": "none"}
})json";

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(load_config("{"), ConfigError);
  CHECK_THROWS_AS(load_config("{}"), ConfigError);

  // missing neumann expression names the tag
  try {
    load_config(R"json({
      "metric": {"graph": "x*y"},
      "boundary": {"neumann_tags": ["top"], "neumann": {}}
    })json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("top") != std::string::npos);
  }

  // a tag cannot be both Dirichlet and Neumann
  CHECK_THROWS_AS(load_config(R"json({
    "metric": {"graph": "x*y"},
    "boundary": {"dirichlet_tags": ["top"], "neumann_tags": ["top"],
                  "dirichlet": {"top": "0"}, "neumann": {"top": "0"}}
  })json"),
                  ConfigError);

  // malformed expression
  CHECK_THROWS_AS(load_config(R"json({"metric": {"graph": "sin(x"}})json"), ConfigError);
  // bad amplitude
  CHECK_THROWS_AS(load_config(R"json({
    "metric": {"graph": "x*y"}, "mesh": {"perturb_amplitude": 0.5}
  })json"),
                  ConfigError);
}

TEST_CASE("symbolic curvature data matches the numeric oracles") {
  const StudyConfig cfg = load_config(kSmokeConfig);
  const Expr ks = symbolic_gauss_curvature(cfg.gex.entry(0, 0), cfg.gex.entry(0, 1),
                                           cfg.gex.entry(1, 1));
  for (double x : {0.1, 0.5, 0.9})
    for (double y : {0.2, 0.7})
      CHECK(ks.evaluate(x, y) == doctest::Approx(gauss_curvature_at(cfg.gex, {x, y})).epsilon(1e-11));

  for (const std::string tag : {"left", "top", "right", "bottom"}) {
    const Vec2 tau = rectangle_tag_tangent(tag);
    const Expr kappa = symbolic_geodesic_curvature(cfg.gex.entry(0, 0), cfg.gex.entry(0, 1),
                                                   cfg.gex.entry(1, 1), tau);
    const Vec2 p = tag == "left"   ? Vec2{0.0, 0.4}
                   : tag == "top"  ? Vec2{0.3, 1.0}
                   : tag == "right" ? Vec2{1.0, 0.6}
                                    : Vec2{0.7, 0.0};
    CHECK(kappa.evaluate(p.x, p.y) ==
          doctest::Approx(geodesic_curvature_at(cfg.gex, p, tau)).epsilon(1e-10));
  }
}

TEST_CASE("paper closed-form neumann data agrees with the auto data") {
  const StudyConfig cfg = load_config(kSmokeConfig);
  const Expr top = parse(
      "-27*(x^2-1)*y*(y^2-3)/(sqrt((x^2*(x^2-3)^2+9)^3)*sqrt(x^2*(x^2-3)^2+y^2*(y^2-3)^2+9))");
  const Expr top_auto = symbolic_geodesic_curvature(cfg.gex.entry(0, 0), cfg.gex.entry(0, 1),
                                                    cfg.gex.entry(1, 1), {-1.0, 0.0});
  for (double x : {0.1, 0.45, 0.8})
    CHECK(top.evaluate(x, 1.0) == doctest::Approx(top_auto.evaluate(x, 1.0)).epsilon(1e-10));
}

TEST_CASE("studies are deterministic byte for byte") {
  const StudyConfig cfg = load_config(kSmokeConfig);
  const StudyResult a = run_curvature_study(cfg);
  const StudyResult b = run_curvature_study(cfg);
  REQUIRE(a.csv.size() == b.csv.size());
  for (const auto& [name, text] : a.csv) CHECK(text == b.csv.at(name));

  const StudyResult c = run_interpolation_study(cfg);
  const StudyResult d = run_interpolation_study(cfg);
  for (const auto& [name, text] : c.csv) CHECK(text == d.csv.at(name));
}

TEST_CASE("flat metric study reports zero errors") {
  StudyConfig cfg = load_config(R"json({
    "metric": {"entries": {"g11": "1", "g12": "0", "g22": "1"}},
    "mesh": {"n0": 2, "levels": 2, "perturb_amplitude": 0.25, "seed": 5},
    "degrees": [0],
    "boundary": {
      "dirichlet_tags": ["left", "right", "top", "bottom"],
      "dirichlet": {"left": "0", "right": "0", "top": "0", "bottom": "0"}
    }
  })json");
  const auto meshes = study_meshes(cfg);
  const auto records = curvature_records(cfg, 0, meshes);
  for (const auto& r : records) {
    CHECK(r.errors.at("l2") <= 1e-10);
    CHECK(r.errors.at("hminus1") <= 1e-10);
  }
}

TEST_CASE("vtk export has the expected structure") {
  const TriMesh mesh = structured_unit_square(2);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 1);
  std::vector<double> coeffs(V.dof_count, 1.5);
  const std::string vtk = vtk_scalar(mesh, V, coeffs, "field", 2);
  CHECK(vtk.rfind("# vtk DataFile Version 3.0", 0) == 0);
  CHECK(vtk.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(vtk.find("SCALARS field double 1") != std::string::npos);
}
