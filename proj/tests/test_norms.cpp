#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "reggecurv/norms.hpp"
#include "reggecurv/quad.hpp"

using namespace reggecurv;

TEST_CASE("l2 error of an exactly represented polynomial vanishes") {
  const TriMesh mesh = perturb(structured_unit_square(3), 0.25, 3);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 2);
  const Expr ref = parse("1 + x - 2*y + x*y");
  // nodal interpolation is exact for degree <= 2
  DofVector u;
  u.space = &V;
  u.coeffs.resize(V.dof_count);
  for (int d = 0; d < V.dof_count; ++d)
    u.coeffs[d] = ref.evaluate(V.dof_point[d].x, V.dof_point[d].y);
  const double err = l2_error_scalar(
      mesh, scalar_fe_field(u), [&](int, const Vec2& p) { return ref.evaluate(p.x, p.y); }, 8);
  CHECK(err <= 1e-13);
}

TEST_CASE("l2 norm of a single hat matches the mass-matrix entry") {
  const TriMesh mesh = structured_unit_square(2);
  const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 1);
  // interior vertex of the n=2 grid
  int vc = -1;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    bool boundary = false;
    for (const auto& [e, tag] : mesh.boundary_tags) {
      (void)tag;
      if (mesh.edges[e][0] == v || mesh.edges[e][1] == v) boundary = true;
    }
    if (!boundary) vc = v;
  }
  REQUIRE(vc >= 0);
  DofVector u;
  u.space = &V;
  u.coeffs.assign(V.dof_count, 0.0);
  u.coeffs[vc] = 1.0;

  // independent oracle: sum over incident triangles of int lambda^2 = area/6
  double mass = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (tri[0] == vc || tri[1] == vc || tri[2] == vc) mass += mesh.signed_area(t) / 6.0;
  }
  const double norm_u =
      l2_error_scalar(mesh, scalar_fe_field(u), [](int, const Vec2&) { return 0.0; }, 6);
  CHECK(norm_u == doctest::Approx(std::sqrt(mass)).epsilon(1e-12));
}

TEST_CASE("h-minus-one norm of a single fourier mode") {
  // err = sin(pi x) sin(pi y): -lap w = err gives w = err / (2 pi^2) and
  // ||w||_H1 = ||err||_L2 sqrt(1 + 2 pi^2) / (2 pi^2) with ||err||_L2 = 1/2
  const TriMesh mesh = perturb(structured_unit_square(8), 0.25, 5);
  const Expr err = parse("sin(3.14159265358979323846*x)*sin(3.14159265358979323846*y)");
  const double got = hminus1_error(
      mesh, 2, [&](int, const Vec2& p) { return err.evaluate(p.x, p.y); });
  const double pi2 = 2.0 * M_PI * M_PI;
  const double expected = 0.5 * std::sqrt(1.0 + pi2) / pi2;
  CHECK(got == doctest::Approx(expected).epsilon(2e-4 / expected));

  const double zero = hminus1_error(mesh, 0, [](int, const Vec2&) { return 0.0; });
  CHECK(zero <= 1e-14);
}

TEST_CASE("poincare comparison of the two norms") {
  const TriMesh mesh = perturb(structured_unit_square(4), 0.25, 9);
  const Expr e = parse("x*y*(1-x)*(1-y)*exp(x)");
  auto fn = [&](int, const Vec2& p) { return e.evaluate(p.x, p.y); };
  const double l2 = l2_error_scalar(mesh, fn, [](int, const Vec2&) { return 0.0; }, 10);
  const double hm1 = hminus1_error(mesh, 0, fn);
  CHECK(hm1 >= 0.0);
  // H^-1 <= C L2 with the unit-square Poincare constant sqrt(1+1/(2 pi^2))
  CHECK(hm1 <= std::sqrt(1.0 + 1.0 / (2.0 * M_PI * M_PI)) * l2);
}

TEST_CASE("eoc bookkeeping") {
  std::vector<ConvergenceRecord> recs(3);
  for (int l = 0; l < 3; ++l) {
    recs[l].level = l;
    recs[l].n = 2 << l;
    recs[l].h_max = 1.0 / (2 << l);
    recs[l].ndof = 10 * (l + 1);
  }
  recs[0].errors["e"] = 1.0;
  recs[1].errors["e"] = 0.5;
  recs[2].errors["e"] = 0.25;
  recs[0].errors["f"] = 1.0;
  recs[1].errors["f"] = 0.25;
  recs[2].errors["f"] = 0.0625;
  fill_eoc(recs);
  CHECK(recs[1].eoc["e"] == doctest::Approx(1.0));
  CHECK(recs[2].eoc["e"] == doctest::Approx(1.0));
  CHECK(recs[2].eoc["f"] == doctest::Approx(2.0));

  const std::string csv = records_to_csv(recs);
  CHECK(csv.rfind("level,n,h,ndof,e,f,e_eoc,f_eoc\n", 0) == 0);
  // the first level has no rate: rendered as '-'
  CHECK(csv.find(",-,-") != std::string::npos);
}
