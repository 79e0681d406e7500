#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "reggecurv/mesh.hpp"

using namespace reggecurv;

TEST_CASE("structured mesh counts") {
  const TriMesh m1 = structured_unit_square(1);
  CHECK(m1.num_vertices() == 4);
  CHECK(m1.num_triangles() == 2);
  CHECK(m1.num_edges() == 5);

  const TriMesh m2 = structured_unit_square(2);
  CHECK(m2.num_vertices() == 9);
  CHECK(m2.num_edges() == 16);
  CHECK(m2.num_triangles() == 8);
  CHECK(m2.num_vertices() - m2.num_edges() + m2.num_triangles() == 1);

  const TriMesh m4 = structured_unit_square(4);
  CHECK(m4.h_max == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("counterclockwise triangles and inward normals") {
  const TriMesh m = perturb(structured_unit_square(5), 0.25, 3);
  for (int t = 0; t < m.num_triangles(); ++t) {
    CHECK(m.signed_area(t) > 0.0);
    const Vec2 c = m.centroid(t);
    for (int le = 0; le < 3; ++le) {
      const auto s = m.side(t, le);
      const Vec2 mid = (s.from + s.to) * 0.5;
      CHECK(dot(s.normal, c - mid) > 0.0);
    }
  }
}

TEST_CASE("interior edge traversals are opposite") {
  const TriMesh m = perturb(structured_unit_square(4), 0.2, 11);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.is_boundary_edge(e)) continue;
    const int tp = m.edge_tris[e][0], tm = m.edge_tris[e][1];
    Vec2 tan_p{}, tan_m{};
    for (int le = 0; le < 3; ++le) {
      if (m.tri_edges[tp][le].first == e) tan_p = m.side(tp, le).tangent;
      if (m.tri_edges[tm][le].first == e) tan_m = m.side(tm, le).tangent;
    }
    CHECK(norm(tan_p + tan_m) < 1e-14);
    CHECK(dot(tan_p, m.edge_tangent(e)) == doctest::Approx(1.0));
  }
}

TEST_CASE("boundary tags cover the rectangle sides") {
  const TriMesh m = structured_unit_square(3, {0.0, 0.0}, {2.0, 1.0});
  std::set<std::string> tags;
  int boundary_edges = 0;
  for (const auto& [e, tag] : m.boundary_tags) {
    tags.insert(tag);
    ++boundary_edges;
    const Vec2 a = m.vertices[m.edges[e][0]], b = m.vertices[m.edges[e][1]];
    if (tag == "left") CHECK((a.x == 0.0 && b.x == 0.0));
    if (tag == "right") CHECK((a.x == 2.0 && b.x == 2.0));
    if (tag == "bottom") CHECK((a.y == 0.0 && b.y == 0.0));
    if (tag == "top") CHECK((a.y == 1.0 && b.y == 1.0));
  }
  CHECK(tags == std::set<std::string>{"left", "right", "top", "bottom"});
  CHECK(boundary_edges == 12);
}

TEST_CASE("perturb determinism and boundary invariance") {
  const TriMesh base = structured_unit_square(8);
  const TriMesh a = perturb(base, 0.25, 7);
  const TriMesh b = perturb(base, 0.25, 7);
  const TriMesh c = perturb(base, 0.0, 7);
  for (int v = 0; v < base.num_vertices(); ++v) {
    CHECK(a.vertices[v].x == b.vertices[v].x);
    CHECK(a.vertices[v].y == b.vertices[v].y);
    CHECK(c.vertices[v].x == base.vertices[v].x);
    CHECK(c.vertices[v].y == base.vertices[v].y);
  }
  for (int t = 0; t < a.num_triangles(); ++t) CHECK(a.signed_area(t) > 0.0);

  std::vector<char> on_boundary(base.num_vertices(), 0);
  for (const auto& [e, tag] : base.boundary_tags) {
    (void)tag;
    on_boundary[base.edges[e][0]] = 1;
    on_boundary[base.edges[e][1]] = 1;
  }
  bool some_moved = false;
  for (int v = 0; v < base.num_vertices(); ++v) {
    if (on_boundary[v]) {
      CHECK(a.vertices[v].x == base.vertices[v].x);
      CHECK(a.vertices[v].y == base.vertices[v].y);
    } else if (norm(a.vertices[v] - base.vertices[v]) > 1e-12) {
      some_moved = true;
    }
  }
  CHECK(some_moved);
}

TEST_CASE("mesh sequence") {
  const auto seq = mesh_sequence(2, 3, 0.25, 5);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0].num_triangles() == 8);
  CHECK(seq[1].num_triangles() == 32);
  CHECK(seq[2].num_triangles() == 128);
  std::set<std::string> t0, t1;
  for (const auto& [e, tag] : seq[0].boundary_tags) t0.insert(tag);
  for (const auto& [e, tag] : seq[2].boundary_tags) t1.insert(tag);
  CHECK(t0 == t1);

  // h_max halves per level once the mesh has enough interior vertices for
  // the max-diameter statistic to settle
  const auto fine = mesh_sequence(8, 3, 0.25, 5);
  for (std::size_t l = 1; l < fine.size(); ++l) {
    const double ratio = fine[l - 1].h_max / fine[l].h_max;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("json round trip reproduces doubles exactly") {
  const TriMesh m = perturb(structured_unit_square(3), 0.25, 9);
  const TriMesh back = mesh_from_json(mesh_to_json(m));
  REQUIRE(back.num_vertices() == m.num_vertices());
  REQUIRE(back.num_triangles() == m.num_triangles());
  for (int v = 0; v < m.num_vertices(); ++v) {
    CHECK(back.vertices[v].x == m.vertices[v].x);
    CHECK(back.vertices[v].y == m.vertices[v].y);
  }
  CHECK(back.boundary_tags == m.boundary_tags);
}
