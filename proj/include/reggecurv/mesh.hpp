#ifndef REGGECURV_MESH_HPP
#define REGGECURV_MESH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reggecurv/tensor.hpp"

namespace reggecurv {

// Oriented conforming triangulation of a rectangle with straight edges.
//
// Conventions everything downstream relies on:
//  * triangle vertices are counterclockwise (positive signed area),
//  * every edge is stored as (v_lo, v_hi) with v_lo < v_hi and carries the
//    global orientation v_lo -> v_hi,
//  * tri_edges[t][i] is the edge opposite local vertex i together with the
//    sign of the counterclockwise traversal of that edge relative to the
//    global orientation,
//  * edge_tris[e] = (t_plus, t_minus): t_plus traverses e in its global
//    direction, t_minus against it; on the boundary exactly one is -1.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<std::pair<int, int>, 3>> tri_edges;  // (edge index, sign)
  std::vector<std::array<int, 2>> edge_tris;                  // (t_plus, t_minus)
  std::map<int, std::string> boundary_tags;                   // boundary edge -> tag
  double h_max = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  bool is_boundary_edge(int e) const { return edge_tris[e][0] < 0 || edge_tris[e][1] < 0; }

  double signed_area(int t) const {
    const auto& tri = triangles[t];
    return 0.5 * cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
  }
  Vec2 centroid(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
  }
  double edge_length(int e) const { return norm(vertices[edges[e][1]] - vertices[edges[e][0]]); }
  // Unit tangent in the global direction v_lo -> v_hi.
  Vec2 edge_tangent(int e) const {
    const Vec2 d = vertices[edges[e][1]] - vertices[edges[e][0]];
    return d / norm(d);
  }

  // Local edge geometry seen from triangle t: unit tangent along the
  // counterclockwise boundary traversal and the inward Euclidean normal.
  struct BoundarySide {
    int edge = -1;
    int sign = 0;       // traversal direction vs global orientation
    Vec2 from, to;      // traversal endpoints
    Vec2 tangent, normal;
    double length = 0.0;
  };
  BoundarySide side(int t, int local_edge) const;

  // Vertex -> incident triangles, built on demand.
  std::vector<std::vector<int>> vertex_tris() const;
};

TriMesh structured_unit_square(int n, Vec2 origin = {0.0, 0.0}, Vec2 extent = {1.0, 1.0});

// Moves interior vertices by independent uniform offsets in
// [-amplitude*h_max, amplitude*h_max] per coordinate (seeded, deterministic).
// A move that would invert an incident triangle is halved up to 8 times and
// then dropped. Boundary vertices stay fixed.
TriMesh perturb(const TriMesh& mesh, double amplitude_fraction, std::uint64_t seed);

// Meshes with n = n0 * 2^level, each independently perturbed with seed+level.
std::vector<TriMesh> mesh_sequence(int n0, int levels, double amplitude, std::uint64_t seed,
                                   Vec2 origin = {0.0, 0.0}, Vec2 extent = {1.0, 1.0});

std::string mesh_to_json(const TriMesh& mesh);
TriMesh mesh_from_json(const std::string& text);

// Rebuilds edges/adjacency/h_max from vertices, triangles and tags keyed by
// (lo, hi) vertex pairs. Throws on non-conforming or inverted input.
TriMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                   const std::map<std::pair<int, int>, std::string>& tags);

}  // namespace reggecurv

#endif
