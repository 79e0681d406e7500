#include "reggecurv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace reggecurv {

namespace {

double tri_diameter(const Vec2& a, const Vec2& b, const Vec2& c) {
  return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  double worst = 10.0;
  const Vec2 v[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Vec2 u = v[(i + 1) % 3] - v[i], w = v[(i + 2) % 3] - v[i];
    worst = std::min(worst, std::acos(std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0)));
  }
  return worst;
}

// Uniform double in [-1, 1) from the raw 64-bit stream; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_symmetric(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
  return 2.0 * u - 1.0;
}

}  // namespace

TriMesh::BoundarySide TriMesh::side(int t, int local_edge) const {
  BoundarySide s;
  const auto& tri = triangles[t];
  s.edge = tri_edges[t][local_edge].first;
  s.sign = tri_edges[t][local_edge].second;
  // edge opposite local vertex i is traversed i+1 -> i+2 counterclockwise
  s.from = vertices[tri[(local_edge + 1) % 3]];
  s.to = vertices[tri[(local_edge + 2) % 3]];
  const Vec2 d = s.to - s.from;
  s.length = norm(d);
  s.tangent = d / s.length;
  s.normal = rot90(s.tangent);
  return s;
}

std::vector<std::vector<int>> TriMesh::vertex_tris() const {
  std::vector<std::vector<int>> vt(vertices.size());
  for (int t = 0; t < num_triangles(); ++t)
    for (int v : triangles[t]) vt[v].push_back(t);
  return vt;
}

TriMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                   const std::map<std::pair<int, int>, std::string>& tags) {
  TriMesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);

  std::map<std::pair<int, int>, int> edge_index;
  m.tri_edges.resize(m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    if (0.5 * cross(m.vertices[tri[1]] - m.vertices[tri[0]], m.vertices[tri[2]] - m.vertices[tri[0]]) <= 0.0)
      throw std::runtime_error("build_mesh: triangle " + std::to_string(t) + " is not counterclockwise");
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3], b = tri[(i + 2) % 3];  // traversal a -> b
      const auto key = std::minmax(a, b);
      auto it = edge_index.find(key);
      int e;
      if (it == edge_index.end()) {
        e = static_cast<int>(m.edges.size());
        edge_index.emplace(key, e);
        m.edges.push_back({key.first, key.second});
        m.edge_tris.push_back({-1, -1});
      } else {
        e = it->second;
      }
      const int sign = (a == m.edges[e][0]) ? +1 : -1;
      m.tri_edges[t][i] = {e, sign};
      auto& et = m.edge_tris[e];
      int& slot = (sign > 0) ? et[0] : et[1];
      if (slot != -1) throw std::runtime_error("build_mesh: non-conforming edge");
      slot = t;
    }
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& et = m.edge_tris[e];
    if (et[0] == -1 && et[1] == -1) throw std::runtime_error("build_mesh: dangling edge");
    if (et[0] == -1 || et[1] == -1) {
      // boundary edge; the single triangle may traverse it either way
      auto it = tags.find({m.edges[e][0], m.edges[e][1]});
      if (it == tags.end())
        throw std::runtime_error("build_mesh: missing boundary tag on edge " + std::to_string(e));
      m.boundary_tags[e] = it->second;
    }
  }
  m.h_max = 0.0;
  for (const auto& tri : m.triangles)
    m.h_max = std::max(m.h_max, tri_diameter(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]));
  return m;
}

TriMesh structured_unit_square(int n, Vec2 origin, Vec2 extent) {
  if (n < 1) throw std::invalid_argument("structured_unit_square: n must be >= 1");
  std::vector<Vec2> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({origin.x + extent.x * i / n, origin.y + extent.y * j / n});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      // split along the SW-NE diagonal
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, std::string> tags;
  for (int i = 0; i < n; ++i) {
    tags[std::minmax(vid(i, 0), vid(i + 1, 0))] = "bottom";
    tags[std::minmax(vid(i, n), vid(i + 1, n))] = "top";
    tags[std::minmax(vid(0, i), vid(0, i + 1))] = "left";
    tags[std::minmax(vid(n, i), vid(n, i + 1))] = "right";
  }
  return build_mesh(std::move(verts), std::move(tris), tags);
}

TriMesh perturb(const TriMesh& mesh, double amplitude_fraction, std::uint64_t seed) {
  if (amplitude_fraction < 0.0 || amplitude_fraction > 0.25)
    throw std::invalid_argument("perturb: amplitude_fraction must be in [0, 1/4]");
  TriMesh m = mesh;
  const double a = amplitude_fraction * mesh.h_max;

  std::vector<char> on_boundary(m.vertices.size(), 0);
  for (const auto& [e, tag] : m.boundary_tags) {
    (void)tag;
    on_boundary[m.edges[e][0]] = 1;
    on_boundary[m.edges[e][1]] = 1;
  }
  const auto vtris = m.vertex_tris();

  // a move is rejected unless every incident triangle stays counterclockwise
  // with a uniform quality floor, so refinement sequences remain
  // shape-regular no matter the draw
  constexpr double kMinAngle = 0.18;  // about 10 degrees
  std::vector<double> min_area(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) min_area[t] = 0.2 * m.signed_area(t);

  std::mt19937_64 rng(seed);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (on_boundary[v]) continue;
    Vec2 offset{a * unit_symmetric(rng), a * unit_symmetric(rng)};
    const Vec2 old = m.vertices[v];
    bool placed = false;
    for (int attempt = 0; attempt <= 8; ++attempt) {
      m.vertices[v] = old + offset;
      bool ok = true;
      for (int t : vtris[v]) {
        const auto& tri = m.triangles[t];
        if (m.signed_area(t) <= min_area[t] ||
            tri_min_angle(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]) < kMinAngle) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed = true;
        break;
      }
      offset = offset * 0.5;
    }
    if (!placed) m.vertices[v] = old;
  }

  m.h_max = 0.0;
  for (const auto& tri : m.triangles)
    m.h_max = std::max(m.h_max, tri_diameter(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]));
  return m;
}

std::vector<TriMesh> mesh_sequence(int n0, int levels, double amplitude, std::uint64_t seed,
                                   Vec2 origin, Vec2 extent) {
  std::vector<TriMesh> out;
  int n = n0;
  for (int l = 0; l < levels; ++l, n *= 2)
    out.push_back(perturb(structured_unit_square(n, origin, extent), amplitude, seed + l));
  return out;
}

std::string mesh_to_json(const TriMesh& mesh) {
  nlohmann::json j;
  auto& v = j["vertices"] = nlohmann::json::array();
  for (const auto& p : mesh.vertices) v.push_back({p.x, p.y});
  auto& t = j["triangles"] = nlohmann::json::array();
  for (const auto& tri : mesh.triangles) t.push_back({tri[0], tri[1], tri[2]});
  auto& tags = j["tags"] = nlohmann::json::array();
  for (const auto& [e, tag] : mesh.boundary_tags)
    tags.push_back({{"edge", {mesh.edges[e][0], mesh.edges[e][1]}}, {"tag", tag}});
  return j.dump(2);
}

TriMesh mesh_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Vec2> verts;
  for (const auto& p : j.at("vertices")) verts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  std::vector<std::array<int, 3>> tris;
  for (const auto& t : j.at("triangles"))
    tris.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
  std::map<std::pair<int, int>, std::string> tags;
  for (const auto& entry : j.at("tags")) {
    const auto& e = entry.at("edge");
    tags[std::minmax(e.at(0).get<int>(), e.at(1).get<int>())] = entry.at("tag").get<std::string>();
  }
  return build_mesh(std::move(verts), std::move(tris), tags);
}

}  // namespace reggecurv
