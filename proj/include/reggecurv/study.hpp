#ifndef REGGECURV_STUDY_HPP
#define REGGECURV_STUDY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reggecurv/lift.hpp"
#include "reggecurv/norms.hpp"

namespace reggecurv {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One JSON file drives every study; see configs/ for the bundled setups.
struct StudyConfig {
  AnalyticMetric gex;
  Vec2 origin{0.0, 0.0}, extent{1.0, 1.0};
  int n0 = 2;
  int levels = 5;
  double perturb_amplitude = 0.25;
  std::uint64_t seed = 1;
  std::vector<int> degrees{0, 1, 2};

  std::set<std::string> dirichlet_tags, neumann_tags;
  // Expression data per tag; std::nullopt means "auto": derive the data
  // symbolically from the metric.
  std::map<std::string, std::optional<Expr>> dirichlet_data, neumann_data;
  std::vector<std::pair<Vec2, double>> corner_angles;

  std::string connection_space = "bdm";                 // bdm | rt
  std::optional<std::set<std::string>> connection_essential;  // unset: all tags

  AnalyticTensorField sigma;  // smooth test tensor for curl/inc studies
  int quad_volume = -1, quad_edge = -1;  // -1: per-degree default
  bool write_vtk = false;
};

StudyConfig load_config(const std::string& json_text);
StudyConfig load_config_file(const std::string& path);

// Symbolic data derived from metric entries: the Gauss curvature and, for a
// straight boundary of fixed unit tangent, the geodesic curvature.
Expr symbolic_gauss_curvature(const Expr& g11, const Expr& g12, const Expr& g22);
Expr symbolic_geodesic_curvature(const Expr& g11, const Expr& g12, const Expr& g22, const Vec2& tau);

// Counterclockwise unit tangent of a rectangle side with the given tag.
Vec2 rectangle_tag_tangent(const std::string& tag);

struct StudyResult {
  // file name (without directory) -> CSV text
  std::map<std::string, std::string> csv;
  // file name -> VTK text, when requested
  std::map<std::string, std::string> vtk;
};

StudyResult run_curvature_study(const StudyConfig& cfg);
StudyResult run_connection_study(const StudyConfig& cfg);
StudyResult run_curl_study(const StudyConfig& cfg);
StudyResult run_inc_study(const StudyConfig& cfg);
StudyResult run_interpolation_study(const StudyConfig& cfg);

// Per-degree record sequences behind the studies (EOC already filled).
// connection_records takes the space kind since the acceptance run compares
// Bdm and Rt at equal degree.
std::vector<ConvergenceRecord> curvature_records(const StudyConfig& cfg, int k,
                                                 const std::vector<TriMesh>& meshes);
std::vector<ConvergenceRecord> connection_records(const StudyConfig& cfg, int k,
                                                  const std::vector<TriMesh>& meshes,
                                                  const std::string& space_kind);
std::vector<ConvergenceRecord> curl_records(const StudyConfig& cfg, int k,
                                            const std::vector<TriMesh>& meshes);
std::vector<ConvergenceRecord> inc_records(const StudyConfig& cfg, int k,
                                           const std::vector<TriMesh>& meshes);
std::vector<ConvergenceRecord> interpolation_records(const StudyConfig& cfg, int k,
                                                     const std::vector<TriMesh>& meshes);
std::vector<TriMesh> study_meshes(const StudyConfig& cfg);

// Boundary data object for one mesh of the sequence.
BoundaryData make_boundary_data(const StudyConfig& cfg, const TriMesh& mesh);

AssemblyQuad study_quad(const StudyConfig& cfg, int k_regge, int k_test);

// Legacy-ASCII VTK of a field, point-sampled on a uniform refinement of each
// triangle (fields may be discontinuous across edges).
std::string vtk_scalar(const TriMesh& mesh, const FeSpace& space, const std::vector<double>& coeffs,
                       const std::string& name, int refine);
std::string vtk_vector(const TriMesh& mesh, const FeSpace& space, const std::vector<double>& coeffs,
                       const std::string& name, int refine);

}  // namespace reggecurv

#endif
