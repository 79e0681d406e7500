#ifndef REGGECURV_OPS_CHECK_HPP
#define REGGECURV_OPS_CHECK_HPP

#include <string>
#include <vector>

#include "reggecurv/study.hpp"

namespace reggecurv {

struct CheckItem {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass() const;
  std::string to_string() const;
};

namespace checks {

// Per-element Gauss-Bonnet residual over random SPD polynomial metrics of
// degree <= 2, integrated with the given quadrature degree (>= 2k+8).
double gauss_bonnet_residual(unsigned seed, int trials, int quad_degree = 16);

// Variation identities: central-difference mismatches of the three curvature
// sources at steps 1e-3 and 1e-4.
struct VariationMismatch {
  double coarse[3];
  double fine[3];
};
VariationMismatch variation_mismatch(const AnalyticMetric& g, const AnalyticTensorField& sigma);

// Pointwise covariant identities on random jets.
double divcurl_identity_residual(unsigned seed, int trials);   // star(div S_g)^flat = -curl_g
double divdiv_identity_residual(unsigned seed, int trials);    // div div S_g = -inc_g

// Euclidean FEEC orthogonality: max free-dof entry of the curl (resp. inc)
// functional of sigma - Pi_R sigma for g = delta, with sigma a polynomial of
// degree k+2, relative to the functional scale of sigma itself.
double feec_curl_orthogonality(const TriMesh& mesh, int k);
double feec_inc_orthogonality(const TriMesh& mesh, int k);

// Relative gap between the direct and composed inc assemblies.
double inc_path_gap(const JetFn& g, const JetFn& sigma, const FeSpace& V, const AssemblyQuad& q);

// Relative gap between the two covariant-curl forms.
double curl_form_gap(const JetFn& g, const JetFn& sigma, const FeSpace& W, const AssemblyQuad& q);

// Discrete identity curl_g(connection) = curvature functional: relative gap
// of the two actions on random interior Lagrange test functions.
double connection_curl_identity_gap(const DofVector& g, const TriMesh& mesh, int k_test,
                                    const AssemblyQuad& q, unsigned seed);

// Action of the assembled curvature functional on u = 1 for an all-Neumann
// configuration, minus the quadrature of K(gex) over the gex volume form.
double functional_gauss_bonnet_gap(const StudyConfig& cfg, int n, int k);

}  // namespace checks

// Full property suite behind `ops-check`.
CheckReport run_ops_check(const StudyConfig& cfg);

}  // namespace reggecurv

#endif
