// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "reggecurv/ops_check.hpp"
#include "reggecurv/study.hpp"

using namespace reggecurv;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  [" << detail << "]\n";
  std::cout.flush();
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Observed order over the last three levels (two refinement steps).
double tail_slope(const std::vector<ConvergenceRecord>& recs, const std::string& norm) {
  const std::size_t n = recs.size();
  const double e0 = recs[n - 3].errors.at(norm), e1 = recs[n - 1].errors.at(norm);
  return std::log(e0 / e1) / std::log(recs[n - 3].h_max / recs[n - 1].h_max);
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

int main(int argc, char** argv) {
  std::string config_dir = "configs";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--configs") == 0) config_dir = argv[i + 1];

  const StudyConfig fig6 = load_config_file(config_dir + "/paper_fig6.json");
  const StudyConfig conn = load_config_file(config_dir + "/paper_connection.json");
  const StudyConfig smoke = load_config_file(config_dir + "/smoke.json");

  // 1. curvature rates, 5 levels n = 2..32, EOC over the last 3 levels
  {
    const auto meshes = study_meshes(fig6);
    for (int k = 0; k <= 2; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto recs = curvature_records(fig6, k, meshes);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double l2 = tail_slope(recs, "l2");
      const double hm = tail_slope(recs, "hminus1");
      bool pass = seconds <= 180.0;
      std::string detail = "L2 eoc=" + fmt(l2) + " H-1 eoc=" + fmt(hm) + " time=" + fmt(seconds) + "s";
      if (k == 0) pass = pass && l2 < 0.3 && in_range(hm, 0.75, 1.3);
      if (k == 1) pass = pass && in_range(l2, 0.75, 1.3) && in_range(hm, 1.7, 2.3);
      if (k == 2) pass = pass && in_range(l2, 1.7, 2.3) && in_range(hm, 2.6, 3.4);
      report("criterion 1: curvature rates k=" + std::to_string(k), pass, detail);
    }
  }

  // 2. connection rates on 5 levels; Bdm(0) stagnates over 6 levels once the
  // error reaches the distance between the connection and the div-free fields
  {
    StudyConfig rates = conn;
    rates.levels = 5;
    const auto meshes5 = study_meshes(rates);

    const auto bdm1 = connection_records(rates, 1, meshes5, "bdm");
    report("criterion 2: connection Bdm(1) L2 rate", in_range(tail_slope(bdm1, "l2"), 1.7, 2.3),
           "eoc=" + fmt(tail_slope(bdm1, "l2")));
    const auto bdm2 = connection_records(rates, 2, meshes5, "bdm");
    report("criterion 2: connection Bdm(2) L2 rate", in_range(tail_slope(bdm2, "l2"), 2.6, 3.4),
           "eoc=" + fmt(tail_slope(bdm2, "l2")));
    const auto rt1 = connection_records(rates, 1, meshes5, "rt");
    report("criterion 2: connection Rt(1) L2 rate", in_range(tail_slope(rt1, "l2"), 0.7, 1.3),
           "eoc=" + fmt(tail_slope(rt1, "l2")));
    const auto rt2 = connection_records(rates, 2, meshes5, "rt");
    report("criterion 2: connection Rt(2) L2 rate", in_range(tail_slope(rt2, "l2"), 1.7, 2.3),
           "eoc=" + fmt(tail_slope(rt2, "l2")));

    StudyConfig stag = conn;
    stag.n0 = 8;
    stag.levels = 6;
    const auto bdm0 = connection_records(stag, 0, study_meshes(stag), "bdm");
    const double ratio = bdm0[5].errors.at("l2") / bdm0[4].errors.at("l2");
    report("criterion 2: connection Bdm(0) stagnation", ratio >= 0.7,
           "finest error ratio=" + fmt(ratio));
  }

  // 3. covariant curl superconvergence and inc path agreement
  {
    StudyConfig cfg = fig6;
    cfg.levels = 4;
    const auto meshes = study_meshes(cfg);
    for (int k = 1; k <= 2; ++k) {
      const auto recs = curl_records(cfg, k, meshes);
      const double rate = tail_slope(recs, "lifted_l2");
      report("criterion 3: curl superconvergence k=" + std::to_string(k), rate >= k + 0.7,
             "eoc=" + fmt(rate));
    }
    cfg.levels = 3;
    const auto meshes3 = study_meshes(cfg);
    const auto incs = inc_records(cfg, 1, meshes3);
    double worst = 0.0;
    for (const auto& r : incs) worst = std::max(worst, r.errors.at("path_gap"));
    report("criterion 3: inc direct vs composed", worst <= 1e-8, "max rel gap=" + fmt(worst));
  }

  // 4. Euclidean FEEC identities on a perturbed mesh
  {
    const TriMesh mesh = perturb(structured_unit_square(4, fig6.origin, fig6.extent),
                                 fig6.perturb_amplitude, fig6.seed);
    for (int k = 0; k <= 2; ++k) {
      const double c = checks::feec_curl_orthogonality(mesh, k);
      const double i = checks::feec_inc_orthogonality(mesh, k);
      report("criterion 4: FEEC identities k=" + std::to_string(k), c <= 1e-10 && i <= 1e-10,
             "curl=" + fmt(c) + " inc=" + fmt(i));
    }
  }

  // 5. per-element Gauss-Bonnet
  {
    const double r = checks::gauss_bonnet_residual(91u, 8, 16);
    report("criterion 5: per-element gauss-bonnet", r <= 1e-8, "residual=" + fmt(r));
  }

  // 6. variation identities
  {
    const auto vm = checks::variation_mismatch(fig6.gex, fig6.sigma);
    bool pass = true;
    double worst = 0.0, worst_ratio = 0.0;
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, vm.fine[i]);
      const double ratio = vm.coarse[i] / vm.fine[i];
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 100.0));
      pass = pass && vm.fine[i] <= 1e-6 && ratio >= 60.0 && ratio <= 170.0;
    }
    report("criterion 6: variation finite differences", pass,
           "max mismatch=" + fmt(worst) + " ratio dev=" + fmt(worst_ratio));
  }

  // 7. covariant div/curl identities on random jets
  {
    const double a = checks::divcurl_identity_residual(61u, 100);
    const double b = checks::divdiv_identity_residual(62u, 100);
    report("criterion 7: covariant identities on random jets", a <= 1e-8 && b <= 1e-8,
           "divcurl=" + fmt(a) + " divdiv=" + fmt(b));
  }

  // 8. integral representation of the curvature lift
  {
    const TriMesh mesh = perturb(structured_unit_square(4, fig6.origin, fig6.extent),
                                 fig6.perturb_amplitude, fig6.seed);
    const AssemblyQuad q = study_quad(fig6, 1, 2);
    const FeSpace R = build_space(mesh, SpaceKind::Regge, 1);
    const DofVector g = regge_interpolate(fig6.gex, R, q.volume);
    std::set<std::string> tags;
    for (const auto& [e, tag] : mesh.boundary_tags) tags.insert(tag);
    const FeSpace V = build_space(mesh, SpaceKind::Lagrange, 2, tags);
    const double r10 = verify_integral_representation(g, V, 10, q);
    const double r20 = verify_integral_representation(g, V, 20, q);
    const double r40 = verify_integral_representation(g, V, 40, q);
    const bool pass = r20 <= 1e-6 && r20 <= 1.1 * r10 + 1e-15 && r40 <= 1.1 * r20 + 1e-15;
    report("criterion 8: integral representation", pass,
           "r10=" + fmt(r10) + " r20=" + fmt(r20) + " r40=" + fmt(r40));
  }

  // 9. point values of the exact metric
  {
    const double k00 = gauss_curvature_at(fig6.gex, {0.0, 0.0});
    const double k11 = gauss_curvature_at(fig6.gex, {1.0, 1.0});
    double kappa_left = 0.0;
    for (double y : {0.1, 0.35, 0.6, 0.85})
      kappa_left = std::max(kappa_left,
                            std::abs(geodesic_curvature_at(fig6.gex, {0.0, y}, {0.0, -1.0})));
    const bool pass = std::abs(k00 - 1.0) <= 1e-12 && std::abs(k11) <= 1e-12 && kappa_left <= 1e-12;
    report("criterion 9: exact point values", pass,
           "K(0,0)-1=" + fmt(k00 - 1.0) + " K(1,1)=" + fmt(k11) + " kappa_left=" + fmt(kappa_left));
  }

  // 10. determinism: byte-identical CSVs on repeated runs
  {
    const StudyResult a = run_curvature_study(smoke);
    const StudyResult b = run_curvature_study(smoke);
    const StudyResult c = run_connection_study(smoke);
    const StudyResult d = run_connection_study(smoke);
    bool pass = a.csv.size() == b.csv.size() && c.csv.size() == d.csv.size();
    for (const auto& [name, text] : a.csv) pass = pass && b.csv.count(name) && text == b.csv.at(name);
    for (const auto& [name, text] : c.csv) pass = pass && d.csv.count(name) && text == d.csv.at(name);
    report("criterion 10: determinism", pass, "curvature+connection reruns");
  }

  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) + " criteria failed\n");
  return failures == 0 ? 0 : 1;
}
