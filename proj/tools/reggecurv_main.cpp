#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "reggecurv/ops_check.hpp"
#include "reggecurv/study.hpp"

namespace fs = std::filesystem;
using namespace reggecurv;

namespace {

// exit codes: 0 ok, 2 config error, 3 numerical failure, 4 property-suite failure
constexpr int kOk = 0, kConfigError = 2, kNumericalError = 3, kPropertyFailure = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int quad_degree = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON study configuration")->required();
  cmd->add_option("--out", opt.out_dir, "output directory for CSV/VTK files");
  cmd->add_option("--seed", opt.seed, "override the mesh perturbation seed")
      ->each([&opt](const std::string&) { opt.seed_set = true; });
  cmd->add_option("--quad-degree", opt.quad_degree, "override the volume/edge quadrature degree");
}

StudyConfig load(const CommonOptions& opt) {
  StudyConfig cfg = load_config_file(opt.config_path);
  if (opt.seed_set) cfg.seed = opt.seed;
  if (opt.quad_degree >= 0) {
    cfg.quad_volume = opt.quad_degree;
    cfg.quad_edge = opt.quad_degree;
  }
  return cfg;
}

void write_outputs(const CommonOptions& opt, const StudyResult& result) {
  fs::create_directories(opt.out_dir);
  for (const auto& [name, text] : result.csv) {
    std::ofstream out(fs::path(opt.out_dir) / name, std::ios::binary);
    out << text;
    std::cout << "wrote " << (fs::path(opt.out_dir) / name).string() << "\n";
  }
  for (const auto& [name, text] : result.vtk) {
    std::ofstream out(fs::path(opt.out_dir) / name, std::ios::binary);
    out << text;
    std::cout << "wrote " << (fs::path(opt.out_dir) / name).string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional curvature, connection and covariant operators of Regge metrics"};
  app.require_subcommand(1);

  CommonOptions opt;
  StudyResult (*runner)(const StudyConfig&) = nullptr;
  bool ops_check = false;

  auto* interpolate = app.add_subcommand("interpolate", "Regge interpolation error study");
  auto* curvature = app.add_subcommand("curvature", "Gauss curvature lifting study");
  auto* connection = app.add_subcommand("connection", "connection 1-form lifting study");
  auto* curl = app.add_subcommand("curl", "covariant curl superconvergence study");
  auto* inc = app.add_subcommand("inc", "covariant incompatibility study");
  auto* ops = app.add_subcommand("ops-check", "run the operator property suites");
  for (auto* cmd : {interpolate, curvature, connection, curl, inc, ops}) add_common(cmd, opt);

  interpolate->callback([&] { runner = run_interpolation_study; });
  curvature->callback([&] { runner = run_curvature_study; });
  connection->callback([&] { runner = run_connection_study; });
  curl->callback([&] { runner = run_curl_study; });
  inc->callback([&] { runner = run_inc_study; });
  ops->callback([&] { ops_check = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    const StudyConfig cfg = load(opt);
    if (ops_check) {
      const CheckReport report = run_ops_check(cfg);
      std::cout << report.to_string();
      return report.all_pass() ? kOk : kPropertyFailure;
    }
    write_outputs(opt, runner(cfg));
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}
