#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "chiral/runner.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kSuiteFailure = 1;
constexpr int kConfigError = 2;

// --out, then the config's output field, then $CHIRAL_OUT_DIR, then ./reports.
std::filesystem::path output_dir(const std::string& flag, const chiral::ScenarioConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.output.empty()) return c.output;
  if (const char* env = std::getenv("CHIRAL_OUT_DIR"); env && *env) return env;
  return "reports";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiral free boson verification harness"};
  app.require_subcommand(1);

  std::string config, out, backend;
  std::vector<std::string> suites;

  auto* run = app.add_subcommand("run", "Run verification suites and write one JSON report per suite");
  run->add_option("config", config, "Scenario config (JSON)")->required();
  run->add_option("--out", out, "Report directory");
  run->add_option("--suite", suites, "Suite to run (repeatable); defaults to the config's list");
  run->add_option("--backend", backend, "Arithmetic backend")->check(CLI::IsMember({"exact", "float"}));

  auto* plot = app.add_subcommand("plot-data", "Write CSV profiles for external plotting");
  plot->add_option("config", config, "Scenario config (JSON)")->required();
  plot->add_option("--out", out, "Output directory");

  auto* validate = app.add_subcommand("validate", "Check a config without running anything");
  validate->add_option("config", config, "Scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }

  chiral::ScenarioConfig cfg;
  try {
    cfg = chiral::load_config(config);
    if (!backend.empty()) cfg.backend = backend;
    if (!suites.empty()) {
      for (const auto& s : suites)
        if (!chiral::is_suite(s)) throw chiral::ConfigError("--suite: unknown suite '" + s + "'");
      cfg.suites = suites;
      if (cfg.suite.geometry.kind != chiral::Kind::Cylinder && std::find(suites.begin(), suites.end(), "holonomy") != suites.end())
        throw chiral::ConfigError("--suite: holonomy needs geometry \"cylinder\"");
    }
  } catch (const chiral::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*validate) {
      std::cout << config << ": ok (" << cfg.suite.geometry.name() << cfg.suite.geometry.chirality_str() << ", " << cfg.backend << ", " << cfg.suites.size()
                << " suites)\n";
      return kPass;
    }
    auto dir = output_dir(out, cfg);
    if (*plot) {
      for (const auto& f : chiral::write_plots(cfg, dir)) std::cout << f.string() << "\n";
      return kPass;
    }
    bool ok = chiral::run_scenario(cfg, dir, std::cout);
    return ok ? kPass : kSuiteFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSuiteFailure;
  }
}
