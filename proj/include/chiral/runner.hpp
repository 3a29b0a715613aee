#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>

#include "config.hpp"
#include "plot.hpp"

namespace chiral {

template <class V>
SuiteResult run_suite_guarded(const std::string& name, const SuiteConfig& c) {
  try {
    return run_suite<V>(name, c);
  } catch (const std::exception& e) {
    SuiteResult r{name, scalar_traits<V>::name, 0, {}};
    r.report.add("suite_error", 0, 1.0, false, e.what());
    return r;
  }
}

inline void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error(file.string() + ": cannot write");
  out << text;
}

// Runs the selected suites in order and writes <suite>.json to dir. Returns true iff all pass.
template <class V>
bool run_scenario(const ScenarioConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  std::filesystem::create_directories(dir);
  bool ok = true;
  for (const auto& name : c.suites) {
    auto r = run_suite_guarded<V>(name, c.suite);
    write_text(dir / (name + ".json"), suite_report_json(r, c.suite.geometry).dump(2) + "\n");
    bool pass = r.report.pass() && !r.report.records.empty();
    log << (pass ? "PASS " : "FAIL ") << name << " samples=" << r.n_samples << " max_residual=" << r.report.max_residual()
        << " failures=" << r.report.failures() << "\n";
    ok = ok && pass;
  }
  return ok;
}

inline bool run_scenario(const ScenarioConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  return c.backend == "float" ? run_scenario<double>(c, dir, log) : run_scenario<QPi>(c, dir, log);
}

inline std::vector<std::filesystem::path> write_plots(const ScenarioConfig& c, const std::filesystem::path& dir) {
  auto tables = c.backend == "float" ? plot_tables<double>(c) : plot_tables<QPi>(c);
  std::vector<std::filesystem::path> out;
  if (tables.empty()) return out;
  std::filesystem::create_directories(dir);
  for (const auto& [file, text] : tables) {
    write_text(dir / file, text);
    out.push_back(dir / file);
  }
  return out;
}

}  // namespace chiral
