#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chiral/runner.hpp"
#include "chiral/sampling.hpp"

using namespace chiral;
namespace fs = std::filesystem;

namespace {

const std::string kCli = CHIRAL_CLI_PATH;
const std::string kConfigs = CHIRAL_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("chiral_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int sh(const std::string& cmd) {
  int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const Json& j) {
  auto p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

Json small_config() {
  return Json{{"geometry", "cylinder"},
              {"chirality", "+"},
              {"seed", 5},
              {"samples", {{"default", 3}}},
              {"suites", {"greens_identities", "difference_identity", "ccr_relations", "holonomy"}}};
}

std::string run_cmd(const fs::path& cfg, const fs::path& out, const std::string& extra = "") {
  return kCli + " run " + cfg.string() + " --out " + out.string() + " " + extra;
}

}  // namespace

TEST(Cli, ShippedConfigsValidate) {
  for (const auto& name : {"cylinder_exact.json", "half_space_minus.json", "cylinder_float.json"})
    EXPECT_EQ(sh(kCli + " validate " + kConfigs + "/" + name), 0) << name;
}

TEST(Cli, ConfigErrorsExitTwoWithFieldPath) {
  auto dir = scratch("bad");
  auto check = [&](Json j, const std::string& path) {
    auto cfg = write_config(dir, j);
    auto err = dir / "err.txt";
    int rc = std::system((kCli + " validate " + cfg.string() + " 2> " + err.string()).c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 2) << j.dump();
    EXPECT_NE(slurp(err).find(path), std::string::npos) << slurp(err);
  };
  auto j = small_config();
  j["suites"] = {"greens_identities", "warp_drive"};
  check(j, "config.suites[1]");
  j = small_config();
  j["inner_radius"] = "one quarter";
  check(j, "config.inner_radius");
  j = small_config();
  j["bumps"] = Json::array({Json::array({"1", "1/2"})});
  check(j, "config.bumps[0]");
  j = small_config();
  j["samples"]["greens_identities"] = 0;
  check(j, "config.samples.greens_identities");
  j = small_config();
  j["regions"] = {{"causality", {{{"boxes", {{{"tau", {"0", "1"}}, {"chi", {"0", "1/2"}}}}}}, {{"boxes", {{{"tau", {"0", "1"}}, {"chi", {"1/4", "3/4"}}}}}}}}};
  check(j, "config.regions.causality: regions are not disjoint");
  j = small_config();
  j["geometry"] = "half_space";
  check(j, "config.suites");
  j = small_config();
  j["colour"] = "blue";
  check(j, "config.colour");
  EXPECT_EQ(sh(kCli + " validate " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(sh(run_cmd(write_config(dir, small_config()), dir / "out", "--suite warp_drive")), 2);
}

TEST(Cli, RunWritesOneReportPerSuite) {
  auto dir = scratch("run");
  auto cfg = write_config(dir, small_config());
  ASSERT_EQ(sh(run_cmd(cfg, dir / "out")), 0);
  for (const auto& s : {"greens_identities", "difference_identity", "ccr_relations", "holonomy"}) {
    auto j = Json::parse(slurp(dir / "out" / (std::string(s) + ".json")));
    EXPECT_EQ(j["suite"], s);
    EXPECT_EQ(j["backend"], "exact");
    EXPECT_EQ(j["chirality"], "+");
    EXPECT_EQ(j["geometry"]["kind"], "cylinder");
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["max_residual"].get<double>(), 0.0);
    EXPECT_GT(j["n_samples"].get<int>(), 0);
    EXPECT_FALSE(j["records"].empty());
  }
  ASSERT_EQ(sh(run_cmd(cfg, dir / "only", "--suite difference_identity")), 0);
  EXPECT_TRUE(fs::exists(dir / "only" / "difference_identity.json"));
  EXPECT_FALSE(fs::exists(dir / "only" / "greens_identities.json"));
}

TEST(Cli, ExactReportsAreByteIdentical) {
  auto dir = scratch("det");
  auto cfg = write_config(dir, small_config());
  ASSERT_EQ(sh(run_cmd(cfg, dir / "a")), 0);
  ASSERT_EQ(sh(run_cmd(cfg, dir / "b")), 0);
  for (const auto& e : fs::directory_iterator(dir / "a")) EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / e.path().filename())) << e.path();
}

TEST(Cli, HolonomyPairingsAreMinusAlpha) {
  auto dir = scratch("hol");
  auto j = small_config();
  j["suites"] = {"holonomy"};
  j["holonomy"] = {{"alphas", {"1", "0", "-2"}}};
  ASSERT_EQ(sh(run_cmd(write_config(dir, j), dir / "out")), 0);
  auto rep = Json::parse(slurp(dir / "out" / "holonomy.json"));
  std::vector<std::string> values;
  for (const auto& r : rep["records"])
    if (r.contains("value")) values.push_back(r["value"]);
  EXPECT_EQ(values, (std::vector<std::string>{"-1", "0", "2"}));
}

TEST(Cli, FailuresExitOneAndCarryReplay) {
  auto dir = scratch("fail");
  auto j = small_config();
  j["backend"] = "float";
  j["float_tolerance"] = 1e-30;
  j["suites"] = {"greens_identities"};
  ASSERT_EQ(sh(run_cmd(write_config(dir, j), dir / "out")), 1);
  auto rep = Json::parse(slurp(dir / "out" / "greens_identities.json"));
  EXPECT_FALSE(rep["pass"].get<bool>());
  const Json* failing = nullptr;
  for (const auto& r : rep["records"])
    if (!failing && !r["pass"].get<bool>() && r.contains("replay")) failing = &r;
  ASSERT_NE(failing, nullptr);
  EXPECT_EQ((*failing)["identity"], "dG=j/G_up/bulk");
  auto f = form_from_json<double>((*failing)["replay"]);
  EXPECT_EQ(f.space(), Space::Bulk);
  EXPECT_EQ(f.geometry().kind, Kind::Cylinder);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  auto dir = scratch("env");
  auto j = small_config();
  j["suites"] = {"difference_identity"};
  auto cfg = write_config(dir, j);
  ASSERT_EQ(sh("CHIRAL_OUT_DIR=" + (dir / "envout").string() + " " + kCli + " run " + cfg.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "envout" / "difference_identity.json"));
}

TEST(Cli, PlotData) {
  auto dir = scratch("plot");
  auto j = small_config();
  ASSERT_EQ(sh(kCli + " plot-data " + write_config(dir, j).string() + " --out " + (dir / "p").string()), 0);
  for (const auto& f : {"greens_profile.csv", "beta.csv", "holonomy.csv"}) EXPECT_TRUE(fs::exists(dir / "p" / f)) << f;
  // G_up of the bump is its cumulative integral
  std::istringstream in(slurp(dir / "p" / "greens_profile.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    double t, w, g, cum;
    char c;
    std::istringstream(line) >> t >> c >> w >> c >> g >> c >> cum;
    EXPECT_NEAR(g, cum, 1e-9 * std::max(1.0, std::abs(cum)));
    ++rows;
  }
  EXPECT_GT(rows, 10);
  j["plots"] = Json::array();
  ASSERT_EQ(sh(kCli + " plot-data " + write_config(dir, j).string() + " --out " + (dir / "none").string()), 0);
  EXPECT_FALSE(fs::exists(dir / "none"));
}

TEST(Cli, BetaIsConstantOnTheHalfSpace) {
  auto c = parse_config(Json{{"geometry", "half_space"}, {"chirality", "+"}, {"plots", {"beta"}}});
  auto tables = plot_tables<QPi>(c);
  ASSERT_EQ(tables.size(), 1u);
  std::istringstream in(tables.at("beta.csv"));
  std::string header, line, first;
  std::getline(in, header);
  std::getline(in, first);
  auto tail = [](const std::string& s) { return s.substr(s.find(',', s.find(',') + 1)); };
  while (std::getline(in, line)) EXPECT_EQ(tail(line), tail(first));
  // du has physical components (1, -1); the opposite chirality gives (1, 1)
  EXPECT_EQ(tail(first), ",1,-1,1,1");
}

TEST(Serialization, FormsRoundTrip) {
  for (const auto& g : {Geometry::half_space(1), Geometry::cylinder(-1, Rational(1, 8))}) {
    FormSampler<QPi> smp(g, 211);
    for (int k = 0; k <= 3; ++k) {
      auto f = smp.form(Space::Bulk, k, 1);
      auto back = form_from_json<QPi>(Json::parse(form_json(f).dump()));
      EXPECT_EQ(back, f);
      EXPECT_EQ(back.shift(), f.shift());
      EXPECT_TRUE(back.geometry() == g);
    }
    auto b = smp.form(Space::Boundary, 1, 0);
    EXPECT_EQ(form_from_json<QPi>(form_json(b)), b);
  }
  QPi x = QPi::pi() * QPi(Rational(3, 7)) + QPi(Rational(1, 2)) / (QPi::pi() + QPi(1));
  EXPECT_EQ(scalar_from_json<QPi>(scalar_json(x), "x"), x);
  EXPECT_EQ(rational_from_json(Json("-7/21"), "q"), Rational(-1, 3));
  EXPECT_THROW(rational_from_json(Json("1/0x"), "q"), std::invalid_argument);
}

TEST(Serialization, RegionsRoundTrip) {
  auto g = Geometry::cylinder(1);
  Box b{Interval::open(Rational(0), Rational(1)), Interval{Rational(1, 4), Rational(1, 2), true, false}, Interval::open(Rational(1, 2), Rational(1))};
  Box c = b;
  c[TAU] = Interval{std::nullopt, Rational(-1), false, false};
  Region r(Space::Bulk, true, {b, c});
  auto back = region_from_json(region_json(r, g), g, "r");
  EXPECT_TRUE(region_equal(back, r));
  EXPECT_THROW(region_from_json(Json{{"boxes", {{{"x", {"0", "1"}}}}}}, g, "r"), std::invalid_argument);
}
