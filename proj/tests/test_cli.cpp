#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "support.hpp"

using namespace minigraph;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "minigraph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("minigraph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text) {
    const fs::path p = dir_ / "run.ini";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, LevelCurvesWritesOneCsvPerLevel) {
  const fs::path out = dir_ / "lc";
  const CliResult r = run_cli({"levelcurves", "--gamma", "1.5", "--levels", "0,1,2", "--out", out.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* name : {"level_C0.csv", "level_C1.csv", "level_C2.csv"}) EXPECT_TRUE(fs::exists(out / name));
  EXPECT_EQ(std::distance(fs::directory_iterator(out), fs::directory_iterator{}), 3);

  std::ifstream c2(out / "level_C2.csv");
  const auto two = read_level_curve_csv(c2);
  ASSERT_EQ(two.size(), 401u);
  EXPECT_EQ(two[200].tau, 0.0);
  EXPECT_NEAR(two[200].kappa, 0.096423651979983753, 1e-15);

  // every boundary row lies on u = 0: its preimage has sigma = 0
  std::ifstream c0(out / "level_C0.csv");
  const auto pair = lw_family(1.5);
  for (const auto& s : read_level_curve_csv(c0)) {
    const HalfPlanePoint z = invert_f(pair, {s.x, s.y}, {0.1, s.tau});
    EXPECT_NEAR(pair.k0() * z.sigma, 0.0, 1e-10);
  }
}

TEST_F(CliTest, LevelCurvesJsonAndSvg) {
  const fs::path out = dir_ / "planar";
  const fs::path cfg = write_config("[pair]\nkind = planar\na = 2\nk0 = 2\n[tau]\nmin = -2\nmax = 2\nn = 5\n");
  const CliResult r = run_cli({"levelcurves", "--config", cfg.string(), "--levels", "0,1,2", "--format", "json,svg",
                         "--out", out.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_FALSE(fs::exists(out / "level_C1.csv"));
  const Json j = Json::parse(slurp(out / "level_C1.json"));
  ASSERT_EQ(j.size(), 5u);
  for (const auto& rec : j) {
    EXPECT_DOUBLE_EQ(rec["x"].get<double>(), 0.75);
    EXPECT_EQ(rec["kappa"].get<double>(), 0.0);
  }
  const std::string svg = slurp(out / "levelcurves.svg");
  EXPECT_NE(svg.find("data-level=\"2\""), std::string::npos);
  EXPECT_NE(svg.find("rgb(40,40,40)"), std::string::npos);
}

TEST_F(CliTest, LevelCurvesRemovesPartialOutputOnFailure) {
  const fs::path out = dir_ / "fail";
  const fs::path cfg = write_config(
      "[pair]\nkind = custom\nh = power(1, -0.5, 1.5)\nk0 = 1\nanchor = 1, 0\nanchor_g = 0, 0\n"
      "[levels]\nvalues = 2, 0\n[tau]\nmin = -1\nmax = 1\nn = 5\n");
  const CliResult r = run_cli({"levelcurves", "--config", cfg.string(), "--out", out.string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / "level_C2.csv"));
}

TEST_F(CliTest, VerifyAllPassesForFamily) {
  const fs::path out = dir_ / "v";
  const CliResult r = run_cli({"verify", "all", "--gamma", "1.5", "--out", out.string()});
  ASSERT_EQ(r.status, 0) << r.out << r.err;
  for (const auto& name : cli::all_checks()) {
    const auto report = report_from_json(Json::parse(slurp(out / (name + ".json"))));
    EXPECT_TRUE(report.passed) << name << ": " << report.notes;
    EXPECT_EQ(report.check_name, name);
  }
}

TEST_F(CliTest, VerifyPlanarThm2Fails) {
  const fs::path cfg = write_config("[pair]\nkind = planar\na = 2\nk0 = 2\n");
  const CliResult r = run_cli({"verify", "thm2", "--config", cfg.string(), "--out", (dir_ / "p").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("thm2"), std::string::npos);
  const auto report = report_from_json(Json::parse(slurp(dir_ / "p" / "thm2.json")));
  EXPECT_FALSE(report.passed);
  EXPECT_NE(report.notes.find("trivial case where u is planar"), std::string::npos);
}

TEST_F(CliTest, VerifyScaling) {
  const CliResult r = run_cli({"verify", "scaling", "--gamma", "1.5", "--out", (dir_ / "s").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto report = report_from_json(Json::parse(slurp(dir_ / "s" / "scaling.json")));
  EXPECT_TRUE(report.passed);
  EXPECT_LE(report.empirical_constant, 1e-10);
  EXPECT_NE(report.notes.find("c = 2"), std::string::npos);
}

TEST_F(CliTest, VerifyUnknownCheck) {
  const CliResult r = run_cli({"verify", "everything", "--out", (dir_ / "u").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("unknown check"), std::string::npos);
}

TEST_F(CliTest, SweepGamma) {
  const CliResult r = run_cli({"sweep-gamma", "--gammas", "1.1,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9", "--out",
                         (dir_ / "g").string()});
  ASSERT_EQ(r.status, 0) << r.out << r.err;
  const auto rows = csv_rows(slurp(dir_ / "g" / "sweep_gamma.csv"));
  ASSERT_EQ(rows.size(), 10u);
  const auto& header = rows[0];
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][col("thm2_passed")], "true");
    EXPECT_EQ(rows[i][col("error")], "");
    EXPECT_GT(std::stod(rows[i][col("min_kappa")]), 0.0);
  }
  EXPECT_EQ(rows[5][col("gamma")], "1.5");
  EXPECT_NEAR(std::stod(rows[5][col("angle_plus")]), 3 * std::numbers::pi / 4, 1e-6);
  EXPECT_NEAR(std::stod(rows[5][col("angle_minus")]), std::numbers::pi / 4, 1e-6);
}

TEST_F(CliTest, SweepGammaEmptyAndBadRows) {
  const CliResult empty = run_cli({"sweep-gamma", "--out", (dir_ / "e").string()});
  EXPECT_EQ(empty.status, 0);
  EXPECT_EQ(csv_rows(slurp(dir_ / "e" / "sweep_gamma.csv")).size(), 1u);

  const CliResult bad = run_cli({"sweep-gamma", "--gammas", "1.5,2.5,1.7", "--out", (dir_ / "b").string()});
  EXPECT_EQ(bad.status, 1);
  const auto rows = csv_rows(slurp(dir_ / "b" / "sweep_gamma.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].back(), "");
  EXPECT_NE(rows[2].back().find("gamma"), std::string::npos);
  EXPECT_EQ(rows[3][0], "1.7");
}

TEST_F(CliTest, ReconstructWritesGrid) {
  const fs::path out = dir_ / "r";
  const CliResult r = run_cli({"reconstruct", "--gamma", "1.5", "--grid", "0.5,1.5,-0.5,0.5,0.125", "--out", out.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(out / "field.grid");
  const auto field = read_field_grid(in);
  EXPECT_EQ(field.nx, 9);
  EXPECT_EQ(field.ny, 9);
  EXPECT_EQ(field.valid_count(), 81u);
  EXPECT_TRUE(fs::exists(out / "field.csv"));
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(run_cli({"levelcurves", "--gamma", "1.3", "--levels", "1", "--format", "csv,json", "--out",
                       (dir_ / sub).string()})
                  .status,
              0);
    ASSERT_EQ(run_cli({"verify", "lemma2", "--gamma", "1.3", "--out", (dir_ / sub).string()}).status, 0);
  }
  for (const char* name : {"level_C1.csv", "level_C1.json", "lemma2.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
}

TEST_F(CliTest, FlagsOverrideConfig) {
  const fs::path cfg = write_config("[pair]\ngamma = 1.2\n[levels]\nvalues = 5\n[tolerances]\nthm1 = 1e-6\n");
  cli::Overrides o;
  o.config = cfg.string();
  o.gamma = 1.7;
  o.tolerances = {"thm1=1e-7"};
  o.tau = "-1,1,3";
  const RunConfig c = cli::resolve_config(o);
  EXPECT_EQ(c.pair.gamma, 1.7);
  EXPECT_EQ(c.levels, std::vector<double>{5.0});
  EXPECT_EQ(c.tolerance("thm1"), 1e-7);
  EXPECT_EQ(c.tau.n, 3);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).status, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).status, 2);
  EXPECT_EQ(run_cli({"levelcurves", "--gamma"}).status, 2);
  EXPECT_EQ(run_cli({"--help"}).status, 0);
  const CliResult bad_tol = run_cli({"verify", "thm1", "--tol", "nope=1", "--out", (dir_ / "t").string()});
  EXPECT_EQ(bad_tol.status, 1);
  EXPECT_FALSE(fs::exists(dir_ / "t"));
  EXPECT_EQ(run_cli({"levelcurves", "--gamma", "3", "--out", (dir_ / "x").string()}).status, 1);
}
