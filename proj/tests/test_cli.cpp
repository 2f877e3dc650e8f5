#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "wtm/cli.hpp"

using namespace wtm;
using wtm::cli::json;
using wtm::cli::Params;
namespace fs = std::filesystem;

constexpr double pi = std::numbers::pi;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("wtm-cli-") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const RadialProfile& u) {
    const auto path = (dir / name).string();
    write_profile(path, u);
    return path;
  }

  Params params(std::map<std::string, std::string> raw) {
    raw["out-dir"] = dir.string();
    return Params(std::move(raw));
  }

  fs::path dir;
};

RadialProfile inverse_linear() {
  const auto g = QuadratureGrid::geometric(1e-6, 1e6, 1u << 14);
  return RadialProfile::sample_with_power_tail([](double x) { return 1.0 / (1.0 + x); }, g.nodes(), 1.0);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed tool; returns exit status and stdout.
std::pair<int, std::string> tool(const std::string& args) {
  const std::string cmd = std::string(WTM_TOOL_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

} // namespace

TEST_F(CliTest, NormsOfInverseLinearProfile) {
  // omega_0 int (1+x)^{-2} = 2 and omega_1 int x (1+x)^{-4} = pi/3.
  const auto r = cli::run("norms", params({{"profile", write("u.txt", inverse_linear())}}));
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  EXPECT_NEAR(r.summary["lp_norm_pow"]["value"].get<double>(), 2.0, 1e-5);
  EXPECT_NEAR(r.summary["derivative_norm_pow"]["value"].get<double>(), pi / 3.0, 1e-5);
  EXPECT_GE(r.summary["lp_norm_pow"]["err_est"].get<double>(), 0.0);
  EXPECT_EQ(r.summary["manifest"]["params"]["alpha"].get<double>(), 1.0);
  EXPECT_EQ(r.summary["manifest"]["version"], cli::kVersion);
}

TEST_F(CliTest, EmptyProfileGivesZeroNorms) {
  const auto path = (dir / "empty.txt").string();
  std::ofstream(path) << "# p=2\n";
  const auto r = cli::run("norms", params({{"profile", path}}));
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  EXPECT_EQ(r.summary["lp_norm"]["value"].get<double>(), 0.0);
  EXPECT_EQ(r.summary["sobolev_norm"]["value"].get<double>(), 0.0);
}

TEST_F(CliTest, MalformedInputIsAValidationError) {
  const auto path = (dir / "bad.txt").string();
  std::ofstream(path) << "1.0 1.0\n0.5 0.0\n";
  const auto r = cli::run("norms", params({{"profile", path}}));
  EXPECT_EQ(r.exit_code, cli::kExitValidation);
  EXPECT_EQ(r.summary["error"], "validation");
  EXPECT_EQ(cli::run("norms", params({{"profile", (dir / "missing.txt").string()}})).exit_code, cli::kExitValidation);
  EXPECT_EQ(cli::run("norms", params({{"profile", path}, {"p", "two"}})).exit_code, cli::kExitValidation);
  EXPECT_EQ(cli::run("nonsense", params({})).exit_code, cli::kExitValidation);
}

TEST_F(CliTest, SupercriticalMuNeedsTheFlag) {
  const auto path = write("u.txt", RadialProfile({1.0, 2.0}, {1.0, 0.0}));
  const double thr = tm_threshold(1.0, 0.0);
  auto prm = params({{"profile", path}, {"mu", wtm::detail::format_double(1.5 * thr)}});
  EXPECT_EQ(cli::run("tm-eval", prm).exit_code, cli::kExitValidation);
  prm.set("allow-supercritical", "true");
  const auto r = cli::run("tm-eval", prm);
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  EXPECT_GT(r.summary["F"]["value"].get<double>(), 0.0);
  EXPECT_EQ(cli::run("moser", params({{"mu-ratio", "1.2"}})).exit_code, cli::kExitValidation);
  EXPECT_EQ(cli::run("tm-eval", params({{"profile", path}, {"mu", "1"}, {"mu-ratio", "0.5"}})).exit_code,
            cli::kExitValidation);
}

TEST_F(CliTest, ExtremalRunsAreReproducible) {
  const std::map<std::string, std::string> raw{{"grid-size", "32"}, {"iterations", "40"}, {"seed", "5"}};
  const auto a = cli::run("extremal", params(raw));
  const auto b = cli::run("extremal", params(raw));
  ASSERT_EQ(a.exit_code, 0) << a.summary.dump();
  EXPECT_EQ(a.summary["manifest"]["hash"], b.summary["manifest"]["hash"]);
  EXPECT_EQ(a.summary["value"], b.summary["value"]);
  EXPECT_EQ(a.summary["manifest"]["seed"].get<int>(), 5);
  const auto trace = a.summary["manifest"]["artifacts"]["trace"].get<std::string>();
  const auto prof = a.summary["manifest"]["artifacts"]["profile"].get<std::string>();
  EXPECT_EQ(slurp(trace).substr(0, 15), "iteration,best\n");
  EXPECT_TRUE(read_profile(prof).profile.is_nonincreasing());
  EXPECT_TRUE(a.summary["certificates"]["unit_norm"].get<bool>());
  const auto c = cli::run("extremal", params({{"grid-size", "32"}, {"iterations", "40"}, {"seed", "6"}}));
  EXPECT_NE(a.summary["manifest"]["hash"], c.summary["manifest"]["hash"]);
}

TEST_F(CliTest, GridSizeFallsBackToEnvironment) {
  setenv("WTM_GRID_SIZE", "40", 1);
  EXPECT_EQ(cli::default_grid_size(), 40u);
  setenv("WTM_GRID_SIZE", "4", 1);
  EXPECT_THROW(cli::default_grid_size(), ValidationError);
  unsetenv("WTM_GRID_SIZE");
  EXPECT_EQ(cli::default_grid_size(), 512u);
}

TEST_F(CliTest, GnReportsTheTrialEnvelope) {
  const auto r = cli::run("gn", params({{"grid-size", "32"}, {"iterations", "20"}}));
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  EXPECT_NEAR(r.summary["envelope"].get<double>(), pi, 1e-15);
  EXPECT_NEAR(r.summary["trial_value"].get<double>(), pi, 1e-6);
  EXPECT_GE(r.summary["delta"].get<double>(), -1e-6);
}

TEST_F(CliTest, MoserTableShowsBlowup) {
  const auto r = cli::run("moser", params({{"mu-ratio", "1.2"}, {"allow-supercritical", "true"}, {"quad-j-max", "3"}}));
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  EXPECT_GT(r.summary["final_bound"].get<double>(), 1e3);
  EXPECT_EQ(r.summary["first_j_bound_above_1e3"].get<int>(), 39);
  std::istringstream csv(slurp(r.summary["manifest"]["artifacts"]["trace"].get<std::string>()));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "j,blowup_bound,exp_integral,derivative_norm,a_j");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 100);
}

TEST_F(CliTest, RearrangeWritesAMonotoneProfile) {
  const auto path = write("tent.txt", RadialProfile({1.0, 2.0, 3.0}, {0.0, 1.0, 0.0}));
  const auto out = (dir / "r.txt").string();
  const auto r = cli::run("rearrange", params({{"profile", path}, {"l", "1"}, {"out", out}}));
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  EXPECT_TRUE(read_profile(out).profile.is_nonincreasing());
  EXPECT_LT(r.summary["equimeasurability"]["2"]["rel_diff"].get<double>(), 1e-5);
  EXPECT_GE(r.summary["dirichlet"]["gap"].get<double>(), 0.0);
}

TEST_F(CliTest, VanishAndShootSummaries) {
  const auto v = cli::run("vanish", params({{"mu", "1"}, {"steps", "9"}}));
  ASSERT_EQ(v.exit_code, 0) << v.summary.dump();
  EXPECT_EQ(v.summary["limit"].get<double>(), 1.0);
  EXPECT_LT(v.summary["distance_to_limit"].get<double>(), 0.01);
  const auto s = cli::run("el-shoot", params({{"lambda", "1"}}));
  ASSERT_EQ(s.exit_code, 0) << s.summary.dump();
  EXPECT_LT(s.summary["residual_max"].get<double>(), 1e-4 * s.summary["residual_scale"].get<double>());
  EXPECT_EQ(cli::run("el-shoot", params({{"lambda", "-1"}})).exit_code, cli::kExitValidation);
}

TEST_F(CliTest, SweepRunsTheCartesianProduct) {
  const auto r = cli::dispatch("sweep", params({{"command", "vanish"}, {"theta", "0,1"}, {"mu-ratio", "0.2,0.4"}, {"steps", "2"}}));
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump();
  ASSERT_EQ(r.summary["runs"].size(), 4u);
  for (const auto& run : r.summary["runs"]) EXPECT_EQ(run["exit_code"].get<int>(), 0);
  const auto bad = cli::dispatch("sweep", params({{"command", "vanish"}, {"mu-ratio", "0.5,2"}}));
  EXPECT_EQ(bad.exit_code, cli::kExitValidation);
  EXPECT_EQ(cli::dispatch("sweep", params({{"command", "sweep"}})).exit_code, cli::kExitValidation);
}

TEST_F(CliTest, ToolBinaryPrintsJsonAndExitCodes) {
  const auto path = write("u.txt", inverse_linear());
  const auto [code, out] = tool("--out-dir " + dir.string() + " norms --profile " + path);
  ASSERT_EQ(code, 0) << out;
  const auto j = json::parse(out);
  EXPECT_NEAR(j["lp_norm_pow"]["value"].get<double>(), 2.0, 1e-5);
  EXPECT_EQ(tool("tm-eval --profile " + path + " --mu-ratio 1.5").first, cli::kExitValidation);
  EXPECT_EQ(tool("norms --no-such-option 1").first, cli::kExitValidation);
  EXPECT_EQ(tool("--version").first, 0);
}
