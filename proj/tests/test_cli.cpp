#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "deltacut/io.hpp"
#include "test_support.hpp"

using deltacut::testing::fixture_path;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded unless redirected in `args`.
CliResult cli(const std::string& args, bool keep_stderr = false) {
  const std::string cmd = std::string("\"") + DELTACUT_CLI + "\" " + args +
                          (keep_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string geometry() { return "--geometry " + quoted(fixture_path("g0_geometry.json")); }

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("deltacut_cli_" + std::to_string(::getpid()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
};

}  // namespace

TEST_F(CliTest, InverseKinematics) {
  const CliResult r = cli("ik " + geometry() + " -- 0 0 -350");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  double t1, t2, t3;
  ASSERT_TRUE(in >> t1 >> t2 >> t3);
  EXPECT_NEAR(t1, 0.4561584884029059, 1e-12);
  EXPECT_NEAR(t3, t1, 1e-12);
}

TEST_F(CliTest, UnreachableExitsOne) {
  const CliResult r = cli("ik " + geometry() + " -- 0 0 -1000", true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("arm 1"), std::string::npos);
}

TEST_F(CliTest, ForwardKinematicsHome) {
  const CliResult r = cli("fk " + geometry() + " 0 0 0");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  double x, y, z;
  ASSERT_TRUE(in >> x >> y >> z);
  EXPECT_NEAR(z, -272.21315177632397, 1e-9);
}

TEST_F(CliTest, BadInputExitsTwo) {
  EXPECT_EQ(cli("fk " + geometry() + " 0 abc 0").code, 2);
  EXPECT_EQ(cli("").code, 2);
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({"f": 300, "e": 50, "rf": 100, "re": 10})";
  EXPECT_EQ(cli("fk --geometry " + quoted(bad) + " 0 0 0").code, 2);
}

TEST_F(CliTest, WorkspaceDump) {
  const fs::path out = dir / "grid.bin";
  const CliResult r = cli("workspace " + geometry() +
                    " --resolution 10 --xmin -300 --xmax 300 --ymin -300 --ymax 300"
                    " --zmin -550 --zmax -50 --out " + quoted(out));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("occupied 83276"), std::string::npos);
  std::ifstream in(out, std::ios::binary);
  const deltacut::WorkspaceGrid grid = deltacut::read_grid(in);
  EXPECT_EQ(grid.occupied_count(), 83276u);
}

TEST_F(CliTest, OptimizeIsReproducible) {
  const std::string args = "optimize --bounds " + quoted(fixture_path("g0_bounds.json")) +
                           " --prescribed " + quoted(fixture_path("g0_prescribed_200.json")) +
                           " --generations 10 --population 20 --seed 5 --out ";
  EXPECT_EQ(cli(args + quoted(dir / "a.json")).code, 0);
  EXPECT_EQ(cli(args + quoted(dir / "b.json") + " --threads 2").code, 0);
  const std::string a = deltacut::io::read_file(dir / "a.json");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, deltacut::io::read_file(dir / "b.json"));
  const auto report = nlohmann::json::parse(a);
  EXPECT_EQ(report.at("config").at("seed").get<int>(), 5);
  EXPECT_EQ(report.at("history").size(), 11u);
}

TEST_F(CliTest, OptimizeCoverageShortfall) {
  const std::string args = "optimize --bounds " + quoted(fixture_path("g0_bounds.json")) +
                           " --prescribed " + quoted(fixture_path("g0_prescribed_200.json")) +
                           " --generations 0 --population 4 --tournament 2 --seed 1 --min-coverage 1.01";
  EXPECT_EQ(cli(args).code, 1);
}

TEST_F(CliTest, PlanWritesStreamCsv) {
  const CliResult r = cli("plan " + geometry() + " --program " +
                    quoted(fixture_path("programs/line_100.json")));
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  const deltacut::SetpointStream s = deltacut::io::read_stream_csv(in);
  EXPECT_EQ(s.samples.size(), 59u);
  EXPECT_EQ(r.out.rfind("t,x,y,z,theta1,theta2,theta3,laser\n", 0), 0u);
}

TEST_F(CliTest, PlanUnreachableExitsOne) {
  const CliResult r = cli("plan " + geometry() + " --program " +
                        quoted(fixture_path("programs/outside.json")) + " --out " +
                        quoted(dir / "s.csv"),
                    true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("UnreachableSample"), std::string::npos);
}

TEST_F(CliTest, PlanPipesIntoSimulate) {
  const CliResult r = cli("plan " + geometry() + " --program " +
                    quoted(fixture_path("programs/line_100.json")) + " 2>/dev/null | \"" +
                    DELTACUT_CLI + "\" simulate --stream - --out " + quoted(dir / "trace.tsv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status completed"), std::string::npos);
  EXPECT_NE(r.out.find("pose 50 0 -300"), std::string::npos);
  EXPECT_EQ(deltacut::io::read_file(dir / "trace.tsv"), "58\trun_complete\t\tpose 50 0 -300\n");
}

TEST_F(CliTest, SimulateFaultMatchesGoldenTrace) {
  const fs::path stream = dir / "line.csv";
  ASSERT_EQ(cli("plan " + geometry() + " --program " +
                quoted(fixture_path("programs/line_100.json")) + " --out " + quoted(stream))
                .code,
            0);
  const CliResult r = cli("simulate --stream " + quoted(stream) + " --faults " +
                    quoted(fixture_path("faults_motion20.json")));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, deltacut::testing::fixture_text("golden_trace_motion20.tsv"));
}

TEST_F(CliTest, HelpShowsUnitsAndDefaults) {
  const CliResult r = cli("plan --help");
  EXPECT_EQ(r.code, 0);
  for (const char* needle : {"[1000]", "[23000]", "[0.0025]", "mm/s", "mm/s^2"}) {
    EXPECT_NE(r.out.find(needle), std::string::npos) << needle;
  }
}
