#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hyperquad/sampling.hpp"

using namespace hyperquad;
using namespace hyperquad::cli;

namespace {

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("hyperquad_cli_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperquad");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int code = run(static_cast<int>(argv.size()), argv.data());
  (void)testing::internal::GetCapturedStdout();
  (void)testing::internal::GetCapturedStderr();
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PointSet as_set(std::size_t d, std::vector<Point> pts) { return PointSet{d, std::move(pts)}; }

}  // namespace

TEST(Table1, ReferenceValues) {
  const auto rows = table1_entries();
  ASSERT_EQ(rows.size(), 9U);
  EXPECT_NEAR(rows[7].computed, 0.4208, 5e-5);  // l = 2
  EXPECT_NEAR(rows[5].computed, 0.5605, 5e-5);  // l = 0, alpha' = 1
  EXPECT_NEAR(rows[8].computed, 0.4317, 5e-5);  // l = 3
  EXPECT_EQ(rows[6].level, 1);
  const json report = cmd_table1();
  EXPECT_EQ(report["command"], "table1");
  EXPECT_EQ(report["metrics"]["table1"].size(), 9U);
  EXPECT_EQ(report["pass"].size(), 9U);
}

TEST(Gen, Examples) {
  GenOptions o;
  o.dim = 2;
  o.n = 1;
  o.radius = 0.0;
  EXPECT_EQ(cmd_gen(o), std::vector<Point>{Point({0.0}, 1.0)});
  o.n = 0;
  EXPECT_THROW((void)cmd_gen(o), UsageError);
  o.n = 5;
  o.mode = "disk";
  EXPECT_THROW((void)cmd_gen(o), UsageError);
  o.mode = "box";
  o.width = -1;
  EXPECT_THROW((void)cmd_gen(o), UsageError);
}

TEST(Gen, SameSeedSameBytes) {
  TempDir dir;
  const std::vector<std::string> args = {"gen", "--dim", "3", "--n", "200", "--seed", "42", "--out"};
  auto a = args;
  a.push_back(dir.file("a.txt"));
  auto b = args;
  b.push_back(dir.file("b.txt"));
  ASSERT_EQ(run_args(a), 0);
  ASSERT_EQ(run_args(b), 0);
  EXPECT_EQ(slurp(dir.file("a.txt")), slurp(dir.file("b.txt")));
  EXPECT_EQ(read_points(std::filesystem::path(dir.file("a.txt"))).points, sample_ball(3, 200, 5.0, 42));
}

TEST(Validate, TwoPointsAreExact) {
  ValidateOptions o;
  o.queries = 20;
  const json report = cmd_validate(as_set(2, {Point({0.0}, 1.0), Point({0.4}, 1.3)}), o);
  EXPECT_EQ(report["metrics"]["closest_pair"]["ratio"], 1.0);
}

TEST(Validate, VerticalStack) {
  ValidateOptions o;
  o.queries = 10;
  o.delta = 5.0;
  const json report =
      cmd_validate(as_set(2, {Point({0.0}, 1.0), Point({0.0}, 2.0), Point({0.0}, 8.0), Point({0.0}, 64.0)}), o);
  const json& pair = report["metrics"]["closest_pair"];
  EXPECT_EQ(pair["ratio"], 1.0);
  EXPECT_EQ(pair["pair"][0], json({0.0, 1.0}));
  EXPECT_EQ(pair["pair"][1], json({0.0, 2.0}));
}

TEST(Validate, ReportSchema) {
  ValidateOptions o;
  o.queries = 50;
  o.seed = 99;
  const json report = cmd_validate(as_set(3, sample_ball(3, 300, 3.0, 5)), o);
  EXPECT_EQ(report["command"], "validate");
  for (const char* key : {"d", "n", "delta", "seed", "queries"}) EXPECT_TRUE(report["parameters"].contains(key)) << key;
  EXPECT_EQ(report["parameters"]["seed"], 99);
  for (const char* key : {"build_ns", "query_ns_p50", "query_ns_p99", "nearest", "closest_pair", "covering"}) {
    EXPECT_TRUE(report["metrics"].contains(key)) << key;
  }
  EXPECT_TRUE(report["metrics"]["nearest"].contains("max_ratio"));
  EXPECT_TRUE(report["metrics"]["nearest"].contains("mean_ratio"));
  EXPECT_TRUE(report["pass"]["nearest_sound"].get<bool>());
}

TEST(Validate, ReproducibleForASeed) {
  ValidateOptions o;
  o.queries = 30;
  o.seed = 4;
  const PointSet set = as_set(2, sample_ball(2, 200, 3.0, 6));
  json a = cmd_validate(set, o);
  json b = cmd_validate(set, o);
  for (json* r : {&a, &b}) {
    r->at("metrics").erase("build_ns");
    r->at("metrics").erase("query_ns_p50");
    r->at("metrics").erase("query_ns_p99");
  }
  EXPECT_EQ(a, b);
}

TEST(Validate, BadInput) {
  ValidateOptions o;
  EXPECT_THROW((void)cmd_validate(as_set(2, {}), o), UsageError);
  o.delta = 100.0;
  EXPECT_THROW((void)cmd_validate(as_set(2, {Point({0.0}, 1.0)}), o), UsageError);
  o.delta = 1.0;
  EXPECT_THROW((void)cmd_validate(as_set(2, {Point({0.0}, 1.0), Point({0.0}, 1.0)}), o), UsageError);
}

TEST(Bench, EmptyMixReportsBuildOnly) {
  BenchOptions o;
  o.mix = "";
  const json report = cmd_bench(as_set(2, sample_ball(2, 100, 3.0, 1)), o);
  EXPECT_EQ(report["metrics"].size(), 1U);
  EXPECT_TRUE(report["metrics"].contains("build_ns"));
}

TEST(Bench, DeterministicOpSequence) {
  BenchOptions o;
  o.ops = 300;
  o.scaling_max = 0;
  o.seed = 12;
  const PointSet set = as_set(2, sample_ball(2, 100, 3.0, 1));
  const json a = cmd_bench(set, o);
  const json b = cmd_bench(set, o);
  for (const char* op : {"insert", "remove", "query"}) EXPECT_EQ(a["metrics"][op]["count"], b["metrics"][op]["count"]);
  EXPECT_EQ(a["metrics"]["final_size"], b["metrics"]["final_size"]);
  EXPECT_THROW((void)cmd_bench(set, BenchOptions{.mix = "fly:1"}), UsageError);
  EXPECT_THROW((void)cmd_bench(set, BenchOptions{.mix = "insert:x"}), UsageError);
}

TEST(Bench, ScalingSweepReportsFit) {
  BenchOptions o;
  o.ops = 10;
  o.scaling_max = 11;
  const json report = cmd_bench(as_set(2, sample_ball(2, 50, 3.0, 1)), o);
  const json& scaling = report["metrics"]["scaling"];
  EXPECT_EQ(scaling["rows"].size(), 2U);
  EXPECT_TRUE(scaling.contains("comparator_fit"));
}

TEST(FitLine, ExactLine) {
  const LinearFit fit = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(fit.slope, 2.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 1.0);
  EXPECT_DOUBLE_EQ(fit.r2, 1.0);
  EXPECT_THROW((void)fit_line({1, 1}, {2, 3}), std::invalid_argument);
}

TEST(Run, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_args({}), 2);
  EXPECT_EQ(run_args({"frobnicate"}), 2);
  EXPECT_EQ(run_args({"gen", "--dim", "2", "--n", "0"}), 2);
  EXPECT_EQ(run_args({"gen", "--dim", "x", "--n", "3"}), 2);
  EXPECT_EQ(run_args({"validate", dir.file("missing.txt")}), 2);
  {
    std::ofstream bad(dir.file("bad.txt"));
    bad << "# dim=2\n0 -1\n";
  }
  EXPECT_EQ(run_args({"validate", dir.file("bad.txt")}), 2);
  EXPECT_EQ(run_args({"--help"}), 0);
  // One table entry is known not to reproduce; see the README.
  EXPECT_EQ(run_args({"table1"}), 1);
  ASSERT_EQ(run_args({"gen", "--dim", "2", "--n", "100", "--radius", "3", "--out", dir.file("p.txt")}), 0);
  EXPECT_EQ(run_args({"bench", dir.file("p.txt"), "--ops", "50", "--scaling-max", "0", "--out", dir.file("b.json")}), 0);
  EXPECT_TRUE(json::parse(slurp(dir.file("b.json")))["pass"]["completed"].get<bool>());
}

TEST(Run, NoReportOnFailure) {
  TempDir dir;
  {
    std::ofstream dup(dir.file("dup.txt"));
    dup << "# dim=2\n0 1\n0 1\n";
  }
  EXPECT_EQ(run_args({"validate", dir.file("dup.txt"), "--out", dir.file("r.json")}), 2);
  EXPECT_FALSE(std::filesystem::exists(dir.file("r.json")));
}
