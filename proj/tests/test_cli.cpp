#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "curvetrace/cli.hpp"
#include "json.hpp"

using namespace curvetrace;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(CURVETRACE_SAMPLES_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Cli, MissingEpsIsUsageError) {
  const CliResult r = cli({"--input", sample("circle.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, BadInputs) {
  EXPECT_EQ(cli({"--expr", "x^2+", "--box", "-1,1;-1,1", "--eps", "0.1"}).code, 2);
  EXPECT_EQ(cli({"--expr", "x^2+y^2-1", "--eps", "0.1"}).code, 2);
  EXPECT_EQ(cli({"--expr", "x^2+y^2-1", "--box", "-1,1", "--eps", "0.1"}).code, 2);
  EXPECT_EQ(cli({"--expr", "x^2+y^2-1", "--box", "-1,1;-1,1", "--eps", "-1"}).code, 2);
  EXPECT_EQ(cli({"--expr", "x^2+y^2-1", "--box", "-1,1;-1,1", "--eps", "0.1", "--rho", "1.2"}).code, 2);
  EXPECT_EQ(cli({"--input", "/nonexistent.json", "--eps", "0.1"}).code, 2);
  EXPECT_EQ(cli({"--expr", "x^2+y^2-1", "--box", "-2,2;-2,2", "--eps", "0.1", "--format", "obj"}).code, 2);
}

TEST(Cli, DegreeCapExitCode) {
  const std::filesystem::path job = std::filesystem::temp_directory_path() / "curvetrace_cap.json";
  std::ofstream(job) << R"({"variables": ["x", "y"], "system": ["x^9+y^9-1"], "box": [[-2, 2], [-2, 2]],
                           "config": {"degree_cap": 10}})";
  EXPECT_EQ(cli({"--input", job.string(), "--eps", "0.1"}).code, 3);
  std::filesystem::remove(job);
}

TEST(Cli, CircleSvgFile) {
  const auto out = std::filesystem::temp_directory_path() / "curvetrace_circle.svg";
  const CliResult r = cli({"--input", sample("circle.json"), "--eps", "0.2", "--format", "svg", "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string svg = slurp(out);
  std::size_t paths = 0;
  for (auto p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1)) ++paths;
  EXPECT_EQ(paths, 1u);
  EXPECT_NE(svg.find(" Z\""), std::string::npos);
  std::filesystem::remove(out);
}

TEST(Cli, SexticJson) {
  const CliResult r = cli({"--input", sample("sextic.json"), "--eps", "0.4", "--format", "json", "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["singular_points"].size(), 1u);
  EXPECT_GE(j["chains"].size(), 6u);
  EXPECT_NE(r.err.find("verify:"), std::string::npos);
}

TEST(Cli, ExprModeAndMultipleFormats) {
  const auto stem = std::filesystem::temp_directory_path() / "curvetrace_multi";
  const CliResult r = cli({"--expr", "x^2+y^2+z^2-1", "--expr", "z", "--vars", "x,y,z", "--box", "-2,2;-2,2;-2,2",
                     "--eps", "0.2", "--format", "json", "--format", "obj", "-o", stem.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(stem.string() + ".json"));
  EXPECT_TRUE(std::filesystem::exists(stem.string() + ".obj"));
  EXPECT_NE(slurp(stem.string() + ".obj").find("\nl "), std::string::npos);
  std::filesystem::remove(stem.string() + ".json");
  std::filesystem::remove(stem.string() + ".obj");
}

TEST(Cli, PlaneObjWithProjection) {
  const CliResult r = cli({"--input", sample("circle.json"), "--eps", "0.2", "--format", "obj", "--project", "x,y,-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("v "), std::string::npos);
}

TEST(Cli, Help) {
  const CliResult r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--eps"), std::string::npos);
}
