#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "cli.hpp"
#include "decaylab/io.hpp"

using namespace decaylab;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("decaylab-test-" + std::to_string(::getpid()) + "-" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunOutput {
  int code = -1;
  std::string text;
};

RunOutput run_to_file(std::vector<std::string> args, const std::string& name) {
  const auto out = temp_path(name);
  args.insert(args.end(), {"--out", out.string()});
  RunOutput r;
  r.code = cli::run(args);
  r.text = slurp(out);
  std::filesystem::remove(out);
  std::filesystem::remove(out.string() + ".manifest.json");
  return r;
}

}  // namespace

TEST(Cli, BesselTableJson) {
  const RunOutput r = run_to_file({"bessel-table", "--kmax", "4", "--format", "json"}, "bessel.json");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.text);
  EXPECT_EQ(j["summary"]["a"][0][2], "3");
  EXPECT_EQ(j["summary"]["b"][0][1], "3");
  EXPECT_EQ(j["manifest"]["subcommand"], "bessel-table");
  EXPECT_EQ(j["manifest"]["all_passed"], true);
}

TEST(Cli, LqScanClassifiesBelowThreshold) {
  const RunOutput r = run_to_file({"lq-scan", "--d", "2", "--q", "3"}, "lq.csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.text.find("DIVERGENT"), std::string::npos);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"sphere-ft", "--d", "2", "--samples", "21", "--format", "json"};
  const RunOutput a = run_to_file(args, "a.json");
  const RunOutput b = run_to_file(args, "b.json");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.text, b.text);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli::run({"no-such-command"}), 1);
  EXPECT_EQ(cli::run({"lq-scan", "--bogus"}), 1);
  EXPECT_EQ(cli::run({"dyadic-norms", "--d", "2", "--alpha", "1"}), 1);
  EXPECT_EQ(cli::run({"--help"}), 0);
}

TEST(Cli, DecayProbeRejectsBadInput) {
  EXPECT_EQ(cli::run({"decay-probe", "--spec", "{\"distribution\": "}), 1);
  EXPECT_EQ(cli::run({"decay-probe", "--spec", "{\"distribution\": {\"variant\": \"gaussian\"}, \"colour\": 1}"}), 1);
}

TEST(Cli, DecayProbeExpectationHolds) {
  const std::string spec =
      R"({"distribution": {"variant": "coordinate", "dimension": 2}, "pair": {"max_order": 1, "q": 2},)"
      R"( "directions": 8, "apertures_deg": [30], "expect": ["ZERO"]})";
  const RunOutput r = run_to_file({"decay-probe", "--spec", spec, "--format", "json"}, "probe.json");
  EXPECT_EQ(r.code, 0) << r.text;
}
