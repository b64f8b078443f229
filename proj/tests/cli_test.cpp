//
// Copyright 2026 The ggdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end checks of the ggdp binary: exit codes, dataset handling,
// determinism of seeded runs.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include <nlohmann/json.hpp>

namespace {

struct CliResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(GGDP_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer;
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    output += buffer.data();
  }
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string(::testing::TempDir()) + name;
  std::ofstream out(path);
  out << content;
  return path;
}

TEST(Cli, CalibrateEmitsFrozenSigma) {
  const CliResult r =
      run_cli("calibrate --k 10000 --p 4 --eps 1 --delta 1e-3");
  EXPECT_EQ(r.exit_code, 0);
  const auto record = nlohmann::json::parse(r.output);
  EXPECT_NEAR(record["sigma"].get<double>(), 525.6521769756931, 1e-6);
  EXPECT_EQ(record["normalized_p"].get<int>(), 4);
}

TEST(Cli, CalibrateComposedEmitsSchedule) {
  const CliResult r = run_cli(
      "calibrate --k 65536 --p 4 --eps 1 --delta 1e-4 --t 1 "
      "--mechanism composed");
  EXPECT_EQ(r.exit_code, 0);
  const auto record = nlohmann::json::parse(r.output);
  EXPECT_EQ(record["composed"]["c_sv"].get<int>(), 17);
  EXPECT_DOUBLE_EQ(record["composed"]["eps_sv"].get<double>(), 0.5);
}

TEST(Cli, CalibrateEmpiricalSearchesBelowAnalytic) {
  const CliResult r = run_cli(
      "calibrate --k 16 --p 4 --eps 1 --delta 0.05 --empirical "
      "--trials 2000 --seed 11");
  EXPECT_EQ(r.exit_code, 0);
  const auto record = nlohmann::json::parse(r.output);
  EXPECT_EQ(record["method"].get<std::string>(), "empirical");
  EXPECT_GT(record["sigma"].get<double>(), 0.0);
  EXPECT_LT(record["sigma"].get<double>(),
            8.0 * record["analytic_sigma"].get<double>());
}

TEST(Cli, CalibrateWithoutDeltaIsUsageError) {
  const CliResult r = run_cli("calibrate --k 100 --p 4 --eps 1");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("delta"), std::string::npos);
}

TEST(Cli, SeededRunsAreIdentical) {
  const std::string args =
      "run --values 1,2,3 --mechanism ggauss --p 4 --sigma 5 --seed 7";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output, b.output);
  const auto record = nlohmann::json::parse(a.output);
  EXPECT_EQ(record["values"].size(), 3u);
  EXPECT_EQ(record["seed"].get<int>(), 7);
}

TEST(Cli, RunReadsCsvDataset) {
  const std::string path = write_temp("ggdp_data.csv", "1.5\n-2.0\n3.25\n");
  const CliResult r = run_cli("run --data " + path +
                              " --mechanism laplace --eps 1 --seed 3");
  EXPECT_EQ(r.exit_code, 0);
  const auto record = nlohmann::json::parse(r.output);
  EXPECT_EQ(record["k"].get<int>(), 3);
}

TEST(Cli, RunReadsJsonDataset) {
  const std::string path = write_temp("ggdp_data.json", "[1.0, 2.0, 3.0, 4.0]");
  const CliResult r = run_cli("run --data " + path +
                              " --mechanism gaussian --eps 1 --delta 1e-5 "
                              "--seed 3");
  EXPECT_EQ(r.exit_code, 0);
  const auto record = nlohmann::json::parse(r.output);
  EXPECT_EQ(record["k"].get<int>(), 4);
}

TEST(Cli, MalformedCsvNamesOffendingLine) {
  const std::string path =
      write_temp("ggdp_bad.csv", "1.5\nnot_a_number\n3.25\n");
  const CliResult r = run_cli("run --data " + path +
                              " --mechanism laplace --eps 1");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("line 2"), std::string::npos);
}

TEST(Cli, ForcedTruncationReleasesInput) {
  // k = 1, p = 4, sigma = 1: hunt a few seeds for a guard event; the output
  // must then echo the input exactly.
  for (int seed = 0; seed < 200; ++seed) {
    const CliResult r = run_cli(
        "run --values 3.25 --mechanism ggauss --p 4 --sigma 1 --truncate "
        "--seed " + std::to_string(seed));
    EXPECT_EQ(r.exit_code, 0);
    const auto record = nlohmann::json::parse(r.output);
    if (record["truncated"].get<bool>()) {
      EXPECT_DOUBLE_EQ(record["values"][0].get<double>(), 3.25);
      return;
    }
  }
  FAIL() << "no truncated run observed in 200 seeds";
}

TEST(Cli, VerifySubgammaIsGreenAndByteIdentical) {
  const CliResult a = run_cli("verify --suite subgamma --seed 42");
  const CliResult b = run_cli("verify --suite subgamma --seed 42");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output, b.output);
  // Every line is a JSON verdict with the schema fields.
  std::istringstream lines(a.output);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto v = nlohmann::json::parse(line);
    EXPECT_EQ(v["seed"].get<int>(), 42);
    EXPECT_EQ(v["schema_version"].get<int>(), 1);
    EXPECT_TRUE(v["verdict"].is_string());
    ++count;
  }
  EXPECT_GT(count, 50u);
}

TEST(Cli, VerifySpherecapAcceptsDimensionOverrides) {
  const CliResult r =
      run_cli("verify --suite spherecap --k 2 --p 2 --seed 9");
  EXPECT_EQ(r.exit_code, 0);
  // The exact circle case is always part of the suite, and the override
  // adds a (k=2, p=2) cap grid.
  EXPECT_NE(r.output.find("circle_cap_exact_half"), std::string::npos);
  EXPECT_NE(r.output.find("\"k\":2"), std::string::npos);
}

TEST(Cli, VerifyUnknownSuiteIsUsageError) {
  const CliResult r = run_cli("verify --suite nonsense --seed 1");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, MissingSubcommandIsUsageError) {
  const CliResult r = run_cli("");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, BenchSingleCellEmitsOneRow) {
  const CliResult r = run_cli(
      "bench --mechanisms ggauss --k-grid 64 --p-grid 4 --eps 1 "
      "--delta 1e-3 --trials 200 --seed 5 --format csv");
  EXPECT_EQ(r.exit_code, 0);
  // Header plus exactly one data row.
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 2);
}

TEST(Cli, BenchTableAcrossMechanisms) {
  const CliResult r = run_cli(
      "bench --mechanisms laplace,gaussian,ggauss --k-grid 64 --p-grid 4 "
      "--eps 1 --delta 1e-3 --trials 200 --seed 5 --format table");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("laplace"), std::string::npos);
  EXPECT_NE(r.output.find("gaussian"), std::string::npos);
  EXPECT_NE(r.output.find("ggauss"), std::string::npos);
}

}  // namespace
