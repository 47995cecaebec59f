// Copyright 2026 The statpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests of the command-line binary: exit codes, CSV shapes,
// manifest round-trips, output-directory resolution and byte stability.
// Every test spawns the real executable (path injected at compile time).

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with the given argument string; env_prefix may carry
// VAR=value assignments for the child process.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() /
                       ("statpriv_cli_out_" + std::to_string(counter));
  const fs::path err = fs::temp_directory_path() /
                       ("statpriv_cli_err_" + std::to_string(counter));
  ++counter;
  std::string cmd = env_prefix + " \"" STATPRIV_CLI_PATH "\" " + args + " >" +
                    out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("statpriv_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) fields.push_back(f);
  return fields;
}

TEST(CurveCommand, PureAnalyticMatchesOracle) {
  const fs::path dir = fresh_dir("curve_pure");
  const RunResult r = run_cli(
      "curve --n 1000 --pi 0.5 --mech pure --eps 0.1 --output-dir " +
      dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("wrote"), std::string::npos);
  EXPECT_NE(r.out.find("(1 rows)"), std::string::npos);

  const std::vector<std::string> lines = lines_of(slurp(dir / "curve.csv"));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "epsilon,delta_analytic,delta_oracle,abs_discrepancy");
  const std::vector<std::string> f = split_csv(lines[1]);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_DOUBLE_EQ(std::stod(f[0]), 0.1);
  const double analytic = std::stod(f[1]);
  const double oracle = std::stod(f[2]);
  EXPECT_NEAR(analytic, 0.0016192050964889595, 1e-15);
  EXPECT_NEAR(analytic, oracle, 1e-9);
  EXPECT_NEAR(std::stod(f[3]), std::fabs(analytic - oracle), 1e-18);
}

TEST(CurveCommand, LaplaceBoundRegimeHasZeroDelta) {
  const fs::path dir = fresh_dir("curve_lap");
  const RunResult r = run_cli(
      "curve --n 1000 --pi 0.5 --mech laplace --psi 0.1 --eps 0.01 "
      "--output-dir " +
      dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::vector<std::string> lines = lines_of(slurp(dir / "curve.csv"));
  ASSERT_EQ(lines.size(), 2u);
  const std::vector<std::string> f = split_csv(lines[1]);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "0");  // the closed form is exactly zero at the bound
  EXPECT_LE(std::stod(f[2]), 1e-12);
  EXPECT_GE(std::stod(f[2]), 0.0);
}

TEST(CurveCommand, LaplaceBelowBoundLeavesAnalyticColumnEmptyOfMeaning) {
  const fs::path dir = fresh_dir("curve_lap_below");
  const RunResult r = run_cli(
      "curve --n 1000 --pi 0.5 --mech laplace --psi 0.1 --eps 0.005 "
      "--output-dir " +
      dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::vector<std::string> lines = lines_of(slurp(dir / "curve.csv"));
  ASSERT_EQ(lines.size(), 2u);
  const std::vector<std::string> f = split_csv(lines[1]);
  EXPECT_EQ(f[1], "nan");  // no closed form below the bound
  EXPECT_GT(std::stod(f[2]), 0.0);
}

TEST(CurveCommand, DefaultGridAndPureRegimeNote) {
  const fs::path dir = fresh_dir("curve_grid");
  const RunResult r = run_cli(
      "curve --n 50 --pi 0.5 --mech pure --output-dir " + dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("(201 rows)"), std::string::npos);
  EXPECT_NE(r.err.find("exceed ln 2"), std::string::npos);
  EXPECT_EQ(lines_of(slurp(dir / "curve.csv")).size(), 202u);
}

TEST(CurveCommand, UsageErrorsExitTwo) {
  const std::vector<std::string> bad = {
      "curve --n 1000 --pi 0.5 --mech pure --eps -1",
      "curve --n 1000 --pi 0.5 --mech subsample --eps 0.1",
      "curve --n 1000 --pi 0.5 --mech pure --psi 0.1 --eps 0.1",
      "curve --n 1000 --pi 0.5 --mech subsample --lambda 0.1 --m 100 --eps 0.1",
      "curve --n 1000 --pi 0.5 --mech gaussian --eps 0.1",
      "curve --pi 0.5 --mech pure --eps 0.1",
      "curve --n 1000 --pi 0.5 --mech pure --eps 0.1 --no-such-flag",
      "curve --n 1000 --pi 1.5 --mech pure --eps 0.1",
  };
  for (const std::string& args : bad) {
    const RunResult r = run_cli(args);
    EXPECT_EQ(r.exit_code, 2) << args;
    EXPECT_FALSE(r.err.empty()) << args;
    EXPECT_EQ(lines_of(r.err).size(), 1u) << "one-line diagnostic: " << args;
  }
}

TEST(CurveCommand, SubsampleAcceptsRateOrSize) {
  const fs::path dir1 = fresh_dir("curve_rate");
  const fs::path dir2 = fresh_dir("curve_size");
  const RunResult r1 = run_cli(
      "curve --n 1000 --pi 0.5 --mech subsample --lambda 0.1 --eps 0.1 "
      "--output-dir " +
      dir1.string());
  const RunResult r2 = run_cli(
      "curve --n 1000 --pi 0.5 --mech subsample --m 100 --eps 0.1 "
      "--output-dir " +
      dir2.string());
  EXPECT_EQ(r1.exit_code, 0) << r1.err;
  EXPECT_EQ(r2.exit_code, 0) << r2.err;
  EXPECT_EQ(slurp(dir1 / "curve.csv"), slurp(dir2 / "curve.csv"));
}

TEST(CurveCommand, GaussianAnalyticColumnIsTheApproximation) {
  const fs::path dir = fresh_dir("curve_gauss");
  const RunResult r = run_cli(
      "curve --n 1000 --pi 0.5 --mech gaussian --sigma 0.001 --eps 0.01 "
      "--output-dir " +
      dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::vector<std::string> lines = lines_of(slurp(dir / "curve.csv"));
  ASSERT_EQ(lines.size(), 2u);
  const std::vector<std::string> f = split_csv(lines[1]);
  const double analytic = std::stod(f[1]);
  const double oracle = std::stod(f[2]);
  EXPECT_GT(oracle, 0.0);
  EXPECT_LT(std::fabs(analytic - oracle) / oracle, 0.05);
  EXPECT_NE(analytic, oracle);
}

TEST(PresetCommand, Fig5DatasetWithManifest) {
  const fs::path dir = fresh_dir("preset_fig5");
  const RunResult r = run_cli("preset fig5 --output-dir " + dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;

  const fs::path base = dir / "fig5";
  const fs::path a_csv = base / "subsample_at_amplified_eps.csv";
  const fs::path b_csv = base / "pure_scaled_by_lambda.csv";
  ASSERT_TRUE(fs::exists(a_csv));
  ASSERT_TRUE(fs::exists(b_csv));
  ASSERT_TRUE(fs::exists(base / "manifest.json"));

  const std::vector<std::string> a_lines = lines_of(slurp(a_csv));
  const std::vector<std::string> b_lines = lines_of(slurp(b_csv));
  ASSERT_EQ(a_lines.size(), 9u);  // header + 8 lambda values
  ASSERT_EQ(b_lines.size(), 9u);
  EXPECT_EQ(a_lines[0], "x,y");

  // the final grid point is lambda = 1, where the two series coincide
  const double a_last = std::stod(split_csv(a_lines[8])[1]);
  const double b_last = std::stod(split_csv(b_lines[8])[1]);
  EXPECT_DOUBLE_EQ(std::stod(split_csv(a_lines[8])[0]), 1.0);
  EXPECT_NEAR(a_last, b_last, 1e-9 * b_last);

  const nlohmann::json manifest =
      nlohmann::json::parse(slurp(base / "manifest.json"));
  EXPECT_EQ(manifest.at("preset"), "fig5");
  EXPECT_EQ(manifest.at("version"), "1.0.0");
  EXPECT_EQ(manifest.at("parameters").at("lambda_grid"),
            "0.01,0.02,0.05,0.1,0.2,0.25,0.5,1");
  ASSERT_EQ(manifest.at("series").size(), 2u);
  EXPECT_EQ(manifest.at("series")[0].at("points"), 8);
  EXPECT_EQ(manifest.at("series")[0].at("file"),
            "subsample_at_amplified_eps.csv");
}

TEST(PresetCommand, CheckManifestRoundTrips) {
  const fs::path dir = fresh_dir("preset_check");
  ASSERT_EQ(run_cli("preset fig5 --output-dir " + dir.string()).exit_code, 0);
  const RunResult r = run_cli("preset fig5 --check-manifest " +
                              (dir / "fig5" / "manifest.json").string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("manifest ok: fig5 (2 series, version 1.0.0)"),
            std::string::npos);

  // tampering with a parameter must break the round-trip
  const fs::path edited = dir / "edited.json";
  nlohmann::json m = nlohmann::json::parse(slurp(dir / "fig5" / "manifest.json"));
  m["parameters"]["n"] = "999";
  std::ofstream(edited) << m.dump(2) << "\n";
  const RunResult bad = run_cli("preset fig5 --check-manifest " +
                                edited.string());
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_NE(bad.err.find("round-trip"), std::string::npos);
}

TEST(PresetCommand, UnknownIdExitsTwoAndListsKnownIds) {
  const RunResult r = run_cli("preset fig9");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("unknown preset id: fig9"), std::string::npos);
  EXPECT_NE(r.err.find("known presets:"), std::string::npos);
  EXPECT_NE(r.err.find("conjecture"), std::string::npos);
}

TEST(PresetCommand, ByteStableAcrossRunsWithNoTempLeftovers) {
  const fs::path dir1 = fresh_dir("preset_stable1");
  const fs::path dir2 = fresh_dir("preset_stable2");
  ASSERT_EQ(run_cli("preset fig5 --output-dir " + dir1.string()).exit_code, 0);
  ASSERT_EQ(run_cli("preset fig5 --output-dir " + dir2.string()).exit_code, 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir1 / "fig5")) {
    const fs::path rel = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(dir2 / "fig5" / rel)) << rel;
    ++compared;
  }
  EXPECT_EQ(compared, 3);  // two series plus the manifest
  for (const auto& entry : fs::recursive_directory_iterator(dir1)) {
    EXPECT_NE(entry.path().extension(), ".tmp") << entry.path();
  }
}

TEST(OutputDirResolution, EnvVarIsDefaultAndFlagWins) {
  const fs::path env_dir = fresh_dir("outdir_env");
  const fs::path flag_dir = fresh_dir("outdir_flag");

  const RunResult via_env = run_cli(
      "preset fig5", "STATPRIV_OUTPUT_DIR=" + env_dir.string());
  EXPECT_EQ(via_env.exit_code, 0) << via_env.err;
  EXPECT_TRUE(fs::exists(env_dir / "fig5" / "manifest.json"));

  const RunResult via_flag = run_cli(
      "preset fig5 --output-dir " + flag_dir.string(),
      "STATPRIV_OUTPUT_DIR=" + env_dir.string());
  EXPECT_EQ(via_flag.exit_code, 0) << via_flag.err;
  EXPECT_TRUE(fs::exists(flag_dir / "fig5" / "manifest.json"));
}

TEST(UtilityMatchCommand, PrintsCalibrationAndRejectsAmbiguity) {
  const RunResult r =
      run_cli("utility-match --n 1000 --pi 0.5 --lambda 0.1");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("n = 1000"), std::string::npos);
  EXPECT_NE(r.out.find("m = 100"), std::string::npos);
  EXPECT_NE(r.out.find("ul_subsample = 0.0022500000000000003"),
            std::string::npos);
  EXPECT_NE(r.out.find("psi_matched = 0.033541019662496847"),
            std::string::npos);
  EXPECT_NE(r.out.find("sigma_matched = 0.047434164902525694"),
            std::string::npos);
  EXPECT_NE(r.out.find("laplace_bound_eps = 0.029814239699997191"),
            std::string::npos);

  const RunResult by_m = run_cli("utility-match --n 1000 --pi 0.5 --m 100");
  EXPECT_EQ(by_m.exit_code, 0);
  EXPECT_EQ(by_m.out, r.out);

  EXPECT_EQ(run_cli("utility-match --n 1000 --pi 0.5").exit_code, 2);
  EXPECT_EQ(
      run_cli("utility-match --n 1000 --pi 0.5 --lambda 0.1 --m 100").exit_code,
      2);
  EXPECT_EQ(run_cli("utility-match --n 1000 --pi 0.5 --lambda 1").exit_code, 2);
}

TEST(VerifyCommand, QuickPassesAndImpossibleToleranceFails) {
  const RunResult ok = run_cli("verify --quick");
  EXPECT_EQ(ok.exit_code, 0) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("discrete battery:"), std::string::npos);
  EXPECT_NE(ok.out.find("mixture battery:"), std::string::npos);
  EXPECT_NE(ok.out.find("verify: PASS"), std::string::npos);

  const RunResult fail =
      run_cli("verify --quick --tol-discrete 1e-300 --tol-mixture 1e-300");
  EXPECT_EQ(fail.exit_code, 1);
  EXPECT_NE(fail.out.find("verify: FAIL worst:"), std::string::npos);
  EXPECT_NE(fail.out.find("exceeds tolerance"), std::string::npos);

  EXPECT_EQ(run_cli("verify --tol-discrete 0").exit_code, 2);
  EXPECT_EQ(run_cli("verify --tol-mixture -1").exit_code, 2);
}

TEST(CompareCommand, LongCsvOverNoiseGrid) {
  const fs::path dir = fresh_dir("compare");
  const RunResult r = run_cli(
      "compare --kind gaussian --n 100 --eps 0.01 --pi 0.5 --nu-min 1 "
      "--nu-max 2 --nu-points 2 --output-dir " +
      dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::vector<std::string> lines = lines_of(slurp(dir / "compare.csv"));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "pi,nu,delta_sp,delta_dp,ratio");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_csv(lines[i]);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_DOUBLE_EQ(std::stod(f[0]), 0.5);
    const double sp = std::stod(f[2]);
    const double dp = std::stod(f[3]);
    const double ratio = std::stod(f[4]);
    EXPECT_GT(sp, 0.0);
    EXPECT_NEAR(ratio, dp / sp, 1e-12 * ratio);
  }
}

TEST(SweepCommand, PiAndLambdaShapes) {
  const fs::path dir = fresh_dir("sweep_pi");
  const RunResult r = run_cli(
      "sweep --over pi --n 100 --eps 0.01 --lambda 0.1 --pi-grid 0.3 0.5 "
      "--output-dir " +
      dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::vector<std::string> lines = lines_of(slurp(dir / "sweep.csv"));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "pi,delta_subsample,delta_gaussian_matched,delta_laplace_matched");

  const fs::path dir2 = fresh_dir("sweep_lambda");
  const RunResult r2 = run_cli(
      "sweep --over lambda --n 100 --eps 0.01 --pi 0.5 --lambda-grid 0.1 0.2 "
      "--output-dir " +
      dir2.string());
  EXPECT_EQ(r2.exit_code, 0) << r2.err;
  const std::vector<std::string> lines2 = lines_of(slurp(dir2 / "sweep.csv"));
  ASSERT_EQ(lines2.size(), 3u);
  EXPECT_EQ(lines2[0], "pi,lambda,delta_subsample,delta_gaussian,delta_laplace");
}

TEST(TopLevel, NoCommandIsUsageErrorAndHelpSucceeds) {
  EXPECT_EQ(run_cli("").exit_code, 2);
  const RunResult help = run_cli("--help");
  EXPECT_EQ(help.exit_code, 0);
  EXPECT_NE(help.out.find("curve"), std::string::npos);
  EXPECT_NE(help.out.find("verify"), std::string::npos);
}

}  // namespace
