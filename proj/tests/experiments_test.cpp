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

// Tests for the experiment runners on reduced grids: series structure and
// labels, agreement with the closed forms they wrap, determinism, and the
// preset table the CLI exposes.  Full-size preset runs live in the
// acceptance suite, not here.

#include "statpriv/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "statpriv/analytic.hpp"
#include "statpriv/curve.hpp"
#include "statpriv/query.hpp"
#include "statpriv/utility.hpp"

namespace statpriv {
namespace {

const DataSeries& series_by_label(const std::vector<DataSeries>& all,
                                  const std::string& label) {
  for (const DataSeries& s : all) {
    if (s.label == label) return s;
  }
  ADD_FAILURE() << "missing series " << label;
  static const DataSeries empty;
  return empty;
}

bool identical(const std::vector<DataSeries>& a,
               const std::vector<DataSeries>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || a[i].meta != b[i].meta) return false;
    if (a[i].x.size() != b[i].x.size() || a[i].y.size() != b[i].y.size()) {
      return false;
    }
    for (std::size_t j = 0; j < a[i].x.size(); ++j) {
      if (a[i].x[j] != b[i].x[j] || a[i].y[j] != b[i].y[j]) return false;
    }
  }
  return true;
}

TEST(DpVsSpRunner, StructureLabelsAndBaselineValues) {
  const std::vector<DataSeries> out =
      run_dp_vs_sp_noise(KernelKind::kGaussian, 200, 0.01, {0.5}, 1.0, 3.0, 3);
  ASSERT_EQ(out.size(), 3u);
  const DataSeries& sp = series_by_label(out, "sp_pi_0.5");
  const DataSeries& dp = series_by_label(out, "dp_pi_0.5");
  const DataSeries& ratio = series_by_label(out, "ratio_pi_0.5");

  const std::vector<double> want_nu = {1.0, 2.0, 3.0};
  ASSERT_EQ(sp.x, want_nu);
  ASSERT_EQ(dp.x, want_nu);
  ASSERT_EQ(ratio.x, want_nu);

  const double s = 1.0 / 200.0;
  for (std::size_t i = 0; i < want_nu.size(); ++i) {
    EXPECT_EQ(dp.y[i], dp_gaussian_baseline(s, want_nu[i] * s, 0.01));
    EXPECT_GT(sp.y[i], 0.0);
    EXPECT_LT(sp.y[i], 1.0);
    EXPECT_NEAR(ratio.y[i], dp.y[i] / sp.y[i], 1e-15 * ratio.y[i]);
  }
  EXPECT_EQ(sp.meta.at("kind"), "gaussian");
  EXPECT_EQ(sp.meta.at("n"), "200");
  EXPECT_EQ(sp.meta.at("eps"), "0.01");
  EXPECT_EQ(sp.meta.at("pi"), "0.5");
}

TEST(DpVsSpRunner, SpSeriesMatchesDirectQuadrature) {
  const std::vector<DataSeries> out =
      run_dp_vs_sp_noise(KernelKind::kLaplace, 100, 0.01, {0.25}, 2.0, 2.0, 1);
  const DataSeries& sp = series_by_label(out, "sp_pi_0.25");
  ASSERT_EQ(sp.y.size(), 1u);
  const PropertyQuerySpec q = make_query(100, 0.25);
  const MixturePair pair = noisy_pair(q, make_laplace(2.0 / 100.0));
  const double direct = std::max(delta_mixture(pair.plus, pair.minus, 0.01),
                                 delta_mixture(pair.minus, pair.plus, 0.01));
  EXPECT_EQ(sp.y[0], direct);
}

TEST(DpVsSpRunner, ValidatesArguments) {
  EXPECT_THROW(
      run_dp_vs_sp_noise(KernelKind::kGaussian, 100, 0.01, {0.5}, 0.5, 3.0, 3),
      std::invalid_argument);  // nu below 1
  EXPECT_THROW(
      run_dp_vs_sp_noise(KernelKind::kGaussian, 100, 0.01, {0.5}, 1.0, 11.0, 3),
      std::invalid_argument);  // nu above 10
  EXPECT_THROW(
      run_dp_vs_sp_noise(KernelKind::kGaussian, 100, 0.01, {}, 1.0, 3.0, 3),
      std::invalid_argument);  // empty pi list
  EXPECT_THROW(
      run_dp_vs_sp_noise(KernelKind::kGaussian, 100, 0.01, {0.5}, 1.0, 3.0, 0),
      std::invalid_argument);  // no points
}

TEST(DpVsSpRunner, DeterministicAcrossRuns) {
  const auto once =
      run_dp_vs_sp_noise(KernelKind::kGaussian, 150, 0.02, {0.2, 0.5}, 1.0,
                         2.0, 2);
  const auto twice =
      run_dp_vs_sp_noise(KernelKind::kGaussian, 150, 0.02, {0.2, 0.5}, 1.0,
                         2.0, 2);
  EXPECT_TRUE(identical(once, twice));
  EXPECT_EQ(once.size(), 6u);  // three series per pi
}

TEST(EqualUtilityRunner, TripleOfSeriesOverPi) {
  const std::vector<double> pi_grid = {0.3, 0.5};
  const std::vector<DataSeries> out =
      run_equal_utility_comparison(100, 0.01, 0.1, pi_grid);
  ASSERT_EQ(out.size(), 3u);
  const DataSeries& sub = series_by_label(out, "subsample");
  const DataSeries& gau = series_by_label(out, "gaussian_matched");
  const DataSeries& lap = series_by_label(out, "laplace_matched");
  ASSERT_EQ(sub.x, pi_grid);
  ASSERT_EQ(gau.x, pi_grid);
  ASSERT_EQ(lap.x, pi_grid);
  for (std::size_t i = 0; i < pi_grid.size(); ++i) {
    const PropertyQuerySpec q = make_query(100, pi_grid[i]);
    EXPECT_EQ(sub.y[i], delta_subsample_analytic_m(q, 10, 0.01).delta());
    EXPECT_GT(gau.y[i], 0.0);
    EXPECT_GT(lap.y[i], 0.0);
  }
  // meta echoes the double through 17 significant digits
  EXPECT_EQ(sub.meta.at("lambda"), "0.10000000000000001");
  EXPECT_EQ(sub.meta.at("m"), "10");
  EXPECT_THROW(run_equal_utility_comparison(100, 0.01, 1.0, pi_grid),
               std::invalid_argument);
  EXPECT_THROW(run_equal_utility_comparison(100, 0.01, 0.1, {0.5, 0.3}),
               std::invalid_argument);  // grid must ascend
}

TEST(LambdaSweepRunner, TriplePerPiOverLambda) {
  const std::vector<double> grid = {0.05, 0.1, 0.2};
  const std::vector<DataSeries> out = run_lambda_sweep(100, 0.01, {0.5}, grid);
  ASSERT_EQ(out.size(), 3u);
  const DataSeries& sub = series_by_label(out, "subsample_pi_0.5");
  const DataSeries& gau = series_by_label(out, "gaussian_pi_0.5");
  const DataSeries& lap = series_by_label(out, "laplace_pi_0.5");
  ASSERT_EQ(sub.x, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PropertyQuerySpec q = make_query(100, 0.5);
    const std::int64_t m = subsample_m_from_lambda(q, grid[i]);
    EXPECT_EQ(sub.y[i], delta_subsample_analytic_m(q, m, 0.01).delta());
    EXPECT_GT(gau.y[i], 0.0);
    EXPECT_GT(lap.y[i], 0.0);
  }
  EXPECT_THROW(run_lambda_sweep(100, 0.01, {0.5}, {0.1, 1.0}),
               std::invalid_argument);  // lambda = 1 has no matched noise
}

TEST(AmplificationRunner, TwoSeriesCoincidingAtFullRate) {
  const std::vector<double> grid = {0.1, 0.5, 1.0};
  const std::vector<DataSeries> out =
      run_amplification_check(100, 0.5, 0.1, grid);
  ASSERT_EQ(out.size(), 2u);
  const DataSeries& amplified =
      series_by_label(out, "subsample_at_amplified_eps");
  const DataSeries& scaled = series_by_label(out, "pure_scaled_by_lambda");
  ASSERT_EQ(amplified.x, grid);
  ASSERT_EQ(scaled.x, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_GT(amplified.y[i], 0.0);
    EXPECT_GT(scaled.y[i], 0.0);
  }
  // at lambda = 1 both reduce to the pure curve of the full database
  EXPECT_NEAR(amplified.y[2], scaled.y[2], 1e-10 * scaled.y[2]);
  // series B is lambda times the pure delta of an m = lambda n database
  const double b0 =
      grid[0] * delta_pure_analytic(make_query(10, 0.5), 0.1).delta();
  EXPECT_EQ(scaled.y[0], b0);
}

TEST(SmallNRunner, PrefixesBothKinds) {
  const std::vector<DataSeries> out = run_small_n(50, 0.01, {0.5}, 1.0, 2.0, 2);
  ASSERT_EQ(out.size(), 6u);
  EXPECT_NO_FATAL_FAILURE(series_by_label(out, "gaussian_sp_pi_0.5"));
  EXPECT_NO_FATAL_FAILURE(series_by_label(out, "laplace_sp_pi_0.5"));
  EXPECT_NO_FATAL_FAILURE(series_by_label(out, "gaussian_ratio_pi_0.5"));
  EXPECT_NO_FATAL_FAILURE(series_by_label(out, "laplace_dp_pi_0.5"));
}

TEST(PresetTable, KnownIdsInOrderWithParameterEcho) {
  const std::vector<ExperimentPreset>& presets = experiment_presets();
  ASSERT_EQ(presets.size(), 8u);
  const std::vector<std::string> want_ids = {
      "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "small-n", "conjecture"};
  for (std::size_t i = 0; i < want_ids.size(); ++i) {
    EXPECT_EQ(presets[i].id, want_ids[i]);
    EXPECT_FALSE(presets[i].description.empty());
    EXPECT_FALSE(presets[i].parameters.empty());
  }
  EXPECT_EQ(presets[0].parameters.at("kind"), "gaussian");
  EXPECT_EQ(presets[0].parameters.at("n"), "1000");
  EXPECT_EQ(presets[0].parameters.at("nu_points"), "19");
  EXPECT_EQ(presets[2].parameters.at("kind"), "laplace");
  EXPECT_EQ(presets[4].parameters.at("lambda_grid"),
            "0.01,0.02,0.05,0.1,0.2,0.25,0.5,1");
  EXPECT_EQ(presets[5].parameters.at("pi_grid"), "0.01,0.05,0.1,0.2,0.3,0.4,0.5");
  EXPECT_EQ(presets[6].parameters.at("n"), "100");
  EXPECT_EQ(presets[7].parameters.at("eps_list"), "0.1,0.5");

  EXPECT_NE(find_preset("fig3"), nullptr);
  EXPECT_EQ(find_preset("fig3")->id, "fig3");
  EXPECT_EQ(find_preset("fig9"), nullptr);
  EXPECT_THROW(run_preset("fig9"), std::invalid_argument);
}

}  // namespace
}  // namespace statpriv
