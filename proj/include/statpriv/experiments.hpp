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

// Parameterized experiment runners and the named presets that reproduce the
// library's reference datasets: differential-versus-statistical privacy
// sweeps over the noise magnitude, equal-utility mechanism comparisons,
// subsampling-rate sweeps, and the subsampling-versus-amplification check.
// Runners emit plain DataSeries; serialization lives in the CLI layer.
// Everything here is deterministic: the same preset and grid produce
// bit-identical output.

#ifndef STATPRIV_EXPERIMENTS_HPP_
#define STATPRIV_EXPERIMENTS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "statpriv/dist.hpp"

namespace statpriv {

struct DataSeries {
  std::string label;
  std::vector<double> x;  // strictly increasing
  std::vector<double> y;  // same length as x
  std::map<std::string, std::string> meta;  // parameter echo
};

// Per pi: three series over the noise-magnitude grid nu (noise scale nu/n),
// labelled sp_*, dp_* and ratio_*: the statistical-privacy delta from
// quadrature on the noisy pair, the worst-case differential-privacy delta of
// the same mechanism, and their ratio dp/sp.
std::vector<DataSeries> run_dp_vs_sp_noise(KernelKind kind, std::int64_t n,
                                           double eps,
                                           const std::vector<double>& pi_list,
                                           double nu_min, double nu_max,
                                           int nu_points);

// Over a pi grid at fixed rate lambda: subsampling delta (closed form) next
// to the deltas of Gaussian and Laplace noise calibrated to the identical
// utility loss, all at the same eps.
std::vector<DataSeries> run_equal_utility_comparison(
    std::int64_t n, double eps, double lambda,
    const std::vector<double>& pi_grid);

// The same three-mechanism comparison swept over the subsampling rate at
// fixed pi (one series triple per pi).
std::vector<DataSeries> run_lambda_sweep(std::int64_t n, double eps,
                                         const std::vector<double>& pi_list,
                                         const std::vector<double>& lambda_grid);

// Series A: subsampling delta at the amplified eps' = ln(1 + lambda(e^eps - 1));
// series B: lambda times the pure delta of a database of size m = lambda n at
// the original eps.  At lambda = 1 the two coincide.
std::vector<DataSeries> run_amplification_check(
    std::int64_t n, double pi, double eps,
    const std::vector<double>& lambda_grid);

// run_dp_vs_sp_noise for a small database (default n = 100), both noise
// kinds; nu stays defined relative to the sensitivity 1/n.
std::vector<DataSeries> run_small_n(std::int64_t n = 100, double eps = 0.01,
                                    const std::vector<double>& pi_list = {0.01, 0.1, 0.5},
                                    double nu_min = 1.0, double nu_max = 10.0,
                                    int nu_points = 19);

struct ExperimentPreset {
  std::string id;
  std::string description;
  std::map<std::string, std::string> parameters;  // echoed into manifests
};

// The known presets: fig1..fig6, small-n, conjecture.
const std::vector<ExperimentPreset>& experiment_presets();

// Looks up a preset; returns nullptr for unknown ids.
const ExperimentPreset* find_preset(const std::string& id);

// Runs a preset by id; throws std::invalid_argument for unknown ids and
// propagates QuadratureError from the oracle layer.
std::vector<DataSeries> run_preset(const std::string& id);

}  // namespace statpriv

#endif  // STATPRIV_EXPERIMENTS_HPP_
