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

#include "statpriv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "statpriv/analytic.hpp"
#include "statpriv/curve.hpp"
#include "statpriv/query.hpp"
#include "statpriv/utility.hpp"

namespace statpriv {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += fmt(values[i]);
  }
  return out;
}

// Deterministic index-parallel map: results land in their slot regardless of
// completion order, so output never depends on scheduling.
void parallel_for_index(std::size_t count,
                        const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw < 2 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(hw, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct PointResult {
  bool ok = false;
  double y = 0.0;
};

// Collects (x, y) pairs, silently dropping failed points (quadrature gaps).
DataSeries make_series(std::string label, const std::vector<double>& x,
                       const std::vector<PointResult>& y,
                       std::map<std::string, std::string> meta) {
  DataSeries s;
  s.label = std::move(label);
  s.meta = std::move(meta);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i].ok) {
      s.x.push_back(x[i]);
      s.y.push_back(y[i].y);
    }
  }
  return s;
}

double oracle_delta(const MixturePair& pair, double eps) {
  return std::max(delta_mixture(pair.plus, pair.minus, eps),
                  delta_mixture(pair.minus, pair.plus, eps));
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(points - 1));
  }
  return out;
}

void check_ascending(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) {
    throw std::invalid_argument(std::string(what) + " grid must be nonempty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) +
                                  " grid must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<DataSeries> run_dp_vs_sp_noise(KernelKind kind, std::int64_t n,
                                           double eps,
                                           const std::vector<double>& pi_list,
                                           double nu_min, double nu_max,
                                           int nu_points) {
  if (!(nu_min >= 1.0 && nu_max <= 10.0 && nu_min <= nu_max)) {
    throw std::invalid_argument("nu range must lie within [1, 10]");
  }
  if (pi_list.empty()) throw std::invalid_argument("pi list must be nonempty");
  const std::vector<double> nu = linspace(nu_min, nu_max, nu_points);
  const double s = 1.0 / static_cast<double>(n);
  const char* kind_name = kind == KernelKind::kGaussian ? "gaussian" : "laplace";

  std::vector<DataSeries> out;
  for (double pi : pi_list) {
    const PropertyQuerySpec q = make_query(n, pi);
    std::vector<PointResult> sp(nu.size()), dp(nu.size()), ratio(nu.size());
    parallel_for_index(nu.size(), [&](std::size_t i) {
      const double scale = nu[i] * s;
      const ContinuousKernel kern = kind == KernelKind::kGaussian
                                        ? make_gaussian(scale)
                                        : make_laplace(scale);
      const double dp_delta = kind == KernelKind::kGaussian
                                  ? dp_gaussian_baseline(s, scale, eps)
                                  : dp_laplace_baseline(s, scale, eps);
      dp[i] = PointResult{true, dp_delta};
      try {
        const double sp_delta = oracle_delta(noisy_pair(q, kern), eps);
        sp[i] = PointResult{true, sp_delta};
        if (sp_delta > 0.0) {
          ratio[i] = PointResult{true, dp_delta / sp_delta};
        }
      } catch (const QuadratureError&) {
        // left as a gap
      }
    });
    const std::map<std::string, std::string> meta = {
        {"kind", kind_name},  {"n", fmt(static_cast<double>(n))},
        {"eps", fmt(eps)},    {"pi", fmt(pi)},
        {"nu_min", fmt(nu_min)}, {"nu_max", fmt(nu_max)},
        {"nu_points", fmt(nu_points)}};
    const std::string suffix = std::string("_pi_") + fmt(pi);
    out.push_back(make_series("sp" + suffix, nu, sp, meta));
    out.push_back(make_series("dp" + suffix, nu, dp, meta));
    out.push_back(make_series("ratio" + suffix, nu, ratio, meta));
  }
  return out;
}

std::vector<DataSeries> run_equal_utility_comparison(
    std::int64_t n, double eps, double lambda,
    const std::vector<double>& pi_grid) {
  check_ascending(pi_grid, "pi");
  const PropertyQuerySpec probe = make_query(n, pi_grid.front());
  const std::int64_t m = subsample_m_from_lambda(probe, lambda);
  if (m == n) {
    throw std::invalid_argument(
        "equal-utility comparison requires lambda < 1 (zero loss at 1)");
  }
  std::vector<PointResult> sub(pi_grid.size()), gau(pi_grid.size()),
      lap(pi_grid.size());
  parallel_for_index(pi_grid.size(), [&](std::size_t i) {
    const PropertyQuerySpec q = make_query(n, pi_grid[i]);
    sub[i] = PointResult{true, delta_subsample_analytic_m(q, m, eps).delta()};
    try {
      gau[i] = PointResult{
          true, oracle_delta(
                    noisy_pair(q, match_noise_to_subsample(
                                      q, lambda, KernelKind::kGaussian)),
                    eps)};
      lap[i] = PointResult{
          true, oracle_delta(
                    noisy_pair(q, match_noise_to_subsample(
                                      q, lambda, KernelKind::kLaplace)),
                    eps)};
    } catch (const QuadratureError&) {
      // left as a gap
    }
  });
  const std::map<std::string, std::string> meta = {
      {"n", fmt(static_cast<double>(n))},
      {"eps", fmt(eps)},
      {"lambda", fmt(lambda)},
      {"m", fmt(static_cast<double>(m))},
      {"pi_grid", join(pi_grid)}};
  return {make_series("subsample", pi_grid, sub, meta),
          make_series("gaussian_matched", pi_grid, gau, meta),
          make_series("laplace_matched", pi_grid, lap, meta)};
}

std::vector<DataSeries> run_lambda_sweep(std::int64_t n, double eps,
                                         const std::vector<double>& pi_list,
                                         const std::vector<double>& lambda_grid) {
  check_ascending(lambda_grid, "lambda");
  if (pi_list.empty()) throw std::invalid_argument("pi list must be nonempty");
  std::vector<DataSeries> out;
  for (double pi : pi_list) {
    const PropertyQuerySpec q = make_query(n, pi);
    std::vector<PointResult> sub(lambda_grid.size()), gau(lambda_grid.size()),
        lap(lambda_grid.size());
    parallel_for_index(lambda_grid.size(), [&](std::size_t i) {
      const std::int64_t m = subsample_m_from_lambda(q, lambda_grid[i]);
      if (m == n) {
        throw std::invalid_argument(
            "lambda sweep requires every rate < 1 (zero loss at 1)");
      }
      sub[i] = PointResult{true, delta_subsample_analytic_m(q, m, eps).delta()};
      try {
        gau[i] = PointResult{
            true,
            oracle_delta(noisy_pair(q, match_noise_to_subsample(
                                           q, lambda_grid[i],
                                           KernelKind::kGaussian)),
                         eps)};
        lap[i] = PointResult{
            true,
            oracle_delta(noisy_pair(q, match_noise_to_subsample(
                                           q, lambda_grid[i],
                                           KernelKind::kLaplace)),
                         eps)};
      } catch (const QuadratureError&) {
        // left as a gap
      }
    });
    const std::map<std::string, std::string> meta = {
        {"n", fmt(static_cast<double>(n))},
        {"eps", fmt(eps)},
        {"pi", fmt(pi)},
        {"lambda_grid", join(lambda_grid)}};
    const std::string suffix = std::string("_pi_") + fmt(pi);
    out.push_back(make_series("subsample" + suffix, lambda_grid, sub, meta));
    out.push_back(make_series("gaussian" + suffix, lambda_grid, gau, meta));
    out.push_back(make_series("laplace" + suffix, lambda_grid, lap, meta));
  }
  return out;
}

std::vector<DataSeries> run_amplification_check(
    std::int64_t n, double pi, double eps,
    const std::vector<double>& lambda_grid) {
  check_ascending(lambda_grid, "lambda");
  const PropertyQuerySpec q = make_query(n, pi);
  std::vector<PointResult> amplified(lambda_grid.size()),
      scaled_pure(lambda_grid.size());
  parallel_for_index(lambda_grid.size(), [&](std::size_t i) {
    const double lambda = lambda_grid[i];
    const std::int64_t m = subsample_m_from_lambda(q, lambda);
    const double eps_prime = dp_subsample_amplify(eps, 0.0, lambda).eps;
    amplified[i] =
        PointResult{true, delta_subsample_analytic_m(q, m, eps_prime).delta()};
    const PropertyQuerySpec q_small = make_query(m, pi);
    scaled_pure[i] =
        PointResult{true, lambda * delta_pure_analytic(q_small, eps).delta()};
  });
  const std::map<std::string, std::string> meta = {
      {"n", fmt(static_cast<double>(n))},
      {"pi", fmt(pi)},
      {"eps", fmt(eps)},
      {"lambda_grid", join(lambda_grid)}};
  return {
      make_series("subsample_at_amplified_eps", lambda_grid, amplified, meta),
      make_series("pure_scaled_by_lambda", lambda_grid, scaled_pure, meta)};
}

std::vector<DataSeries> run_small_n(std::int64_t n, double eps,
                                    const std::vector<double>& pi_list,
                                    double nu_min, double nu_max,
                                    int nu_points) {
  std::vector<DataSeries> out;
  for (KernelKind kind : {KernelKind::kGaussian, KernelKind::kLaplace}) {
    const char* prefix = kind == KernelKind::kGaussian ? "gaussian_" : "laplace_";
    for (DataSeries& s :
         run_dp_vs_sp_noise(kind, n, eps, pi_list, nu_min, nu_max, nu_points)) {
      s.label = prefix + s.label;
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

const std::vector<double> kFigPiList = {0.5, 0.1, 0.01};
const std::vector<double> kAmplifyLambdaGrid = {0.01, 0.02, 0.05,
                                                0.1,  0.2,  0.25, 0.5, 1.0};
const std::vector<double> kEqualUtilityPiGrid = {0.01, 0.05, 0.1, 0.2,
                                                 0.3,  0.4,  0.5};
const std::vector<double> kSweepLambdaGrid = {0.05, 0.1, 0.2, 0.25, 0.5};

std::vector<DataSeries> filter_ratio(std::vector<DataSeries> all) {
  std::vector<DataSeries> out;
  for (DataSeries& s : all) {
    if (s.label.rfind("ratio", 0) == 0) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

const std::vector<ExperimentPreset>& experiment_presets() {
  static const std::vector<ExperimentPreset> kPresets = {
      {"fig1",
       "Gaussian noise at n=1000, eps=0.01: statistical-privacy delta, "
       "differential-privacy delta and their ratio over nu in [1, 10]",
       {{"kind", "gaussian"},
        {"n", "1000"},
        {"eps", "0.01"},
        {"pi_list", "0.5,0.1,0.01"},
        {"nu_min", "1"},
        {"nu_max", "10"},
        {"nu_points", "19"}}},
      {"fig2",
       "Ratio view of fig1: differential over statistical delta for Gaussian "
       "noise",
       {{"kind", "gaussian"},
        {"n", "1000"},
        {"eps", "0.01"},
        {"pi_list", "0.5,0.1,0.01"},
        {"nu_min", "1"},
        {"nu_max", "10"},
        {"nu_points", "19"}}},
      {"fig3",
       "Laplace noise at n=1000, eps=0.01: statistical-privacy delta, "
       "differential-privacy delta and their ratio over nu in [1, 10]",
       {{"kind", "laplace"},
        {"n", "1000"},
        {"eps", "0.01"},
        {"pi_list", "0.5,0.1,0.01"},
        {"nu_min", "1"},
        {"nu_max", "10"},
        {"nu_points", "19"}}},
      {"fig4",
       "Ratio view of fig3: differential over statistical delta for Laplace "
       "noise",
       {{"kind", "laplace"},
        {"n", "1000"},
        {"eps", "0.01"},
        {"pi_list", "0.5,0.1,0.01"},
        {"nu_min", "1"},
        {"nu_max", "10"},
        {"nu_points", "19"}}},
      {"fig5",
       "Subsampling at the amplified eps' = ln(1+lambda(e^eps-1)) next to "
       "lambda times the pure delta of an m-entry database, n=1000, pi=0.5, "
       "eps=0.1",
       {{"n", "1000"},
        {"pi", "0.5"},
        {"eps", "0.1"},
        {"lambda_grid", "0.01,0.02,0.05,0.1,0.2,0.25,0.5,1"}}},
      {"fig6",
       "Equal-utility comparison at n=1000, eps=0.01: subsampling against "
       "Gaussian and Laplace noise calibrated to the same utility loss, over "
       "pi at lambda=0.1 and over lambda at pi in {0.5, 0.1}",
       {{"n", "1000"},
        {"eps", "0.01"},
        {"lambda", "0.1"},
        {"pi_grid", "0.01,0.05,0.1,0.2,0.3,0.4,0.5"},
        {"sweep_pi_list", "0.5,0.1"},
        {"sweep_lambda_grid", "0.05,0.1,0.2,0.25,0.5"}}},
      {"small-n",
       "The fig1/fig3 sweeps for a small database, n=100 (noise scale nu/n "
       "keeps following the sensitivity)",
       {{"n", "100"},
        {"eps", "0.01"},
        {"pi_list", "0.01,0.1,0.5"},
        {"nu_min", "1"},
        {"nu_max", "10"},
        {"nu_points", "19"}}},
      {"conjecture",
       "Exploratory wider grid for the subsampling-versus-amplification "
       "comparison: pi in {0.5, 0.1}, eps in {0.1, 0.5}",
       {{"n", "1000"},
        {"pi_list", "0.5,0.1"},
        {"eps_list", "0.1,0.5"},
        {"lambda_grid", "0.01,0.02,0.05,0.1,0.2,0.25,0.5,1"}}},
  };
  return kPresets;
}

const ExperimentPreset* find_preset(const std::string& id) {
  for (const ExperimentPreset& p : experiment_presets()) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::vector<DataSeries> run_preset(const std::string& id) {
  if (id == "fig1") {
    return run_dp_vs_sp_noise(KernelKind::kGaussian, 1000, 0.01, kFigPiList, 1.0,
                              10.0, 19);
  }
  if (id == "fig2") {
    return filter_ratio(run_dp_vs_sp_noise(KernelKind::kGaussian, 1000, 0.01,
                                           kFigPiList, 1.0, 10.0, 19));
  }
  if (id == "fig3") {
    return run_dp_vs_sp_noise(KernelKind::kLaplace, 1000, 0.01, kFigPiList, 1.0,
                              10.0, 19);
  }
  if (id == "fig4") {
    return filter_ratio(run_dp_vs_sp_noise(KernelKind::kLaplace, 1000, 0.01,
                                           kFigPiList, 1.0, 10.0, 19));
  }
  if (id == "fig5") {
    return run_amplification_check(1000, 0.5, 0.1, kAmplifyLambdaGrid);
  }
  if (id == "fig6") {
    std::vector<DataSeries> out =
        run_equal_utility_comparison(1000, 0.01, 0.1, kEqualUtilityPiGrid);
    for (DataSeries& s :
         run_lambda_sweep(1000, 0.01, {0.5, 0.1}, kSweepLambdaGrid)) {
      s.label = "sweep_" + s.label;
      out.push_back(std::move(s));
    }
    return out;
  }
  if (id == "small-n") {
    return run_small_n(100, 0.01, {0.01, 0.1, 0.5}, 1.0, 10.0, 19);
  }
  if (id == "conjecture") {
    std::vector<DataSeries> out;
    for (double pi : {0.5, 0.1}) {
      for (double eps : {0.1, 0.5}) {
        for (DataSeries& s :
             run_amplification_check(1000, pi, eps, kAmplifyLambdaGrid)) {
          s.label = "pi_" + fmt(pi) + "_eps_" + fmt(eps) + "_" + s.label;
          out.push_back(std::move(s));
        }
      }
    }
    return out;
  }
  throw std::invalid_argument("unknown preset id: " + id);
}

}  // namespace statpriv
