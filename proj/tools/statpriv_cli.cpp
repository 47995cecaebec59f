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

// statpriv: statistical-privacy accounting for property queries.
//
// A property query reports the fraction of database entries satisfying a
// property that each entry holds independently with probability pi.  The
// tool tabulates (eps, delta) privacy curves for four mechanisms (pure
// noiseless release, subsampling, Laplace noise, Gaussian noise), compares
// them with worst-case differential-privacy baselines, calibrates noise to
// the utility loss of subsampling, and writes the named reference datasets
// (fig1..fig6, small-n, conjecture) as CSV files plus a JSON manifest.
//
// eps is always the natural-log privacy parameter (the e^eps convention).
// Files are written atomically (temp file, then rename).  The output
// directory defaults to $STATPRIV_OUTPUT_DIR, then the working directory.
//
// Exit codes: 0 success; 2 invalid usage or configuration; 3 numerical
// failure.  `verify` exits 1 when a discrepancy exceeds its tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "statpriv/analytic.hpp"
#include "statpriv/curve.hpp"
#include "statpriv/dist.hpp"
#include "statpriv/experiments.hpp"
#include "statpriv/query.hpp"
#include "statpriv/utility.hpp"
#include "statpriv/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path resolve_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return fs::path(flag_value);
  if (const char* env = std::getenv("STATPRIV_OUTPUT_DIR");
      env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::path(".");
}

fs::path place_in(const fs::path& dir, const std::string& name) {
  fs::path p(name);
  return p.is_absolute() ? p : dir / p;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed to write " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

const statpriv::DataSeries* find_series(
    const std::vector<statpriv::DataSeries>& all, const std::string& label) {
  for (const statpriv::DataSeries& s : all) {
    if (s.label == label) return &s;
  }
  throw std::runtime_error("internal: missing series " + label);
}

// y at abscissa x, NaN if the point was dropped as a quadrature gap.
double series_value_at(const statpriv::DataSeries& s, double x) {
  auto it = std::lower_bound(s.x.begin(), s.x.end(), x);
  if (it != s.x.end() && *it == x) return s.y[it - s.x.begin()];
  return kNaN;
}

double oracle_delta_mixture(const statpriv::MixturePair& pair, double eps) {
  return std::max(statpriv::delta_mixture(pair.plus, pair.minus, eps),
                  statpriv::delta_mixture(pair.minus, pair.plus, eps));
}

double oracle_delta_discrete(const statpriv::DiscretePair& pair, double eps) {
  return std::max(statpriv::delta_discrete(pair.plus, pair.minus, eps),
                  statpriv::delta_discrete(pair.minus, pair.plus, eps));
}

// ---------------------------------------------------------------------------
// curve

struct CurveArgs {
  std::string mech;
  std::int64_t n = 0;
  double pi = 0.0;
  double lambda = 0.0;
  std::int64_t m = 0;
  double psi = 0.0;
  double sigma = 0.0;
  bool has_lambda = false;
  bool has_m = false;
  bool has_psi = false;
  bool has_sigma = false;
  std::vector<double> eps;
  std::string output;
  std::string output_dir;
};

std::vector<double> resolve_eps_grid(const std::vector<double>& flag_eps) {
  std::vector<double> grid =
      flag_eps.empty() ? statpriv::default_eps_grid() : flag_eps;
  for (double e : grid) {
    if (!std::isfinite(e) || e < 0.0) {
      throw std::invalid_argument("eps values must be finite and nonnegative");
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

void reject_noise_flags(const CurveArgs& a) {
  if (a.has_psi)
    throw std::invalid_argument("--psi only applies to --mech laplace");
  if (a.has_sigma)
    throw std::invalid_argument("--sigma only applies to --mech gaussian");
}

void reject_subsample_flags(const CurveArgs& a) {
  if (a.has_lambda || a.has_m)
    throw std::invalid_argument("--lambda/--m only apply to --mech subsample");
}

std::int64_t resolve_subsample_m(const statpriv::PropertyQuerySpec& q,
                                 const CurveArgs& a) {
  if (a.has_lambda == a.has_m) {
    throw std::invalid_argument(
        "subsample needs exactly one of --lambda or --m");
  }
  if (a.has_lambda) return statpriv::subsample_m_from_lambda(q, a.lambda);
  if (a.m < 1 || a.m > q.n)
    throw std::invalid_argument("--m must lie in [1, n]");
  return a.m;
}

int run_curve(const CurveArgs& a) {
  const statpriv::PropertyQuerySpec q = statpriv::make_query(a.n, a.pi);
  const std::vector<double> grid = resolve_eps_grid(a.eps);

  std::string csv = "epsilon,delta_analytic,delta_oracle,abs_discrepancy\n";
  auto row = [&csv](double e, double analytic, double oracle) {
    csv += real17(e);
    csv += ',';
    csv += real17(analytic);
    csv += ',';
    csv += real17(oracle);
    csv += ',';
    csv += real17(std::fabs(analytic - oracle));
    csv += '\n';
  };

  if (a.mech == "pure" || a.mech == "subsample") {
    reject_noise_flags(a);
    std::int64_t m = q.n;
    if (a.mech == "pure") {
      reject_subsample_flags(a);
    } else {
      m = resolve_subsample_m(q, a);
    }
    const statpriv::DiscretePair pair = statpriv::subsample_pair_m(q, m);
    int beyond = 0;
    for (double e : grid) {
      if (statpriv::outside_pure_regime(e)) ++beyond;
      row(e, statpriv::delta_subsample_analytic_m(q, m, e).delta(),
          oracle_delta_discrete(pair, e));
    }
    if (beyond > 0) {
      std::cerr << "note: " << beyond
                << " eps value(s) exceed ln 2, the stated range of the "
                   "noiseless closed form; rows there evaluate the same "
                   "expression beyond it\n";
    }
  } else if (a.mech == "laplace") {
    reject_subsample_flags(a);
    if (a.has_sigma)
      throw std::invalid_argument("--sigma only applies to --mech gaussian");
    if (!a.has_psi) throw std::invalid_argument("--mech laplace needs --psi");
    const statpriv::ContinuousKernel kern = statpriv::make_laplace(a.psi);
    const statpriv::MixturePair pair = statpriv::noisy_pair(q, kern);
    const double bound = statpriv::laplace_stat_epsilon(q, a.psi);
    for (double e : grid) {
      // Closed form only at or beyond the zero-delta bound 1/(psi n);
      // below it the oracle column is the only exact value.
      const double analytic = e >= bound ? 0.0 : kNaN;
      row(e, analytic, oracle_delta_mixture(pair, e));
    }
  } else {  // gaussian
    reject_subsample_flags(a);
    if (a.has_psi)
      throw std::invalid_argument("--psi only applies to --mech laplace");
    if (!a.has_sigma)
      throw std::invalid_argument("--mech gaussian needs --sigma");
    const statpriv::ContinuousKernel kern = statpriv::make_gaussian(a.sigma);
    const statpriv::MixturePair pair = statpriv::noisy_pair(q, kern);
    for (double e : grid) {
      // Analytic column is the moment-matched normal approximation; the
      // discrepancy column therefore measures approximation error.
      row(e, statpriv::delta_gaussian_approx(q, a.sigma, e).delta(),
          oracle_delta_mixture(pair, e));
    }
  }

  const fs::path out = place_in(resolve_output_dir(a.output_dir),
                                a.output.empty() ? "curve.csv" : a.output);
  write_file_atomic(out, csv);
  std::cout << "wrote " << out.string() << " (" << grid.size() << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string kind;
  std::int64_t n = 1000;
  double eps = 0.01;
  std::vector<double> pi;
  double nu_min = 1.0;
  double nu_max = 10.0;
  int nu_points = 19;
  std::string output;
  std::string output_dir;
};

int run_compare(const CompareArgs& a) {
  const statpriv::KernelKind kind = a.kind == "gaussian"
                                        ? statpriv::KernelKind::kGaussian
                                        : statpriv::KernelKind::kLaplace;
  const std::vector<double> pi_list =
      a.pi.empty() ? std::vector<double>{0.5, 0.1, 0.01} : a.pi;
  const std::vector<statpriv::DataSeries> all = statpriv::run_dp_vs_sp_noise(
      kind, a.n, a.eps, pi_list, a.nu_min, a.nu_max, a.nu_points);

  std::string csv = "pi,nu,delta_sp,delta_dp,ratio\n";
  std::size_t rows = 0;
  for (double pi : pi_list) {
    const std::string suffix = "_pi_" + real17(pi);
    const statpriv::DataSeries& dp = *find_series(all, "dp" + suffix);
    const statpriv::DataSeries& sp = *find_series(all, "sp" + suffix);
    const statpriv::DataSeries& ratio = *find_series(all, "ratio" + suffix);
    for (std::size_t i = 0; i < dp.x.size(); ++i) {
      csv += real17(pi);
      csv += ',';
      csv += real17(dp.x[i]);
      csv += ',';
      csv += real17(series_value_at(sp, dp.x[i]));
      csv += ',';
      csv += real17(dp.y[i]);
      csv += ',';
      csv += real17(series_value_at(ratio, dp.x[i]));
      csv += '\n';
      ++rows;
    }
  }

  const fs::path out = place_in(resolve_output_dir(a.output_dir),
                                a.output.empty() ? "compare.csv" : a.output);
  write_file_atomic(out, csv);
  std::cout << "wrote " << out.string() << " (" << rows << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string over;
  std::int64_t n = 1000;
  double eps = 0.01;
  double lambda = 0.1;
  std::vector<double> pi_grid;
  std::vector<double> pi;
  std::vector<double> lambda_grid;
  std::string output;
  std::string output_dir;
};

int run_sweep(const SweepArgs& a) {
  std::string csv;
  std::size_t rows = 0;
  if (a.over == "pi") {
    const std::vector<double> grid =
        a.pi_grid.empty()
            ? std::vector<double>{0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}
            : a.pi_grid;
    const std::vector<statpriv::DataSeries> all =
        statpriv::run_equal_utility_comparison(a.n, a.eps, a.lambda, grid);
    const statpriv::DataSeries& sub = *find_series(all, "subsample");
    const statpriv::DataSeries& gau = *find_series(all, "gaussian_matched");
    const statpriv::DataSeries& lap = *find_series(all, "laplace_matched");
    csv = "pi,delta_subsample,delta_gaussian_matched,delta_laplace_matched\n";
    for (std::size_t i = 0; i < sub.x.size(); ++i) {
      csv += real17(sub.x[i]);
      csv += ',';
      csv += real17(sub.y[i]);
      csv += ',';
      csv += real17(series_value_at(gau, sub.x[i]));
      csv += ',';
      csv += real17(series_value_at(lap, sub.x[i]));
      csv += '\n';
      ++rows;
    }
  } else {  // over == "lambda"
    const std::vector<double> pi_list =
        a.pi.empty() ? std::vector<double>{0.5, 0.1} : a.pi;
    const std::vector<double> grid =
        a.lambda_grid.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.25, 0.5}
                              : a.lambda_grid;
    const std::vector<statpriv::DataSeries> all =
        statpriv::run_lambda_sweep(a.n, a.eps, pi_list, grid);
    csv = "pi,lambda,delta_subsample,delta_gaussian,delta_laplace\n";
    for (double pi : pi_list) {
      const std::string suffix = "_pi_" + real17(pi);
      const statpriv::DataSeries& sub = *find_series(all, "subsample" + suffix);
      const statpriv::DataSeries& gau = *find_series(all, "gaussian" + suffix);
      const statpriv::DataSeries& lap = *find_series(all, "laplace" + suffix);
      for (std::size_t i = 0; i < sub.x.size(); ++i) {
        csv += real17(pi);
        csv += ',';
        csv += real17(sub.x[i]);
        csv += ',';
        csv += real17(sub.y[i]);
        csv += ',';
        csv += real17(series_value_at(gau, sub.x[i]));
        csv += ',';
        csv += real17(series_value_at(lap, sub.x[i]));
        csv += '\n';
        ++rows;
      }
    }
  }

  const fs::path out = place_in(resolve_output_dir(a.output_dir),
                                a.output.empty() ? "sweep.csv" : a.output);
  write_file_atomic(out, csv);
  std::cout << "wrote " << out.string() << " (" << rows << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// utility-match

struct MatchArgs {
  std::int64_t n = 0;
  double pi = 0.0;
  double lambda = 0.0;
  std::int64_t m = 0;
  bool has_lambda = false;
  bool has_m = false;
};

int run_utility_match(const MatchArgs& a) {
  const statpriv::PropertyQuerySpec q = statpriv::make_query(a.n, a.pi);
  if (a.has_lambda == a.has_m) {
    throw std::invalid_argument("give exactly one of --lambda or --m");
  }
  std::int64_t m;
  if (a.has_lambda) {
    m = statpriv::subsample_m_from_lambda(q, a.lambda);
  } else {
    if (a.m < 1 || a.m > q.n)
      throw std::invalid_argument("--m must lie in [1, n]");
    m = a.m;
  }
  const double lambda = static_cast<double>(m) / static_cast<double>(q.n);
  const statpriv::ContinuousKernel lap = statpriv::match_noise_to_subsample(
      q, lambda, statpriv::KernelKind::kLaplace);
  const statpriv::ContinuousKernel gau = statpriv::match_noise_to_subsample(
      q, lambda, statpriv::KernelKind::kGaussian);
  std::cout << "n = " << q.n << "\n"
            << "m = " << m << "\n"
            << "lambda = " << real17(lambda) << "\n"
            << "ul_subsample = " << real17(statpriv::ul_subsample_m(q, m))
            << "\n"
            << "psi_matched = " << real17(lap.scale) << "\n"
            << "sigma_matched = " << real17(gau.scale) << "\n"
            << "laplace_bound_eps = "
            << real17(statpriv::laplace_stat_epsilon(q, lap.scale)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// preset

struct PresetArgs {
  std::string id;
  std::string output_dir;
  std::string check_manifest;
};

struct ManifestSeries {
  std::string label;
  std::string file;
  std::int64_t points = 0;
  std::map<std::string, std::string> meta;
};

struct ManifestInfo {
  std::string preset;
  std::string description;
  std::string version;
  std::map<std::string, std::string> parameters;
  std::vector<ManifestSeries> series;
};

std::map<std::string, std::string> string_map_from(const ordered_json& j,
                                                   const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument("manifest: " + where + " must be an object");
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) {
      throw std::invalid_argument("manifest: " + where + "." + key +
                                  " must be a string");
    }
    out[key] = value.get<std::string>();
  }
  return out;
}

ManifestInfo parse_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  const ordered_json j = ordered_json::parse(in);
  if (!j.is_object()) throw std::invalid_argument("manifest: not an object");
  ManifestInfo info;
  for (const char* key : {"preset", "description", "version"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw std::invalid_argument(std::string("manifest: missing string key ") +
                                  key);
    }
  }
  info.preset = j["preset"].get<std::string>();
  info.description = j["description"].get<std::string>();
  info.version = j["version"].get<std::string>();
  if (!j.contains("parameters"))
    throw std::invalid_argument("manifest: missing parameters");
  info.parameters = string_map_from(j["parameters"], "parameters");
  if (!j.contains("series") || !j["series"].is_array())
    throw std::invalid_argument("manifest: series must be an array");
  for (const ordered_json& s : j["series"]) {
    if (!s.is_object() || !s.contains("label") || !s["label"].is_string() ||
        !s.contains("file") || !s["file"].is_string() ||
        !s.contains("points") || !s["points"].is_number_integer()) {
      throw std::invalid_argument(
          "manifest: each series needs label, file and integer points");
    }
    ManifestSeries ms;
    ms.label = s["label"].get<std::string>();
    ms.file = s["file"].get<std::string>();
    ms.points = s["points"].get<std::int64_t>();
    if (ms.points < 0)
      throw std::invalid_argument("manifest: points must be nonnegative");
    if (s.contains("meta")) ms.meta = string_map_from(s["meta"], "series.meta");
    info.series.push_back(std::move(ms));
  }
  return info;
}

int check_manifest_file(const std::string& path, const std::string& expect_id) {
  const ManifestInfo info = parse_manifest(fs::path(path));
  if (!expect_id.empty() && expect_id != info.preset) {
    throw std::invalid_argument("manifest names preset " + info.preset +
                                ", expected " + expect_id);
  }
  const statpriv::ExperimentPreset* p = statpriv::find_preset(info.preset);
  if (p == nullptr) {
    throw std::invalid_argument("manifest names unknown preset " + info.preset);
  }
  if (info.parameters != p->parameters) {
    throw std::invalid_argument(
        "manifest parameters do not round-trip for preset " + info.preset);
  }
  if (info.description != p->description) {
    throw std::invalid_argument(
        "manifest description does not round-trip for preset " + info.preset);
  }
  std::cout << "manifest ok: " << info.preset << " (" << info.series.size()
            << " series, version " << info.version << ")\n";
  return 0;
}

int run_preset(const PresetArgs& a) {
  if (!a.check_manifest.empty()) return check_manifest_file(a.check_manifest, a.id);
  if (a.id.empty()) {
    std::cerr << "preset id required; known presets:";
    for (const statpriv::ExperimentPreset& p : statpriv::experiment_presets())
      std::cerr << ' ' << p.id;
    std::cerr << "\n";
    return 2;
  }
  const statpriv::ExperimentPreset* p = statpriv::find_preset(a.id);
  if (p == nullptr) {
    std::cerr << "unknown preset id: " << a.id << "; known presets:";
    for (const statpriv::ExperimentPreset& q : statpriv::experiment_presets())
      std::cerr << ' ' << q.id;
    std::cerr << "\n";
    return 2;
  }

  const std::vector<statpriv::DataSeries> all = statpriv::run_preset(a.id);
  const fs::path dir = resolve_output_dir(a.output_dir) / a.id;

  ordered_json manifest;
  manifest["preset"] = p->id;
  manifest["description"] = p->description;
  manifest["version"] = statpriv::kVersion;
  manifest["parameters"] = p->parameters;
  manifest["series"] = ordered_json::array();
  for (const statpriv::DataSeries& s : all) {
    std::string csv = "x,y\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      csv += real17(s.x[i]);
      csv += ',';
      csv += real17(s.y[i]);
      csv += '\n';
    }
    const std::string file = s.label + ".csv";
    write_file_atomic(dir / file, csv);
    std::cout << "wrote " << (dir / file).string() << "\n";
    ordered_json entry;
    entry["label"] = s.label;
    entry["file"] = file;
    entry["points"] = s.x.size();
    entry["meta"] = s.meta;
    manifest["series"].push_back(std::move(entry));
  }
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << (dir / "manifest.json").string() << " ("
            << all.size() << " series)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  double tol_discrete = 1e-8;
  double tol_mixture = 1e-6;
  bool quick = false;
};

struct CheckRecorder {
  struct Entry {
    std::string desc;
    double discrepancy = 0.0;
    double tol = 0.0;
  };
  double max_discrete = 0.0;
  double max_mixture = 0.0;
  std::size_t n_discrete = 0;
  std::size_t n_mixture = 0;
  std::optional<Entry> worst;

  void record(bool discrete, const std::string& desc, double discrepancy,
              double tol) {
    if (discrete) {
      max_discrete = std::max(max_discrete, discrepancy);
      ++n_discrete;
    } else {
      max_mixture = std::max(max_mixture, discrepancy);
      ++n_mixture;
    }
    if (discrepancy > tol) {
      if (!worst || discrepancy - tol > worst->discrepancy - worst->tol) {
        worst = Entry{desc, discrepancy, tol};
      }
    }
  }
};

statpriv::MixtureDist point_mass(const statpriv::ContinuousKernel& kern,
                                 statpriv::Rational shift) {
  return statpriv::make_mixture_dist(kern, {{shift, 0.0}});
}

int run_verify(const VerifyArgs& a) {
  if (!(a.tol_discrete > 0.0) || !(a.tol_mixture > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  CheckRecorder rec;

  const std::vector<std::int64_t> ns =
      a.quick ? std::vector<std::int64_t>{10, 50}
              : std::vector<std::int64_t>{10, 50, 200};
  const std::vector<double> epss =
      a.quick ? std::vector<double>{0.0, 0.1}
              : std::vector<double>{0.0, 0.01, 0.1, std::log(2.0)};
  for (std::int64_t n : ns) {
    for (double pi : {0.01, 0.1, 0.5}) {
      const statpriv::PropertyQuerySpec q = statpriv::make_query(n, pi);
      for (double lambda : {0.1, 0.5, 1.0}) {
        const std::int64_t m = statpriv::subsample_m_from_lambda(q, lambda);
        const statpriv::DiscretePair pair = statpriv::subsample_pair_m(q, m);
        for (double eps : epss) {
          char desc[96];
          std::snprintf(desc, sizeof desc,
                        "subsample n=%lld pi=%g lambda=%g eps=%g",
                        static_cast<long long>(n), pi, lambda, eps);
          const statpriv::DeltaPair an =
              statpriv::delta_subsample_analytic_m(q, m, eps);
          const double d = std::max(
              std::fabs(an.delta_plus -
                        statpriv::delta_discrete(pair.plus, pair.minus, eps)),
              std::fabs(an.delta_minus -
                        statpriv::delta_discrete(pair.minus, pair.plus, eps)));
          rec.record(true, desc, d, a.tol_discrete);
          if (m == n) {
            // lambda = 1 must reproduce the pure closed form bit for bit.
            const statpriv::DeltaPair pure =
                statpriv::delta_pure_analytic(q, eps);
            const double dp = std::max(
                std::fabs(pure.delta_plus - an.delta_plus),
                std::fabs(pure.delta_minus - an.delta_minus));
            std::snprintf(desc, sizeof desc,
                          "pure-equivalence n=%lld pi=%g eps=%g",
                          static_cast<long long>(n), pi, eps);
            rec.record(true, desc, dp, 0.0);
          }
        }
      }
    }
  }

  const double s = 1e-3;
  const statpriv::Rational zero = statpriv::make_rational(0, 1);
  const statpriv::Rational shift = statpriv::make_rational(1, 1000);
  for (double sigma : {1e-3, 3e-3}) {
    const statpriv::ContinuousKernel kern = statpriv::make_gaussian(sigma);
    const statpriv::MixtureDist p = point_mass(kern, shift);
    const statpriv::MixtureDist q0 = point_mass(kern, zero);
    for (double eps : {0.0, 0.01}) {
      char desc[96];
      std::snprintf(desc, sizeof desc, "dp-gaussian sigma=%g eps=%g", sigma,
                    eps);
      const double oracle =
          std::max(statpriv::delta_mixture(p, q0, eps),
                   statpriv::delta_mixture(q0, p, eps));
      const double d =
          std::fabs(statpriv::dp_gaussian_baseline(s, sigma, eps) - oracle);
      rec.record(false, desc, d, a.tol_mixture);
    }
  }
  for (double psi : {1e-3, 2e-3}) {
    const statpriv::ContinuousKernel kern = statpriv::make_laplace(psi);
    const statpriv::MixtureDist p = point_mass(kern, shift);
    const statpriv::MixtureDist q0 = point_mass(kern, zero);
    for (double eps : {0.0, 5e-4}) {
      char desc[96];
      std::snprintf(desc, sizeof desc, "dp-laplace psi=%g eps=%g", psi, eps);
      const double oracle =
          std::max(statpriv::delta_mixture(p, q0, eps),
                   statpriv::delta_mixture(q0, p, eps));
      const double d =
          std::fabs(statpriv::dp_laplace_baseline(s, psi, eps) - oracle);
      rec.record(false, desc, d, a.tol_mixture);
    }
  }
  {
    // Laplace statistical privacy: delta vanishes at eps = 1/(psi n) and is
    // still positive a little below it.
    const statpriv::PropertyQuerySpec q = statpriv::make_query(1000, 0.5);
    const double psi = 3e-3;
    const statpriv::MixturePair pair =
        statpriv::noisy_pair(q, statpriv::make_laplace(psi));
    const double bound = statpriv::laplace_stat_epsilon(q, psi);
    rec.record(false, "laplace-bound n=1000 pi=0.5 psi=0.003",
               oracle_delta_mixture(pair, bound), a.tol_mixture);
    const double below = oracle_delta_mixture(pair, bound - 1e-3);
    rec.record(false, "laplace-tightness n=1000 pi=0.5 psi=0.003",
               below > 0.0 ? 0.0 : 1.0, 0.5);
  }

  std::cout << "discrete battery: " << rec.n_discrete
            << " checks, max discrepancy " << real17(rec.max_discrete)
            << " (tolerance " << real17(a.tol_discrete) << ")\n";
  std::cout << "mixture battery: " << rec.n_mixture
            << " checks, max discrepancy " << real17(rec.max_mixture)
            << " (tolerance " << real17(a.tol_mixture) << ")\n";
  if (rec.worst) {
    std::cout << "verify: FAIL worst: " << rec.worst->desc << ": discrepancy "
              << real17(rec.worst->discrepancy) << " exceeds tolerance "
              << real17(rec.worst->tol) << "\n";
    return 1;
  }
  std::cout << "verify: PASS\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "statistical-privacy accounting for property queries: privacy curves, "
      "differential-privacy baselines, utility matching and reference "
      "datasets"};
  app.require_subcommand(1);

  CurveArgs ca;
  CLI::App* curve = app.add_subcommand(
      "curve", "tabulate delta(eps) for one mechanism, analytic and oracle");
  curve->add_option("--mech", ca.mech, "pure, subsample, laplace or gaussian")
      ->required()
      ->check(CLI::IsMember({"pure", "subsample", "laplace", "gaussian"}));
  curve->add_option("--n", ca.n, "database size (>= 2)")->required();
  curve->add_option("--pi", ca.pi, "property probability in (0, 1)")
      ->required();
  CLI::Option* ca_lambda =
      curve->add_option("--lambda", ca.lambda, "subsampling rate m/n");
  CLI::Option* ca_m = curve->add_option("--m", ca.m, "subsample size");
  CLI::Option* ca_psi =
      curve->add_option("--psi", ca.psi, "Laplace scaling factor");
  CLI::Option* ca_sigma =
      curve->add_option("--sigma", ca.sigma, "Gaussian standard deviation");
  curve->add_option("--eps", ca.eps,
                    "eps grid (repeatable); default: 0 plus 200 log-spaced "
                    "points in [1e-4, 5]");
  curve->add_option("--output", ca.output, "output file (default curve.csv)");
  curve->add_option("--output-dir", ca.output_dir,
                    "output directory (default $STATPRIV_OUTPUT_DIR, then .)");

  CompareArgs pa;
  CLI::App* compare = app.add_subcommand(
      "compare",
      "differential vs statistical privacy over the noise grid nu in [1, 10] "
      "(noise scale nu/n)");
  compare->add_option("--kind", pa.kind, "laplace or gaussian")
      ->required()
      ->check(CLI::IsMember({"laplace", "gaussian"}));
  compare->add_option("--n", pa.n, "database size (default 1000)");
  compare->add_option("--eps", pa.eps, "eps (default 0.01)");
  compare->add_option("--pi", pa.pi,
                      "pi values (repeatable; default 0.5 0.1 0.01)");
  compare->add_option("--nu-min", pa.nu_min, "smallest nu (default 1)");
  compare->add_option("--nu-max", pa.nu_max, "largest nu (default 10)");
  compare->add_option("--nu-points", pa.nu_points, "grid size (default 19)");
  compare->add_option("--output", pa.output,
                      "output file (default compare.csv)");
  compare->add_option("--output-dir", pa.output_dir,
                      "output directory (default $STATPRIV_OUTPUT_DIR, then .)");

  SweepArgs sa;
  CLI::App* sweep = app.add_subcommand(
      "sweep",
      "equal-utility comparison of subsampling with matched Laplace and "
      "Gaussian noise");
  sweep->add_option("--over", sa.over, "sweep variable: pi or lambda")
      ->required()
      ->check(CLI::IsMember({"pi", "lambda"}));
  sweep->add_option("--n", sa.n, "database size (default 1000)");
  sweep->add_option("--eps", sa.eps, "eps (default 0.01)");
  sweep->add_option("--lambda", sa.lambda,
                    "rate for --over pi (default 0.1)");
  sweep->add_option("--pi-grid", sa.pi_grid,
                    "pi grid for --over pi (repeatable)");
  sweep->add_option("--pi", sa.pi,
                    "pi values for --over lambda (repeatable; default 0.5 0.1)");
  sweep->add_option("--lambda-grid", sa.lambda_grid,
                    "lambda grid for --over lambda (repeatable)");
  sweep->add_option("--output", sa.output, "output file (default sweep.csv)");
  sweep->add_option("--output-dir", sa.output_dir,
                    "output directory (default $STATPRIV_OUTPUT_DIR, then .)");

  MatchArgs ma;
  CLI::App* match = app.add_subcommand(
      "utility-match",
      "utility loss of subsampling and the noise scales matching it");
  match->add_option("--n", ma.n, "database size (>= 2)")->required();
  match->add_option("--pi", ma.pi, "property probability in (0, 1)")
      ->required();
  CLI::Option* ma_lambda =
      match->add_option("--lambda", ma.lambda, "subsampling rate m/n");
  CLI::Option* ma_m = match->add_option("--m", ma.m, "subsample size");

  PresetArgs ra;
  CLI::App* preset = app.add_subcommand(
      "preset",
      "write a named reference dataset (CSV per series plus manifest.json)");
  preset->add_option("id", ra.id,
                     "preset id: fig1, fig2, fig3, fig4, fig5, fig6, small-n "
                     "or conjecture");
  preset->add_option("--output-dir", ra.output_dir,
                     "output directory (default $STATPRIV_OUTPUT_DIR, then .)");
  preset->add_option("--check-manifest", ra.check_manifest,
                     "validate a manifest.json and its round-trip instead of "
                     "running");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify", "self-check the closed forms against the oracle battery");
  verify->add_option("--tol-discrete", va.tol_discrete,
                     "tolerance for atom-list checks (default 1e-8)");
  verify->add_option("--tol-mixture", va.tol_mixture,
                     "tolerance for quadrature checks (default 1e-6)");
  verify->add_flag("--quick", va.quick, "subset the grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  ca.has_lambda = ca_lambda->count() > 0;
  ca.has_m = ca_m->count() > 0;
  ca.has_psi = ca_psi->count() > 0;
  ca.has_sigma = ca_sigma->count() > 0;
  ma.has_lambda = ma_lambda->count() > 0;
  ma.has_m = ma_m->count() > 0;

  try {
    if (curve->parsed()) return run_curve(ca);
    if (compare->parsed()) return run_compare(pa);
    if (sweep->parsed()) return run_sweep(sa);
    if (match->parsed()) return run_utility_match(ma);
    if (preset->parsed()) return run_preset(ra);
    if (verify->parsed()) return run_verify(va);
    std::cerr << "no command given\n";
    return 2;
  } catch (const statpriv::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid manifest: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
