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

#include "statpriv/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

namespace statpriv {
namespace {

constexpr double kNormalizationTol = 1e-10;

// Beyond kWindowSigmas (Gaussian) or kWindowScales (Laplace) a component's
// density is below 1e-26 of its peak; components farther than that from the
// evaluation point are skipped.  Tail panels extend one extra scale so the
// truncated mass is far below the 1e-9 quadrature target.
constexpr double kGaussWindow = 12.0;
constexpr double kGaussTail = 13.0;
constexpr double kLaplaceWindow = 60.0;
constexpr double kLaplaceTail = 61.0;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
// (nonnegative abscissae; the rule is symmetric).
constexpr int kGk = 8;
constexpr double kXgk[kGk] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[kGk] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

// Flattened mixture with linear-space weights, ready for windowed density
// evaluation.  Weights that underflow to zero are dropped; their true
// contribution is far below every tolerance in this module.
struct MixtureEval {
  ContinuousKernel kernel;
  std::vector<double> shifts;   // ascending
  std::vector<double> weights;  // linear space
  double window;

  explicit MixtureEval(const MixtureDist& d)
      : kernel(d.kernel),
        window(d.kernel.kind == KernelKind::kGaussian
                   ? kGaussWindow * d.kernel.scale
                   : kLaplaceWindow * d.kernel.scale) {
    shifts.reserve(d.components.size());
    weights.reserve(d.components.size());
    for (const MixtureComponent& c : d.components) {
      const double w = std::exp(c.log_weight);
      if (w > 0.0) {
        shifts.push_back(to_double(c.shift));
        weights.push_back(w);
      }
    }
  }

  double density(double x) const {
    const auto first = std::lower_bound(shifts.begin(), shifts.end(), x - window);
    std::size_t i = static_cast<std::size_t>(first - shifts.begin());
    double acc = 0.0;
    for (; i < shifts.size() && shifts[i] <= x + window; ++i) {
      acc += weights[i] * kernel_density(kernel, x - shifts[i]);
    }
    return acc;
  }
};

struct Panel {
  double err;
  double a;
  double b;
  double val;

  bool operator<(const Panel& other) const { return err < other.err; }
};

// One Gauss-Kronrod pass over [a, b]; the error estimate is the plain
// |Kronrod - Gauss| difference, a conservative bound for the smooth
// integrands handled here.
template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[kGk][2];
  for (int i = 0; i < kGk - 1; ++i) {
    fv[i][0] = f(c - h * kXgk[i]);
    fv[i][1] = f(c + h * kXgk[i]);
  }
  const double fc = f(c);
  double resk = kWgk[kGk - 1] * fc;
  for (int i = 0; i < kGk - 1; ++i) {
    resk += kWgk[i] * (fv[i][0] + fv[i][1]);
  }
  double resg = kWg[3] * fc;
  for (int i = 0; i < 3; ++i) {
    resg += kWg[i] * (fv[2 * i + 1][0] + fv[2 * i + 1][1]);
  }
  return Panel{std::fabs(resk - resg) * h, a, b, resk * h};
}

double clamp_probability(double v) { return std::min(1.0, std::max(0.0, v)); }

void check_same_kernel(const MixtureDist& p, const MixtureDist& q) {
  if (p.kernel.kind != q.kernel.kind || p.kernel.scale != q.kernel.scale) {
    throw std::invalid_argument(
        "delta_mixture: distributions must share kernel family and scale");
  }
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return Rational{num, den};
}

bool rational_less(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.num) / static_cast<double>(r.den);
}

DiscreteDist make_discrete_dist(std::vector<DiscreteAtom> atoms) {
  std::vector<DiscreteAtom> kept;
  kept.reserve(atoms.size());
  for (const DiscreteAtom& a : atoms) {
    if (a.log_mass != kNegInf) kept.push_back(a);
  }
  LogSumAccumulator total;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i > 0 && !rational_less(kept[i - 1].location, kept[i].location)) {
      throw std::invalid_argument(
          "DiscreteDist: locations must be strictly increasing");
    }
    total.add(kept[i].log_mass);
  }
  const double sum = std::exp(total.log_total());
  if (std::fabs(sum - 1.0) > kNormalizationTol) {
    throw std::invalid_argument("DiscreteDist: masses sum to " +
                                std::to_string(sum) + ", expected 1");
  }
  return DiscreteDist{std::move(kept)};
}

MixtureDist make_mixture_dist(ContinuousKernel kernel,
                              std::vector<MixtureComponent> components) {
  if (!(kernel.scale > 0.0)) {
    throw std::domain_error("MixtureDist: kernel scale must be positive");
  }
  std::vector<MixtureComponent> kept;
  kept.reserve(components.size());
  for (const MixtureComponent& c : components) {
    if (c.log_weight != kNegInf) kept.push_back(c);
  }
  LogSumAccumulator total;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i > 0 && !rational_less(kept[i - 1].shift, kept[i].shift)) {
      throw std::invalid_argument(
          "MixtureDist: shifts must be strictly increasing");
    }
    total.add(kept[i].log_weight);
  }
  const double sum = std::exp(total.log_total());
  if (std::fabs(sum - 1.0) > kNormalizationTol) {
    throw std::invalid_argument("MixtureDist: weights sum to " +
                                std::to_string(sum) + ", expected 1");
  }
  return MixtureDist{kernel, std::move(kept)};
}

std::vector<PLRVSample> plrv_samples(const DiscreteDist& numer,
                                     const DiscreteDist& denom) {
  std::vector<PLRVSample> out;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& pa = numer.atoms;
  const auto& qa = denom.atoms;
  while (i < pa.size() || j < qa.size()) {
    if (j >= qa.size() ||
        (i < pa.size() && rational_less(pa[i].location, qa[j].location))) {
      out.push_back(PLRVSample{pa[i].location, kPosInf});
      ++i;
    } else if (i >= pa.size() || rational_less(qa[j].location, pa[i].location)) {
      out.push_back(PLRVSample{qa[j].location, kNegInf});
      ++j;
    } else {
      out.push_back(PLRVSample{pa[i].location, pa[i].log_mass - qa[j].log_mass});
      ++i;
      ++j;
    }
  }
  return out;
}

double delta_discrete(const DiscreteDist& p, const DiscreteDist& q, double eps) {
  if (!(eps >= 0.0)) throw std::domain_error("delta_discrete: eps must be >= 0");
  LogSumAccumulator acc;
  const auto& pa = p.atoms;
  const auto& qa = q.atoms;
  std::size_t j = 0;
  for (const DiscreteAtom& atom : pa) {
    while (j < qa.size() && rational_less(qa[j].location, atom.location)) ++j;
    if (j < qa.size() && qa[j].location == atom.location) {
      const double lq_scaled = eps + qa[j].log_mass;
      if (atom.log_mass > lq_scaled) {
        acc.add(log_diff(atom.log_mass, lq_scaled));
      }
    } else {
      acc.add(atom.log_mass);  // absent in q: infinite privacy loss
    }
  }
  return clamp_probability(std::exp(acc.log_total()));
}

QuadratureResult delta_mixture_ex(const MixtureDist& p, const MixtureDist& q,
                                  double eps, const QuadratureOptions& opts) {
  if (!(eps >= 0.0)) throw std::domain_error("delta_mixture: eps must be >= 0");
  check_same_kernel(p, q);

  const MixtureEval pe(p);
  const MixtureEval qe(q);
  const double e_eps = std::exp(eps);
  const auto integrand = [&](double x) {
    return std::max(0.0, pe.density(x) - e_eps * qe.density(x));
  };

  // Initial breakpoints: the union of the component shifts (exact merge on
  // rationals, deduplicated as doubles) plus truncated tails.
  std::vector<double> breaks;
  {
    std::vector<Rational> merged;
    merged.reserve(p.components.size() + q.components.size());
    for (const auto& c : p.components) merged.push_back(c.shift);
    for (const auto& c : q.components) merged.push_back(c.shift);
    std::sort(merged.begin(), merged.end(), rational_less);
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged.empty()) {
      throw std::invalid_argument("delta_mixture: empty mixture");
    }
    const double tail = p.kernel.kind == KernelKind::kGaussian
                            ? kGaussTail * p.kernel.scale
                            : kLaplaceTail * p.kernel.scale;
    breaks.push_back(to_double(merged.front()) - tail);
    for (const Rational& r : merged) {
      const double x = to_double(r);
      if (x > breaks.back()) breaks.push_back(x);
    }
    breaks.push_back(breaks.back() + tail);
  }

  // The max(0, .) kink sits where p = e^eps q, generally strictly between
  // shifts; a kink hidden inside a panel makes the Kronrod error estimate
  // unreliable.  Sign changes of the difference are therefore located by a
  // per-panel scan plus bisection and promoted to panel boundaries, leaving
  // every panel smooth.  The scan step is far below the kernel scale (panels
  // between shifts are at most one shift spacing wide), so a sign change
  // cannot hide between probes.
  {
    const auto difference = [&](double x) {
      return pe.density(x) - e_eps * qe.density(x);
    };
    constexpr int kScan = 16;
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i];
      const double b = breaks[i + 1];
      const double h = (b - a) / kScan;
      if (!(h > 0.0)) continue;
      double x0 = a;
      double f0 = difference(x0);
      for (int k = 1; k <= kScan; ++k) {
        const double x1 = k == kScan ? b : a + h * k;
        const double f1 = difference(x1);
        if ((f0 > 0.0 && f1 < 0.0) || (f0 < 0.0 && f1 > 0.0)) {
          double lo = x0;
          double hi = x1;
          double flo = f0;
          for (;;) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;  // width at rounding floor
            const double fmid = difference(mid);
            if ((flo > 0.0) == (fmid > 0.0)) {
              lo = mid;
              flo = fmid;
            } else {
              hi = mid;
            }
          }
          roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
      }
    }
    if (!roots.empty()) {
      breaks.insert(breaks.end(), roots.begin(), roots.end());
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    }
  }

  std::priority_queue<Panel> queue;
  double total_val = 0.0;
  double total_err = 0.0;
  int panels = 0;
  const auto account = [&](const Panel& panel) {
    total_val += panel.val;
    total_err += panel.err;
    ++panels;
    queue.push(panel);
  };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    account(gk15(integrand, breaks[i], breaks[i + 1]));
  }

  while (total_err > opts.target_abs_error && panels < opts.max_panels &&
         !queue.empty()) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // width at rounding floor
    total_val -= worst.val;
    total_err -= worst.err;
    --panels;
    account(gk15(integrand, worst.a, mid));
    account(gk15(integrand, mid, worst.b));
  }

  if (total_err > opts.accept_abs_error) {
    throw QuadratureError("delta_mixture: error estimate " +
                          std::to_string(total_err) + " above acceptance bound " +
                          std::to_string(opts.accept_abs_error) + " at eps = " +
                          std::to_string(eps));
  }
  return QuadratureResult{clamp_probability(total_val), total_err, panels};
}

double delta_mixture(const MixtureDist& p, const MixtureDist& q, double eps) {
  return delta_mixture_ex(p, q, eps, QuadratureOptions{}).value;
}

std::vector<double> default_eps_grid() {
  constexpr int kPoints = 200;
  constexpr double kLo = 1e-4;
  constexpr double kHi = 5.0;
  std::vector<double> grid;
  grid.reserve(kPoints + 1);
  grid.push_back(0.0);
  const double step = std::log(kHi / kLo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    grid.push_back(kLo * std::exp(step * i));
  }
  return grid;
}

namespace {

void check_eps_grid(const std::vector<double>& eps_grid) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 0.0)) {
      throw std::domain_error("curve: eps grid must be nonnegative");
    }
    if (i > 0 && eps_grid[i] <= eps_grid[i - 1]) {
      throw std::domain_error("curve: eps grid must be sorted ascending");
    }
  }
}

}  // namespace

PrivacyCurve curve(const DiscreteDist& p, const DiscreteDist& q,
                   const std::vector<double>& eps_grid) {
  check_eps_grid(eps_grid);
  PrivacyCurve out;
  out.provenance = Provenance::kOracle;
  out.points.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    out.points.push_back(
        CurvePoint{eps, std::max(delta_discrete(p, q, eps),
                                 delta_discrete(q, p, eps))});
  }
  return out;
}

PrivacyCurve curve(const MixtureDist& p, const MixtureDist& q,
                   const std::vector<double>& eps_grid,
                   const QuadratureOptions& opts) {
  check_eps_grid(eps_grid);
  PrivacyCurve out;
  out.provenance = Provenance::kOracle;
  out.points.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    out.points.push_back(
        CurvePoint{eps, std::max(delta_mixture_ex(p, q, eps, opts).value,
                                 delta_mixture_ex(q, p, eps, opts).value)});
  }
  return out;
}

DiscreteDist coarsen(const DiscreteDist& dist,
                     const std::vector<double>& boundaries) {
  if (boundaries.size() < 2) {
    throw std::invalid_argument("coarsen: need at least two boundaries");
  }
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (!(boundaries[i] > boundaries[i - 1])) {
      throw std::invalid_argument("coarsen: boundaries must be strictly increasing");
    }
  }
  std::vector<LogSumAccumulator> buckets(boundaries.size() - 1);
  for (const DiscreteAtom& atom : dist.atoms) {
    const double x = to_double(atom.location);
    if (x < boundaries.front() || x >= boundaries.back()) {
      throw std::invalid_argument("coarsen: atom at " + std::to_string(x) +
                                  " not covered by the partition");
    }
    const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
    const std::size_t idx = static_cast<std::size_t>(it - boundaries.begin()) - 1;
    buckets[idx].add(atom.log_mass);
  }
  std::vector<DiscreteAtom> atoms;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const double log_mass = buckets[i].log_total();
    if (log_mass != kNegInf) {
      atoms.push_back(DiscreteAtom{make_rational(static_cast<std::int64_t>(i), 1),
                                   log_mass});
    }
  }
  return make_discrete_dist(std::move(atoms));
}

}  // namespace statpriv
