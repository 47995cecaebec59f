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

#include "statpriv/query.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace statpriv {
namespace {

DiscreteDist dist_from_atoms(std::vector<DiscreteAtom> atoms) {
  return make_discrete_dist(std::move(atoms));
}

}  // namespace

PropertyQuerySpec make_query(std::int64_t n, double pi) {
  if (n < 2) throw std::invalid_argument("PropertyQuerySpec: n must be >= 2");
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::invalid_argument(
        "PropertyQuerySpec: pi must lie strictly between 0 and 1");
  }
  return PropertyQuerySpec{n, pi};
}

double sensitivity(const PropertyQuerySpec& q) {
  return 1.0 / static_cast<double>(q.n);
}

double odds_ratio(const PropertyQuerySpec& q) { return q.pi / (1.0 - q.pi); }

std::int64_t subsample_m_from_lambda(const PropertyQuerySpec& q, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("subsampling rate must lie in (0, 1]");
  }
  const double target = lambda * static_cast<double>(q.n);
  const std::int64_t m = std::llround(target);
  if (std::fabs(target - static_cast<double>(m)) >
      1e-9 * std::max(1.0, target)) {
    const std::int64_t nearest =
        std::min<std::int64_t>(q.n, std::max<std::int64_t>(1, m));
    throw std::invalid_argument(
        "subsampling rate times n must be an integer; nearest valid rate is " +
        std::to_string(static_cast<double>(nearest) / static_cast<double>(q.n)) +
        " (m = " + std::to_string(nearest) + ")");
  }
  if (m < 1 || m > q.n) {
    throw std::invalid_argument("subsample size m must lie in [1, n]");
  }
  return m;
}

DiscretePair pure_pair(const PropertyQuerySpec& q) {
  return subsample_pair_m(q, q.n);
}

DiscretePair subsample_pair(const PropertyQuerySpec& q, double lambda) {
  return subsample_pair_m(q, subsample_m_from_lambda(q, lambda));
}

DiscretePair subsample_pair_m(const PropertyQuerySpec& q, std::int64_t m) {
  if (m < 1 || m > q.n) {
    throw std::invalid_argument("subsample size m must lie in [1, n]");
  }
  const double pi = q.pi;
  std::vector<DiscreteAtom> plus;
  std::vector<DiscreteAtom> minus;
  plus.reserve(m + 1);
  minus.reserve(m + 1);
  if (m == q.n) {
    // Full sample: the critical entry is always drawn.
    for (std::int64_t j = 1; j <= m; ++j) {
      plus.push_back(
          DiscreteAtom{make_rational(j, m), log_binomial_pmf(j - 1, m - 1, pi)});
    }
    for (std::int64_t j = 0; j <= m - 1; ++j) {
      minus.push_back(
          DiscreteAtom{make_rational(j, m), log_binomial_pmf(j, m - 1, pi)});
    }
  } else {
    const double lambda = static_cast<double>(m) / static_cast<double>(q.n);
    const double log_l = std::log(lambda);
    const double log_1ml = std::log1p(-lambda);
    for (std::int64_t j = 0; j <= m; ++j) {
      const double drawn =
          j >= 1 ? log_l + log_binomial_pmf(j - 1, m - 1, pi) : kNegInf;
      const double not_drawn = log_1ml + log_binomial_pmf(j, m, pi);
      plus.push_back(DiscreteAtom{make_rational(j, m), log_add(drawn, not_drawn)});
    }
    for (std::int64_t j = 0; j <= m; ++j) {
      const double drawn =
          j <= m - 1 ? log_l + log_binomial_pmf(j, m - 1, pi) : kNegInf;
      const double not_drawn = log_1ml + log_binomial_pmf(j, m, pi);
      minus.push_back(DiscreteAtom{make_rational(j, m), log_add(drawn, not_drawn)});
    }
  }
  return DiscretePair{dist_from_atoms(std::move(plus)),
                      dist_from_atoms(std::move(minus))};
}

MixturePair noisy_pair(const PropertyQuerySpec& q, const ContinuousKernel& kern) {
  if (!(kern.scale > 0.0)) {
    throw std::invalid_argument("noisy_pair: kernel scale must be positive");
  }
  const DiscretePair base = pure_pair(q);
  const auto to_mixture = [&](const DiscreteDist& d) {
    std::vector<MixtureComponent> comps;
    comps.reserve(d.atoms.size());
    for (const DiscreteAtom& a : d.atoms) {
      comps.push_back(MixtureComponent{a.location, a.log_mass});
    }
    return make_mixture_dist(kern, std::move(comps));
  };
  return MixturePair{to_mixture(base.plus), to_mixture(base.minus)};
}

double ratio_Q_plus(const PropertyQuerySpec& q, double lambda, std::int64_t j) {
  const std::int64_t m = subsample_m_from_lambda(q, lambda);
  if (j < 0 || j > m) {
    throw std::invalid_argument("ratio_Q_plus: j must lie in [0, m]");
  }
  const double md = static_cast<double>(m);
  const double jd = static_cast<double>(j);
  const double mixed = (1.0 - lambda) * md * q.pi;
  const double num = lambda * jd + mixed;
  const double den = lambda * (md - jd) * odds_ratio(q) + mixed;
  if (den == 0.0) return kPosInf;  // j = m at lambda = 1; flagged, not thrown
  return num / den;
}

HypergeomDiscrepancyReport hypergeometric_sampling_discrepancy(
    const PropertyQuerySpec& q, double lambda) {
  const std::int64_t m = subsample_m_from_lambda(q, lambda);
  std::int64_t K = std::llround(q.pi * static_cast<double>(q.n));
  K = std::min(q.n, std::max<std::int64_t>(0, K));
  const std::int64_t lo = std::max<std::int64_t>(0, m - (q.n - K));
  const std::int64_t hi = std::min(m, K);
  double max_abs_diff = 0.0;
  for (std::int64_t j = 0; j <= m; ++j) {
    const double pb = std::exp(log_binomial_pmf(j, m, q.pi));
    const double ph = (j >= lo && j <= hi)
                          ? std::exp(log_hypergeometric_pmf(j, m, K, q.n))
                          : 0.0;
    max_abs_diff = std::max(max_abs_diff, std::fabs(pb - ph));
  }
  return HypergeomDiscrepancyReport{max_abs_diff, K};
}

}  // namespace statpriv
