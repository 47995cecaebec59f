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

// The query model: a property query asks for the fraction of database
// entries satisfying a property that each entry holds independently with
// probability pi.  After this reduction the whole model is the pair (n, pi).
// This module builds the two conditional output distributions (critical
// entry satisfies / does not satisfy the property) for each mechanism:
//
//   pure        exact count of the remaining n-1 entries, reported as j/n
//   subsample   count over a uniform subsample of m = lambda*n entries
//   noisy       the pure output plus mean-zero Laplace or Gaussian noise
//
// Subsampling uses the binomial sampling model (each subsampled entry is an
// independent draw), under which the closed forms evaluated in the analytic
// module are exact.  A fixed-composition hypergeometric comparison is
// exposed for discrepancy reporting only; it never feeds a curve.

#ifndef STATPRIV_QUERY_HPP_
#define STATPRIV_QUERY_HPP_

#include <cstdint>
#include <variant>

#include "statpriv/curve.hpp"
#include "statpriv/dist.hpp"

namespace statpriv {

// Database size n >= 2 and property probability pi in (0, 1); sensitivity
// of the fraction query is s = 1/n.
struct PropertyQuerySpec {
  std::int64_t n;
  double pi;
};

PropertyQuerySpec make_query(std::int64_t n, double pi);

double sensitivity(const PropertyQuerySpec& q);  // 1/n
double odds_ratio(const PropertyQuerySpec& q);   // xi = pi/(1-pi)

struct PureMech {};
struct SubsampleMech {
  std::int64_t m;  // subsample size; rate lambda = m/n
};
struct LaplaceMech {
  double psi;
};
struct GaussianMech {
  double sigma;
};

using MechanismSpec = std::variant<PureMech, SubsampleMech, LaplaceMech, GaussianMech>;

// Converts a sampling rate to the canonical subsample size m = lambda*n.
// lambda*n must be an integer in [1, n]; otherwise throws
// std::invalid_argument naming the nearest valid rate.
std::int64_t subsample_m_from_lambda(const PropertyQuerySpec& q, double lambda);

struct DiscretePair {
  DiscreteDist plus;   // conditioned on the critical entry satisfying the property
  DiscreteDist minus;  // conditioned on it not satisfying the property
};

struct MixturePair {
  MixtureDist plus;
  MixtureDist minus;
};

// Pure mechanism: plus has atoms at j/n, j in [1..n], with mass
// C(n-1,j-1) pi^{j-1} (1-pi)^{n-j}; minus at j/n, j in [0..n-1], with mass
// C(n-1,j) pi^j (1-pi)^{n-1-j}.
DiscretePair pure_pair(const PropertyQuerySpec& q);

// Subsampling with rate lambda = m/n: atoms at j/m, j in [0..m], each side a
// lambda-mixture of the critical entry being drawn or not, e.g. plus mass
//   lambda C(m-1,j-1) pi^{j-1} (1-pi)^{m-j} + (1-lambda) C(m,j) pi^j (1-pi)^{m-j}.
// With lambda = 1 this reproduces pure_pair exactly.
DiscretePair subsample_pair(const PropertyQuerySpec& q, double lambda);
DiscretePair subsample_pair_m(const PropertyQuerySpec& q, std::int64_t m);

// Additive noise: mixture whose shifts are the pure_pair atom locations and
// whose weights are the pure_pair masses, sharing the given kernel.
MixturePair noisy_pair(const PropertyQuerySpec& q, const ContinuousKernel& kern);

// Likelihood ratio of the subsampled conditionals at outcome j/m:
//   Q_plus(j) = (lambda j + (1-lambda) m pi) / (lambda (m-j) xi + (1-lambda) m pi),
// monotone increasing in j and equal to 1 at j = pi*m.  Q_minus = 1/Q_plus.
// At j = m with lambda = 1 the ratio is +infinity (returned, not thrown).
double ratio_Q_plus(const PropertyQuerySpec& q, double lambda, std::int64_t j);

// Pointwise gap between the binomial sampling model Binomial(m, pi) and
// sampling without replacement from a database with a fixed count
// K = round(pi*n) of satisfying entries, Hypergeom(n, K, m).
struct HypergeomDiscrepancyReport {
  double max_abs_diff;
  std::int64_t fixed_count;  // the K used
};

HypergeomDiscrepancyReport hypergeometric_sampling_discrepancy(
    const PropertyQuerySpec& q, double lambda);

}  // namespace statpriv

#endif  // STATPRIV_QUERY_HPP_
