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

// Closed forms for the privacy curves of every mechanism, plus the
// differential-privacy baselines they are compared against.
//
// For subsampling (and its lambda = 1 pure specialization) the curve is a
// pair of binomial tail sums over the outcomes whose likelihood ratio
// Q_plus(j) crosses e^eps.  The crossing points are
//
//   c_plus_raw  = (e^eps - 1) / (lambda (1 + e^eps xi))
//   c_minus_raw = (1 - e^-eps) / (lambda (1 + e^-eps xi))
//   j_plus  = (1 + c_plus) pi m,   j_minus = (1 - c_minus) pi m
//
// with xi = pi/(1-pi) and m = lambda n.  The reported thresholds clamp
// c_plus at 1/pi - 1 and c_minus at 1 so that j_plus <= m and j_minus >= 0;
// the delta sums below use the raw values, whose empty-sum behaviour agrees
// with the clamped single-term form (all excluded summands are negative by
// monotonicity of Q_plus).

#ifndef STATPRIV_ANALYTIC_HPP_
#define STATPRIV_ANALYTIC_HPP_

#include <algorithm>
#include <cstdint>

#include "statpriv/query.hpp"

namespace statpriv {

struct ThresholdIndices {
  double j_plus_star;     // clamped: (1 + c_plus_clamped) pi m
  double j_minus_star;    // clamped: (1 - c_minus_clamped) pi m
  double c_plus_star;     // raw crossing offset, >= 0
  double c_minus_star;    // raw crossing offset, >= 0
  double c_plus_clamped;  // min(c_plus_star, 1/pi - 1)
  double c_minus_clamped; // min(c_minus_star, 1)
};

ThresholdIndices thresholds(const PropertyQuerySpec& q, double lambda, double eps);

// The two one-sided curves; the privacy curve is their max.
struct DeltaPair {
  double delta_plus;
  double delta_minus;

  double delta() const { return std::max(delta_plus, delta_minus); }
};

// Subsampling closed form, exact in the binomial sampling model:
//
//   delta_plus  = sum_{j=ceil(j_plus)}^{m} pi^{j-1}(1-pi)^{m-j-1} C(m-1,j)
//                 [ lambda (j(1-pi)/(m-j) - e^eps pi)
//                   + (1-lambda)(1-e^eps) m pi (1-pi)/(m-j) ]
//   delta_minus = sum_{j=0}^{floor(j_minus)} pi^{j-1}(1-pi)^{m-j-1} C(m-1,j)
//                 [ lambda (pi - e^eps j(1-pi)/(m-j))
//                   + (1-lambda)(1-e^eps) m pi (1-pi)/(m-j) ]
//
// evaluated in log space with signed accumulation.  The j = m summand has
// (m-j) in a denominator and is evaluated through the algebraically equal
// mass-difference form P_plus(m) - e^eps P_minus(m) instead.
DeltaPair delta_subsample_analytic(const PropertyQuerySpec& q, double lambda,
                                   double eps);
DeltaPair delta_subsample_analytic_m(const PropertyQuerySpec& q, std::int64_t m,
                                     double eps);

// Pure mechanism: the lambda = 1 specialization, evaluated through the very
// same code path so the two agree bit for bit.
DeltaPair delta_pure_analytic(const PropertyQuerySpec& q, double eps);

// The pure/subsampling closed forms are derived under eps <= ln 2; beyond
// that callers are expected to lean on the oracle.  This helper implements
// the flag.
bool outside_pure_regime(double eps);

// Laplace noise with scaling factor psi gives (eps, 0) privacy at
// eps = 1/(psi n), and this is tight: the oracle curve is strictly positive
// at any smaller eps.
double laplace_stat_epsilon(const PropertyQuerySpec& q, double psi);

// Gaussian approximation of the noisy-mechanism curve: the binomial count is
// replaced by a normal with matching moments, giving
//
//   sigma^2 = sigma_noise^2 + pi(1-pi)(n-1)/n^2
//   x*  = pi + n sigma^2 eps + (1/2 - pi)/n     (x** with -eps)
//   delta_plus  = Phi((mu_plus - x*)/sigma) - e^eps Phi((mu_minus - x*)/sigma)
//   delta_minus = Phi((x** - mu_minus)/sigma) - e^eps Phi((x** - mu_plus)/sigma)
//
// with mu_plus = pi(1-1/n) + 1/n and mu_minus = pi(1-1/n).  This is an
// approximation; it is never used as a correctness oracle, only compared
// against quadrature.
DeltaPair delta_gaussian_approx(const PropertyQuerySpec& q, double sigma_noise,
                                double eps);

// Worst-case differential-privacy curve of the Gaussian mechanism at
// sensitivity s: delta = Phi(s/2sigma - eps sigma/s) - e^eps Phi(-s/2sigma - eps sigma/s).
double dp_gaussian_baseline(double s, double sigma, double eps);

// Worst-case differential-privacy curve of the Laplace mechanism:
// delta = 1 - e^{(eps - s/psi)/2} for eps < s/psi, else 0.
double dp_laplace_baseline(double s, double psi, double eps);

struct AmplifiedPrivacy {
  double eps;
  double delta;
};

// Subsampling amplification for differential privacy:
// (eps, delta) -> (ln(1 + lambda(e^eps - 1)), lambda delta).
AmplifiedPrivacy dp_subsample_amplify(double eps, double delta, double lambda);

// Entropy of one entry in nats: -pi ln pi - (1-pi) ln(1-pi).
double shannon_entropy(double pi);

}  // namespace statpriv

#endif  // STATPRIV_ANALYTIC_HPP_
