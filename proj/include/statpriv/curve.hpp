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

// The generic, mechanism-agnostic evaluator of the privacy curve
//
//   delta(eps) = sum_z / integral_z  max(0, p(z) - e^eps q(z)),
//
// the brute-force oracle against which every closed form in this library is
// checked.  Distributions come in two shapes: finite atom lists (DiscreteDist)
// and finite mixtures of a shared continuous kernel (MixtureDist).  The direct
// max(0, .) form is used rather than the optimal-set characterization
// {z : ratio >= e^eps}; it is algebraically identical and robust where q -> 0.

#ifndef STATPRIV_CURVE_HPP_
#define STATPRIV_CURVE_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "statpriv/dist.hpp"

namespace statpriv {

// Exact rational output location.  Atom positions and mixture shifts are
// values j/m or j/n; keeping them exact makes location identity and shift
// differences of order 1/n independent of floating-point rounding.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // invariant: den > 0 and gcd(|num|, den) == 1

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Reduces num/den to canonical form; throws std::domain_error if den == 0.
Rational make_rational(std::int64_t num, std::int64_t den);

bool rational_less(const Rational& a, const Rational& b);
double to_double(const Rational& r);

struct DiscreteAtom {
  Rational location;
  LogProb log_mass;
};

// Finite support with strictly increasing locations; masses sum to 1 within
// 1e-10.  Exact-zero atoms are dropped at construction, so every stored atom
// has positive mass.
struct DiscreteDist {
  std::vector<DiscreteAtom> atoms;
};

DiscreteDist make_discrete_dist(std::vector<DiscreteAtom> atoms);

struct MixtureComponent {
  Rational shift;
  LogProb log_weight;
};

// Finite mixture sum_i w_i * kernel(z - shift_i) with strictly increasing
// shifts and weights summing to 1 within 1e-10.
struct MixtureDist {
  ContinuousKernel kernel;
  std::vector<MixtureComponent> components;
};

MixtureDist make_mixture_dist(ContinuousKernel kernel,
                              std::vector<MixtureComponent> components);

enum class Provenance { kAnalytic, kOracle, kDpBaseline };

struct CurvePoint {
  double epsilon;
  double delta;
};

// Sampled privacy curve; delta is nonincreasing in epsilon and lies in [0,1].
struct PrivacyCurve {
  std::vector<CurvePoint> points;
  Provenance provenance = Provenance::kOracle;
};

// Privacy loss ln(numer(z)/denom(z)) at one support point.  loss = +infinity
// where denom has no atom (numer mass there enters delta for every eps);
// loss = -infinity where numer has no atom.  Zero-mass atoms are never
// stored, so the 0/0 convention (loss = 0) has no representable witness.
struct PLRVSample {
  Rational location;
  double loss;
};

std::vector<PLRVSample> plrv_samples(const DiscreteDist& numer,
                                     const DiscreteDist& denom);

// sum_z max(0, p(z) - e^eps q(z)) over the union support, evaluated in log
// space.  Atoms present in p but absent in q contribute their full p-mass.
double delta_discrete(const DiscreteDist& p, const DiscreteDist& q, double eps);

// Raised when adaptive quadrature cannot certify the requested accuracy.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double target_abs_error = 1e-9;  // refinement goal
  double accept_abs_error = 1e-7;  // hard failure above this at the panel cap
  int max_panels = 100000;
};

struct QuadratureResult {
  double value;
  double error_estimate;
  int panels;
};

// integral over R of max(0, p(z) - e^eps q(z)) by adaptive Gauss-Kronrod
// quadrature.  Initial panel boundaries sit at every component shift of
// either mixture (for Laplace kernels these are exactly the density kinks)
// plus truncated tails; panels are then refined worst-first.  Throws
// QuadratureError instead of returning a value it cannot certify to
// opts.accept_abs_error.
double delta_mixture(const MixtureDist& p, const MixtureDist& q, double eps);
QuadratureResult delta_mixture_ex(const MixtureDist& p, const MixtureDist& q,
                                  double eps,
                                  const QuadratureOptions& opts = {});

// eps = 0 plus 200 log-spaced points in [1e-4, 5].
std::vector<double> default_eps_grid();

// eps -> max(delta(p,q,eps), delta(q,p,eps)) over a sorted nonnegative grid,
// with provenance = oracle.
PrivacyCurve curve(const DiscreteDist& p, const DiscreteDist& q,
                   const std::vector<double>& eps_grid);
PrivacyCurve curve(const MixtureDist& p, const MixtureDist& q,
                   const std::vector<double>& eps_grid,
                   const QuadratureOptions& opts = {});

// Post-processing by interval buckets: boundaries b_0 < ... < b_k define
// buckets [b_i, b_{i+1}); atom masses are merged per bucket (the resulting
// atom sits at the rational i/1).  Throws std::invalid_argument if any atom
// falls outside [b_0, b_k).
DiscreteDist coarsen(const DiscreteDist& dist,
                     const std::vector<double>& boundaries);

}  // namespace statpriv

#endif  // STATPRIV_CURVE_HPP_
