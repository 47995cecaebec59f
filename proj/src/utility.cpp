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

#include "statpriv/utility.hpp"

#include <cmath>
#include <stdexcept>

namespace statpriv {

double ul_subsample(const PropertyQuerySpec& q, double lambda) {
  return ul_subsample_m(q, subsample_m_from_lambda(q, lambda));
}

double ul_subsample_m(const PropertyQuerySpec& q, std::int64_t m) {
  if (m < 1 || m > q.n) {
    throw std::invalid_argument("subsample size m must lie in [1, n]");
  }
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(q.n);
  return q.pi * (1.0 - q.pi) * (1.0 / md - 1.0 / nd);
}

double ul_additive(const ContinuousKernel& kern) {
  if (!(kern.scale > 0.0)) {
    throw std::invalid_argument("kernel scale must be positive");
  }
  if (kern.kind == KernelKind::kLaplace) {
    return 2.0 * kern.scale * kern.scale;
  }
  return kern.scale * kern.scale;
}

ContinuousKernel match_noise_to_subsample(const PropertyQuerySpec& q,
                                          double lambda, KernelKind kind) {
  const std::int64_t m = subsample_m_from_lambda(q, lambda);
  if (m == q.n) {
    throw std::invalid_argument(
        "match_noise_to_subsample: lambda = 1 has zero utility loss and no "
        "matching noise scale");
  }
  const double ul = ul_subsample_m(q, m);
  if (kind == KernelKind::kLaplace) {
    return make_laplace(std::sqrt(0.5 * ul));
  }
  return make_gaussian(std::sqrt(ul));
}

UtilityReport utility_report(const PropertyQuerySpec& q,
                             const MechanismSpec& mech) {
  double ul = 0.0;
  if (const auto* sub = std::get_if<SubsampleMech>(&mech)) {
    ul = ul_subsample_m(q, sub->m);
  } else if (const auto* lap = std::get_if<LaplaceMech>(&mech)) {
    ul = ul_additive(make_laplace(lap->psi));
  } else if (const auto* gau = std::get_if<GaussianMech>(&mech)) {
    ul = ul_additive(make_gaussian(gau->sigma));
  }
  return UtilityReport{mech, ul, ul};
}

}  // namespace statpriv
