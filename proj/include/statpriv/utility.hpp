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

// Utility-loss formulas and equal-utility calibration.  The utility loss of
// a mechanism is the mean squared deviation between its output and the true
// query value, UL = E[(Y_M - Y)^2]; for the mechanisms implemented here it
// coincides with the increase in estimator mean squared error (UL_STAT).

#ifndef STATPRIV_UTILITY_HPP_
#define STATPRIV_UTILITY_HPP_

#include <cstdint>

#include "statpriv/query.hpp"

namespace statpriv {

struct UtilityReport {
  MechanismSpec mechanism;
  double ul;       // mean squared deviation
  double ul_stat;  // MSE increase; equals ul for all mechanisms here
};

// UL of subsampling at rate lambda = m/n: pi(1-pi)(1/m - 1/n); zero at
// lambda = 1.
double ul_subsample(const PropertyQuerySpec& q, double lambda);
double ul_subsample_m(const PropertyQuerySpec& q, std::int64_t m);

// UL of additive noise: the noise variance (2 psi^2 Laplace, sigma^2 Gaussian).
double ul_additive(const ContinuousKernel& kern);

// Calibrates a noise kernel to the exact utility loss of subsampling at rate
// lambda < 1: Laplace psi = sqrt(UL/2), Gaussian sigma = sqrt(UL).  Rejects
// lambda = 1 (zero loss admits no positive noise scale).
ContinuousKernel match_noise_to_subsample(const PropertyQuerySpec& q,
                                          double lambda, KernelKind kind);

UtilityReport utility_report(const PropertyQuerySpec& q,
                             const MechanismSpec& mech);

}  // namespace statpriv

#endif  // STATPRIV_UTILITY_HPP_
