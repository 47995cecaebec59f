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

#include "statpriv/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace statpriv {
namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0)) throw std::domain_error("eps must be >= 0");
}

// Raw threshold offsets.  c_plus is evaluated in the overflow-free form
// (1 - e^-eps)/(lambda (e^-eps + xi)), algebraically identical to
// (e^eps - 1)/(lambda (1 + e^eps xi)).
double c_plus_raw(double lambda, double eps, double xi) {
  return -std::expm1(-eps) / (lambda * (std::exp(-eps) + xi));
}

double c_minus_raw(double lambda, double eps, double xi) {
  return -std::expm1(-eps) / (lambda * (1.0 + std::exp(-eps) * xi));
}

// Both one-sided sums share their term shape.  With
//
//   A(j) = lambda j(1-pi)/(m-j) + (1-lambda) m pi(1-pi)/(m-j)
//   B(j) = lambda pi            + (1-lambda) m pi(1-pi)/(m-j)
//
// the plus-side summand is F(j)(A - e^eps B) and the minus-side summand is
// F(j)(B - e^eps A), where F(j) = pi^{j-1}(1-pi)^{m-j-1} C(m-1,j) is the
// common positive factor (equal to binomial_pmf(j; m-1, pi)/pi) and
// A(j)/B(j) is exactly the likelihood ratio Q_plus(j).
struct TermShape {
  double a;
  double b;
};

TermShape term_shape(std::int64_t j, std::int64_t m, double pi, double lambda) {
  const double md = static_cast<double>(m);
  const double jd = static_cast<double>(j);
  const double mixed =
      lambda < 1.0 ? (1.0 - lambda) * md * pi * (1.0 - pi) / (md - jd) : 0.0;
  return TermShape{lambda * jd * (1.0 - pi) / (md - jd) + mixed,
                   lambda * pi + mixed};
}

void add_signed(SignedLogAccumulator& acc, double bracket, double log_factor) {
  if (bracket > 0.0) {
    acc.add_positive(std::log(bracket) + log_factor);
  } else if (bracket < 0.0) {
    acc.add_negative(std::log(-bracket) + log_factor);
  }
}

DeltaPair threshold_sum_delta(std::int64_t n, std::int64_t m, double pi, double eps) {
  const double md = static_cast<double>(m);
  const double lambda = static_cast<double>(m) / static_cast<double>(n);
  const double xi = pi / (1.0 - pi);
  const double e_eps = std::exp(eps);
  const double log_pi = std::log(pi);

  // Mass at the top atom j = m, where the bracket form is singular; the
  // algebraically equal mass-difference form is total.
  const double log_p_plus_m =
      lambda < 1.0 ? log_add(std::log(lambda) + (md - 1.0) * log_pi,
                             std::log1p(-lambda) + md * log_pi)
                   : (md - 1.0) * log_pi;
  const double log_p_minus_m =
      lambda < 1.0 ? std::log1p(-lambda) + md * log_pi : kNegInf;

  double delta_plus = 0.0;
  {
    const double j_raw = (1.0 + c_plus_raw(lambda, eps, xi)) * pi * md;
    const std::int64_t j_start =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(j_raw)));
    if (j_start <= m) {
      SignedLogAccumulator acc;
      for (std::int64_t j = j_start; j < m; ++j) {
        const TermShape t = term_shape(j, m, pi, lambda);
        const double log_factor = log_binomial_pmf(j, m - 1, pi) - log_pi;
        add_signed(acc, t.a - e_eps * t.b, log_factor);
      }
      acc.add_positive(log_p_plus_m);
      if (log_p_minus_m != kNegInf) acc.add_negative(eps + log_p_minus_m);
      delta_plus = std::max(0.0, acc.value());
    }
  }

  double delta_minus = 0.0;
  {
    // pi < 1 keeps j_raw strictly below m, so the j = m singularity is
    // unreachable on this side.
    const double j_raw = (1.0 - c_minus_raw(lambda, eps, xi)) * pi * md;
    const std::int64_t j_end = static_cast<std::int64_t>(std::floor(j_raw));
    if (j_end >= 0) {
      SignedLogAccumulator acc;
      for (std::int64_t j = 0; j <= j_end; ++j) {
        const TermShape t = term_shape(j, m, pi, lambda);
        const double log_factor = log_binomial_pmf(j, m - 1, pi) - log_pi;
        // t.a == 0 exactly at j = 0 under lambda = 1; skip the product so an
        // infinite e_eps cannot turn it into a NaN.
        const double bracket = t.a == 0.0 ? t.b : t.b - e_eps * t.a;
        add_signed(acc, bracket, log_factor);
      }
      delta_minus = std::max(0.0, acc.value());
    }
  }

  return DeltaPair{delta_plus, delta_minus};
}

}  // namespace

ThresholdIndices thresholds(const PropertyQuerySpec& q, double lambda,
                            double eps) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("thresholds: lambda must lie in (0, 1]");
  }
  check_eps(eps);
  const double xi = odds_ratio(q);
  const double md = lambda * static_cast<double>(q.n);
  ThresholdIndices t;
  t.c_plus_star = c_plus_raw(lambda, eps, xi);
  t.c_minus_star = c_minus_raw(lambda, eps, xi);
  t.c_plus_clamped = std::min(t.c_plus_star, 1.0 / q.pi - 1.0);
  t.c_minus_clamped = std::min(t.c_minus_star, 1.0);
  t.j_plus_star = (1.0 + t.c_plus_clamped) * q.pi * md;
  t.j_minus_star = (1.0 - t.c_minus_clamped) * q.pi * md;
  return t;
}

DeltaPair delta_subsample_analytic(const PropertyQuerySpec& q, double lambda,
                                   double eps) {
  return delta_subsample_analytic_m(q, subsample_m_from_lambda(q, lambda), eps);
}

DeltaPair delta_subsample_analytic_m(const PropertyQuerySpec& q, std::int64_t m,
                                     double eps) {
  if (m < 1 || m > q.n) {
    throw std::invalid_argument("subsample size m must lie in [1, n]");
  }
  check_eps(eps);
  return threshold_sum_delta(q.n, m, q.pi, eps);
}

DeltaPair delta_pure_analytic(const PropertyQuerySpec& q, double eps) {
  check_eps(eps);
  return threshold_sum_delta(q.n, q.n, q.pi, eps);
}

bool outside_pure_regime(double eps) { return eps > std::numbers::ln2; }

double laplace_stat_epsilon(const PropertyQuerySpec& q, double psi) {
  if (!(psi > 0.0)) throw std::invalid_argument("psi must be positive");
  return 1.0 / (psi * static_cast<double>(q.n));
}

DeltaPair delta_gaussian_approx(const PropertyQuerySpec& q, double sigma_noise,
                                double eps) {
  if (!(sigma_noise > 0.0)) {
    throw std::invalid_argument("sigma_noise must be positive");
  }
  check_eps(eps);
  const double nd = static_cast<double>(q.n);
  const double pi = q.pi;
  const double var = sigma_noise * sigma_noise + pi * (1.0 - pi) * (nd - 1.0) / (nd * nd);
  const double sigma = std::sqrt(var);
  const double mu_minus = pi * (1.0 - 1.0 / nd);
  const double mu_plus = mu_minus + 1.0 / nd;
  const double x_star = pi + nd * var * eps + (0.5 - pi) / nd;
  const double x_star2 = pi - nd * var * eps + (0.5 - pi) / nd;
  // Second terms go through exp(eps + log Phi) so huge eps meets vanishing
  // tail mass as -infinity in the exponent, not as inf * 0.
  const double dp = std_normal_cdf((mu_plus - x_star) / sigma) -
                    std::exp(eps + std::log(std_normal_cdf((mu_minus - x_star) / sigma)));
  const double dm = std_normal_cdf((x_star2 - mu_minus) / sigma) -
                    std::exp(eps + std::log(std_normal_cdf((x_star2 - mu_plus) / sigma)));
  return DeltaPair{std::min(1.0, std::max(0.0, dp)),
                   std::min(1.0, std::max(0.0, dm))};
}

double dp_gaussian_baseline(double s, double sigma, double eps) {
  if (!(s > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("sensitivity and sigma must be positive");
  }
  check_eps(eps);
  const double z1 = s / (2.0 * sigma) - eps * sigma / s;
  const double z2 = -s / (2.0 * sigma) - eps * sigma / s;
  const double value =
      std_normal_cdf(z1) - std::exp(eps + std::log(std_normal_cdf(z2)));
  return std::min(1.0, std::max(0.0, value));
}

double dp_laplace_baseline(double s, double psi, double eps) {
  if (!(s > 0.0) || !(psi > 0.0)) {
    throw std::invalid_argument("sensitivity and psi must be positive");
  }
  check_eps(eps);
  const double bound = s / psi;
  if (eps >= bound) return 0.0;
  return -std::expm1(0.5 * (eps - bound));
}

AmplifiedPrivacy dp_subsample_amplify(double eps, double delta, double lambda) {
  check_eps(eps);
  if (!(delta >= 0.0)) throw std::domain_error("delta must be >= 0");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1]");
  }
  return AmplifiedPrivacy{std::log1p(lambda * std::expm1(eps)), lambda * delta};
}

double shannon_entropy(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::domain_error("entropy requires pi strictly inside (0, 1)");
  }
  return -pi * std::log(pi) - (1.0 - pi) * std::log1p(-pi);
}

}  // namespace statpriv
