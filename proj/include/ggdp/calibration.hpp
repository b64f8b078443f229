//
// Copyright 2026 The ggdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef GGDP_CALIBRATION_HPP_
#define GGDP_CALIBRATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ggdp/distributions.hpp"
#include "ggdp/numeric.hpp"
#include "ggdp/random.hpp"

namespace ggdp {

// The privacy guarantees here are asymptotic with unspecified constants, so
// every formula exposes its constant and its log base. Defaults: constant 1,
// natural logs.
enum class LogBase { natural, base2 };

inline double log_in_base(double x, LogBase base) {
  return base == LogBase::natural ? std::log(x) : std::log2(x);
}

struct PrivacyBudget {
  double epsilon;
  double delta;

  PrivacyBudget(double epsilon_in, double delta_in)
      : epsilon(epsilon_in), delta(delta_in) {
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("PrivacyBudget: epsilon must be positive");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
      throw std::invalid_argument("PrivacyBudget: delta must lie in (0, 1)");
    }
  }
};

enum class MechanismFamily { laplace, gaussian, ggauss, ggauss_pq, composed };

inline std::string family_name(MechanismFamily family) {
  switch (family) {
    case MechanismFamily::laplace:
      return "laplace";
    case MechanismFamily::gaussian:
      return "gaussian";
    case MechanismFamily::ggauss:
      return "ggauss";
    case MechanismFamily::ggauss_pq:
      return "ggauss_pq";
    case MechanismFamily::composed:
      return "composed";
  }
  return "unknown";
}

struct MechanismSpec {
  MechanismFamily family = MechanismFamily::ggauss;
  double p = 4.0;
  double q = 4.0;
  double sigma = 1.0;
  bool truncate = true;
  double c_sigma = 1.0;
  LogBase log_base = LogBase::natural;
};

// Default lower-range constant for the delta admissibility window
// [2^{-c_range * k / p}, 1/k]; matches the constant in the mechanism's
// truncation-frequency guarantee.
inline constexpr double kDefaultRangeConstant = 0.001;

struct ValidationReport {
  int p = 4;  // normalized shape
  std::vector<std::string> warnings;
};

// Rounds p up to the nearest even integer >= 4 and reports (as warnings, not
// failures) whether p and delta sit inside the regime the guarantees cover.
// The p-range check is against log2(k); the delta window is dyadic. Probing
// out-of-range regimes deliberately is allowed, hence warnings.
inline ValidationReport validate_params(std::size_t k, double p,
                                        const PrivacyBudget& budget,
                                        double c_range = kDefaultRangeConstant) {
  if (k < 2) throw std::invalid_argument("validate_params: need k >= 2");
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("validate_params: p must be positive finite");
  }
  if (!(c_range > 0.0)) {
    throw std::invalid_argument("validate_params: c_range must be positive");
  }

  ValidationReport report;
  int even = static_cast<int>(std::ceil(p));
  if (even % 2 != 0) ++even;
  report.p = std::max(4, even);

  const double kd = static_cast<double>(k);
  if (static_cast<double>(report.p) > std::log2(kd)) {
    report.warnings.push_back("p=" + std::to_string(report.p) +
                              " exceeds log2(k); error bounds degrade");
  }
  const double delta_floor =
      std::exp2(-c_range * kd / static_cast<double>(report.p));
  if (budget.delta < delta_floor) {
    report.warnings.push_back(
        "delta below 2^(-c_range*k/p); the pure-DP regime is not covered");
  }
  if (budget.delta > 1.0 / kd) {
    report.warnings.push_back("delta above 1/k; guarantees assume delta <= 1/k");
  }
  return report;
}

struct SigmaBranches {
  double privacy_branch;       // sqrt(k * p * log(1/delta)) / eps
  double epsilon_root_branch;  // sqrt(k) / eps^{1/p}
};

inline SigmaBranches sigma_branches_ggauss(std::size_t k, int p,
                                           const PrivacyBudget& budget,
                                           LogBase log_base = LogBase::natural) {
  const double kd = static_cast<double>(k);
  const double pd = static_cast<double>(p);
  SigmaBranches b;
  b.privacy_branch =
      std::sqrt(kd * pd * log_in_base(1.0 / budget.delta, log_base)) /
      budget.epsilon;
  b.epsilon_root_branch = std::sqrt(kd) / std::pow(budget.epsilon, 1.0 / pd);
  return b;
}

// Noise scale for the mechanism adding noise with density proportional to
// exp(-(|x|_p / sigma)^p), in the two-branch max form the privacy analysis
// produces. c_sigma multiplies the whole expression.
inline double calibrate_sigma_ggauss(std::size_t k, int p,
                                     const PrivacyBudget& budget,
                                     double c_sigma = 1.0,
                                     LogBase log_base = LogBase::natural) {
  if (!(c_sigma > 0.0)) {
    throw std::invalid_argument("calibrate_sigma_ggauss: c_sigma must be > 0");
  }
  const SigmaBranches b = sigma_branches_ggauss(k, p, budget, log_base);
  return c_sigma * std::max(b.privacy_branch, b.epsilon_root_branch);
}

// Noise scale for the exp(-(|x|_p / sigma)^q) variant, q <= p.
inline double calibrate_sigma_pq(std::size_t k, int p, double q,
                                 const PrivacyBudget& budget,
                                 double c_sigma = 1.0,
                                 LogBase log_base = LogBase::natural) {
  if (!(q >= 1.0) || q > static_cast<double>(p)) {
    throw std::invalid_argument("calibrate_sigma_pq: need 1 <= q <= p");
  }
  if (!(c_sigma > 0.0)) {
    throw std::invalid_argument("calibrate_sigma_pq: c_sigma must be > 0");
  }
  const double kd = static_cast<double>(k);
  const double pd = static_cast<double>(p);
  const double k_factor = std::pow(kd, 0.5 + 1.0 / pd - 1.0 / q);
  const double privacy_branch =
      k_factor * std::sqrt(pd * log_in_base(1.0 / budget.delta, log_base)) /
      budget.epsilon;
  const double epsilon_root_branch =
      k_factor / std::pow(budget.epsilon, 1.0 / pd);
  return c_sigma * std::max(privacy_branch, epsilon_root_branch);
}

// Parameter schedule for the noise + sparse-vector composition. The three
// delta shares and the even epsilon split are fixed by the composition
// argument; everything else is a deterministic function of (k, p, t).
struct ComposedParams {
  double sigma = 0.0;
  double alpha_sv = 0.0;
  std::size_t c_sv = 1;
  double eps_sv = 0.0;
  double delta_sv = 0.0;
  double beta_sv = 0.0;
  double t = 0.0;
};

// Upper end of the sensible t range, t <= c * log k / log log k.
inline constexpr double kDefaultTRangeConstant = 1.0;

inline ComposedParams calibrate_composed(std::size_t k, int p,
                                         const PrivacyBudget& budget, double t,
                                         double c_sigma = 1.0,
                                         LogBase log_base = LogBase::natural) {
  if (k < 16) {
    throw std::invalid_argument(
        "calibrate_composed: need k >= 16 so that log log k is bounded away "
        "from 0");
  }
  if (!(t >= 0.0)) {
    throw std::invalid_argument("calibrate_composed: need t >= 0");
  }
  const double kd = static_cast<double>(k);
  const double log_k = log_in_base(kd, log_base);
  const double log_log_k = log_in_base(log_k, log_base);

  ComposedParams params;
  params.t = t;
  params.eps_sv = budget.epsilon / 2.0;
  params.delta_sv = budget.delta / 3.0;
  const PrivacyBudget noise_budget(params.eps_sv, params.delta_sv);
  params.sigma = calibrate_sigma_ggauss(k, p, noise_budget, c_sigma, log_base);
  params.alpha_sv =
      12.0 * t * std::pow(log_log_k, 1.0 / static_cast<double>(p)) *
      params.sigma;
  // The asymptotic budget count drops below 1 at practical sizes; floor it so the
  // sparse-vector stage stays non-degenerate, and cap at k.
  const double raw_c = 4.0 * kd / std::pow(log_k, 2.0 + 2.0 * t);
  params.c_sv = static_cast<std::size_t>(
      std::clamp(std::floor(raw_c), 1.0, kd));
  params.beta_sv = std::exp(-std::pow(log_k, t)) / 2.0;
  return params;
}

inline std::optional<std::string> composed_t_range_warning(
    std::size_t k, double t, double c_t = kDefaultTRangeConstant,
    LogBase log_base = LogBase::natural) {
  const double log_k = log_in_base(static_cast<double>(k), log_base);
  const double limit = c_t * log_k / log_in_base(log_k, log_base);
  if (t > limit) {
    return "t=" + std::to_string(t) + " exceeds c_t*log(k)/loglog(k)=" +
           std::to_string(limit);
  }
  return std::nullopt;
}

namespace internal {

// Shifted-minus-unshifted p-th power loss for one cached draw, at shift s.
// Pathwise the exceedance event {loss > eps} is monotone in s: the map
// s -> |z - s 1|_p^p is convex with value |z|_p^p at 0, so once it exceeds
// that level it stays above it.
inline bool privacy_violation(std::span<const double> z, double p, double s,
                              double eps) {
  CompensatedSum diff;
  for (double zi : z) diff.add(pow_abs(zi - s, p) - pow_abs(zi, p));
  return diff.value() > eps;
}

}  // namespace internal

// Smallest sigma (on a 2^{1/16} lattice, i.e. within 5% relative) whose
// Monte Carlo estimate of Pr[(|x - 1|_p^p - |x|_p^p) / sigma^p > eps] plus
// two standard errors stays below delta. The all-ones shift is the worst
// case by sign symmetry of the noise. Draws are shared across the search so
// the feasibility predicate is monotone in sigma and the returned lattice
// point is monotone in (eps, delta) at a fixed seed.
inline double empirical_calibrate(std::size_t k, int p,
                                  const PrivacyBudget& budget,
                                  std::size_t trials, RandomStream& stream) {
  if (k < 1) throw std::invalid_argument("empirical_calibrate: need k >= 1");
  if (trials < 100) {
    throw std::invalid_argument("empirical_calibrate: need trials >= 100");
  }
  if (k * trials > (std::size_t{1} << 27)) {
    throw std::invalid_argument(
        "empirical_calibrate: k * trials exceeds the in-memory draw budget "
        "(2^27); reduce trials");
  }
  const double pd = static_cast<double>(p);

  // One fixed set of unit-scale draws, reused for every candidate sigma.
  RandomStream draws = stream.split(0);
  std::vector<double> z(k * trials);
  for (auto& v : z) v = sample_univariate_ggauss(pd, 1.0, draws);

  const auto feasible = [&](double sigma) {
    const double shift = 1.0 / sigma;
    std::size_t violations = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const std::span<const double> row(z.data() + trial * k, k);
      if (internal::privacy_violation(row, pd, shift, budget.epsilon)) {
        ++violations;
      }
    }
    const double p_hat =
        static_cast<double>(violations) / static_cast<double>(trials);
    return p_hat + 2.0 * binomial_std_error(p_hat, trials) <= budget.delta;
  };

  const auto lattice = [](long j) { return std::exp2(static_cast<double>(j) / 16.0); };
  const double anchor = calibrate_sigma_ggauss(k, p, budget);
  long hi = static_cast<long>(std::ceil(16.0 * std::log2(anchor)));
  long probes = 0;
  while (!feasible(lattice(hi))) {
    hi += 16;
    if (++probes > 24) {
      throw std::runtime_error(
          "empirical_calibrate: no feasible sigma up to 2^24 times the "
          "analytic anchor " + std::to_string(anchor));
    }
  }
  long lo = hi - 16;
  probes = 0;
  while (feasible(lattice(lo))) {
    hi = lo;
    lo -= 16;
    if (++probes > 64) break;  // everything feasible; return the floor found
  }
  // Invariant: lattice(lo) infeasible (or search floor), lattice(hi) feasible.
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (feasible(lattice(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lattice(hi);
}

}  // namespace ggdp

#endif  // GGDP_CALIBRATION_HPP_
