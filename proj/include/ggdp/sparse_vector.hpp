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

#ifndef GGDP_SPARSE_VECTOR_HPP_
#define GGDP_SPARSE_VECTOR_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ggdp/distributions.hpp"
#include "ggdp/random.hpp"

namespace ggdp {

// Laplace scales for the thresholded re-answering mechanism. The privacy
// budget is split evenly between the comparison stage and the numeric
// answers; each stage pays for its budget_count adaptive uses through an
// advanced-composition factor, which is where the sqrt(budget_count * log)
// shape comes from:
//   threshold   Lap(4 sqrt(2 c ln(2/delta)) / eps)
//   comparison  Lap(8 sqrt(2 c ln(2/delta)) / eps)
//   answer      Lap(2 sqrt(2 c ln(4/delta)) / eps)
struct SvNoiseScales {
  double threshold;
  double comparison;
  double answer;
};

inline SvNoiseScales sv_noise_schedule(double eps, double delta,
                                       std::size_t budget_count) {
  if (!(eps > 0.0) || !(delta > 0.0) || !(delta < 1.0) || budget_count < 1) {
    throw std::invalid_argument("sv_noise_schedule: invalid parameters");
  }
  const double c = static_cast<double>(budget_count);
  const double comparison_root = std::sqrt(2.0 * c * std::log(2.0 / delta));
  const double answer_root = std::sqrt(2.0 * c * std::log(4.0 / delta));
  return SvNoiseScales{4.0 * comparison_root / eps,
                       8.0 * comparison_root / eps,
                       2.0 * answer_root / eps};
}

struct SvConfig {
  double alpha = 0.0;            // accuracy target; threshold sits at alpha/2
  std::size_t budget_count = 1;  // above-threshold answers before shutdown
  double eps = 0.0;
  double delta = 0.0;
  double beta = 0.0;  // accuracy failure probability target
  double threshold_noise_scale = 0.0;
  double comparison_noise_scale = 0.0;
  double answer_noise_scale = 0.0;

  // Config with an externally chosen alpha (the composed mechanism supplies
  // its own).
  static SvConfig derive(double alpha, std::size_t budget_count, double eps,
                         double delta, double beta) {
    if (!(alpha > 0.0)) {
      throw std::invalid_argument("SvConfig: alpha must be positive");
    }
    if (!(beta > 0.0) || !(beta < 1.0)) {
      throw std::invalid_argument("SvConfig: beta must lie in (0, 1)");
    }
    const SvNoiseScales scales = sv_noise_schedule(eps, delta, budget_count);
    SvConfig cfg;
    cfg.alpha = alpha;
    cfg.budget_count = budget_count;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.beta = beta;
    cfg.threshold_noise_scale = scales.threshold;
    cfg.comparison_noise_scale = scales.comparison;
    cfg.answer_noise_scale = scales.answer;
    return cfg;
  }

  // Config with the smallest alpha our accuracy analysis supports for k
  // queries: a union bound over the threshold draws (at most c+1), the k
  // comparison draws, and the c answer draws, each stage given beta/3.
  static SvConfig for_queries(std::size_t k, std::size_t budget_count,
                              double eps, double delta, double beta) {
    if (k < 1) throw std::invalid_argument("SvConfig: need k >= 1");
    const SvNoiseScales scales = sv_noise_schedule(eps, delta, budget_count);
    const double c = static_cast<double>(budget_count);
    const double kd = static_cast<double>(k);
    const double threshold_slack =
        scales.threshold * std::log(3.0 * (c + 1.0) / beta);
    const double comparison_slack =
        scales.comparison * std::log(3.0 * kd / beta);
    const double answer_slack = scales.answer * std::log(3.0 * c / beta);
    const double alpha = std::max(
        2.0 * (threshold_slack + comparison_slack), answer_slack);
    return derive(alpha, budget_count, eps, delta, beta);
  }
};

// Privately re-answers the entries of d whose magnitude clears a noisy
// threshold at alpha/2 and outputs exactly 0 for the rest. After
// budget_count above-threshold events every remaining output is 0; the
// threshold is refreshed after each such event. Every output coordinate is
// either exactly 0 or d_i plus one Laplace draw.
inline std::vector<double> numeric_sparse(const std::vector<double>& d,
                                          const SvConfig& config,
                                          RandomStream& stream) {
  if (config.budget_count < 1 || config.budget_count > d.size()) {
    throw std::invalid_argument(
        "numeric_sparse: need 1 <= budget_count <= k");
  }
  const double threshold = config.alpha / 2.0;
  std::vector<double> out(d.size(), 0.0);
  std::size_t answered = 0;
  double noisy_threshold =
      threshold + sample_laplace(config.threshold_noise_scale, stream);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (answered >= config.budget_count) break;  // rest stays exactly 0
    const double probe =
        std::abs(d[i]) + sample_laplace(config.comparison_noise_scale, stream);
    if (probe >= noisy_threshold) {
      out[i] = d[i] + sample_laplace(config.answer_noise_scale, stream);
      ++answered;
      noisy_threshold =
          threshold + sample_laplace(config.threshold_noise_scale, stream);
    }
  }
  return out;
}

}  // namespace ggdp

#endif  // GGDP_SPARSE_VECTOR_HPP_
