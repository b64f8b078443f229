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

#ifndef GGDP_MECHANISMS_HPP_
#define GGDP_MECHANISMS_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ggdp/calibration.hpp"
#include "ggdp/distributions.hpp"
#include "ggdp/random.hpp"

namespace ggdp {

// True query answers; neighboring databases move each entry by at most 1.
class QueryAnswers {
 public:
  explicit QueryAnswers(std::vector<double> values)
      : values_(std::move(values)) {
    if (values_.empty()) {
      throw std::invalid_argument("QueryAnswers: need k >= 1");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("QueryAnswers: entries must be finite");
      }
    }
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct MechanismOutput {
  std::vector<double> values;
  // True when the release guard fired; the values are then the input,
  // bit for bit.
  bool truncated = false;
  // Norm of the drawn noise in the family's own order (1, 2, or p), recorded
  // even on truncated runs.
  double noise_norm_p = 0.0;
};

// Baseline: iid Laplace(k/eps) per coordinate (the l1 sensitivity of k
// sensitivity-1 queries is k). scale_override, when positive, replaces the
// textbook scale.
inline MechanismOutput laplace_mechanism(const QueryAnswers& d,
                                         const PrivacyBudget& budget,
                                         RandomStream& stream,
                                         double scale_override = 0.0) {
  const double scale = scale_override > 0.0
                           ? scale_override
                           : static_cast<double>(d.dim()) / budget.epsilon;
  MechanismOutput out;
  out.values = d.values();
  CompensatedSum l1;
  for (auto& v : out.values) {
    const double noise = sample_laplace(scale, stream);
    v += noise;
    l1.add(std::abs(noise));
  }
  out.noise_norm_p = l1.value();
  return out;
}

// Baseline: iid centered normal with standard deviation
// sqrt(2 k ln(1.25/delta)) / eps (l2 sensitivity sqrt(k)).
inline MechanismOutput gaussian_mechanism(const QueryAnswers& d,
                                          const PrivacyBudget& budget,
                                          RandomStream& stream,
                                          double stddev_override = 0.0) {
  const double stddev =
      stddev_override > 0.0
          ? stddev_override
          : std::sqrt(2.0 * static_cast<double>(d.dim()) *
                      std::log(1.25 / budget.delta)) /
                budget.epsilon;
  MechanismOutput out;
  out.values = d.values();
  CompensatedSum l2sq;
  for (auto& v : out.values) {
    const double noise = stddev * sample_standard_normal(stream);
    v += noise;
    l2sq.add(noise * noise);
  }
  out.noise_norm_p = std::sqrt(l2sq.value());
  return out;
}

// Noise with density proportional to exp(-(|x|_p / sigma)^p). When
// spec.truncate is set and the drawn noise has (|x|_p / sigma)^p > 2k/p, the
// input is released unchanged; the guard turns the high-probability norm
// bound into an unconditional one.
inline MechanismOutput ggauss_mechanism(const QueryAnswers& d,
                                        const MechanismSpec& spec,
                                        RandomStream& stream) {
  if (!(spec.sigma > 0.0)) {
    throw std::invalid_argument("ggauss_mechanism: sigma must be positive");
  }
  const std::size_t k = d.dim();
  const NoiseVector noise = sample_ggauss_vector(k, spec.p, spec.sigma, stream);
  MechanismOutput out;
  out.noise_norm_p = noise.norm(spec.p);
  const double guard =
      (2.0 * static_cast<double>(k) / spec.p) * pow_abs(spec.sigma, spec.p);
  if (spec.truncate && noise.power_sum(spec.p) > guard) {
    out.values = d.values();
    out.truncated = true;
    return out;
  }
  out.values = d.values();
  for (std::size_t i = 0; i < k; ++i) out.values[i] += noise[i];
  return out;
}

// exp(-(|x|_p / sigma)^q) noise for q <= p; guard at (|x|_p / sigma)^q > 2k/q.
inline MechanismOutput ggauss_pq_mechanism(const QueryAnswers& d,
                                           const MechanismSpec& spec,
                                           RandomStream& stream) {
  if (!(spec.sigma > 0.0)) {
    throw std::invalid_argument("ggauss_pq_mechanism: sigma must be positive");
  }
  if (!(spec.q >= 1.0) || spec.q > spec.p) {
    throw std::invalid_argument("ggauss_pq_mechanism: need 1 <= q <= p");
  }
  const std::size_t k = d.dim();
  const NoiseVector noise =
      sample_ggauss_pq_vector(k, spec.p, spec.q, spec.sigma, stream);
  MechanismOutput out;
  out.noise_norm_p = noise.norm(spec.p);
  const double rescaled = pow_abs(out.noise_norm_p / spec.sigma, spec.q);
  if (spec.truncate && rescaled > 2.0 * static_cast<double>(k) / spec.q) {
    out.values = d.values();
    out.truncated = true;
    return out;
  }
  out.values = d.values();
  for (std::size_t i = 0; i < k; ++i) out.values[i] += noise[i];
  return out;
}

}  // namespace ggdp

#endif  // GGDP_MECHANISMS_HPP_
