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

#ifndef GGDP_COMPOSED_HPP_
#define GGDP_COMPOSED_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ggdp/calibration.hpp"
#include "ggdp/distributions.hpp"
#include "ggdp/mechanisms.hpp"
#include "ggdp/random.hpp"
#include "ggdp/sparse_vector.hpp"

namespace ggdp {

// One run of the noise + sparse-vector composition. Non-truncated runs
// satisfy output = d + noise - sv_correction coordinatewise.
struct ComposedRun {
  ComposedParams params;
  bool truncated = false;
  NoiseVector noise;
  std::vector<double> sv_correction;
  MechanismOutput output;
};

struct ComposedOptions {
  double c_sigma = 1.0;
  LogBase log_base = LogBase::natural;
};

inline SvConfig sv_config_from(const ComposedParams& params) {
  return SvConfig::derive(params.alpha_sv, params.c_sv, params.eps_sv,
                          params.delta_sv, params.beta_sv);
}

// Exact count of coordinates with |x_i| > threshold.
inline std::size_t count_large_coordinates(const NoiseVector& x,
                                           double threshold) {
  std::size_t count = 0;
  for (double v : x.values()) {
    if (std::abs(v) > threshold) ++count;
  }
  return count;
}

// Samples x from the shape-p noise law, releases d unchanged when the noise
// norm exceeds the guard, and otherwise corrects the large entries of x
// through the sparse-vector mechanism: output d + x - x_hat.
inline ComposedRun composed_mechanism(const QueryAnswers& d, int p,
                                      const PrivacyBudget& budget, double t,
                                      const ComposedOptions& options,
                                      RandomStream& stream) {
  const std::size_t k = d.dim();
  const ComposedParams params =
      calibrate_composed(k, p, budget, t, options.c_sigma, options.log_base);

  NoiseVector noise = sample_ggauss_vector(k, static_cast<double>(p),
                                           params.sigma, stream);
  const double guard = (2.0 * static_cast<double>(k) / static_cast<double>(p)) *
                       pow_abs(params.sigma, static_cast<double>(p));
  if (noise.power_sum(static_cast<double>(p)) > guard) {
    MechanismOutput out;
    out.values = d.values();
    out.truncated = true;
    out.noise_norm_p = noise.norm(static_cast<double>(p));
    return ComposedRun{params, true, std::move(noise),
                       std::vector<double>(k, 0.0), std::move(out)};
  }

  std::vector<double> correction =
      numeric_sparse(noise.values(), sv_config_from(params), stream);
  MechanismOutput out;
  out.noise_norm_p = noise.norm(static_cast<double>(p));
  out.values = d.values();
  for (std::size_t i = 0; i < k; ++i) {
    out.values[i] += noise[i] - correction[i];
  }
  return ComposedRun{params, false, std::move(noise), std::move(correction),
                     std::move(out)};
}

}  // namespace ggdp

#endif  // GGDP_COMPOSED_HPP_
