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

#ifndef GGDP_DISTRIBUTIONS_HPP_
#define GGDP_DISTRIBUTIONS_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ggdp/numeric.hpp"
#include "ggdp/random.hpp"

namespace ggdp {

// Parameters of the positive law with density b x^{a-1} e^{-x^b} / Gamma(a/b).
struct GGammaParams {
  double a;
  double b;

  GGammaParams(double a_in, double b_in) : a(a_in), b(b_in) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw std::invalid_argument("GGammaParams: need a > 0 and b > 0");
    }
  }
};

// A k-dimensional noise draw with lazily cached norms. Immutable after
// construction; safe to move between threads, not to share mid-computation.
class NoiseVector {
 public:
  explicit NoiseVector(std::vector<double> values)
      : values_(std::move(values)) {
    if (values_.empty()) {
      throw std::invalid_argument("NoiseVector: dimension must be >= 1");
    }
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // lp norm for p >= 1; cached per order.
  double norm(double p) const {
    auto it = norm_cache_.find(p);
    if (it != norm_cache_.end()) return it->second;
    const double value = lp_norm(values_, p);
    norm_cache_.emplace(p, value);
    return value;
  }

  double sup_norm() const {
    if (!sup_cache_) sup_cache_ = ggdp::sup_norm(values_);
    return *sup_cache_;
  }

  // Sum of |x_i|^p, compensated; computed fresh (guards want full precision).
  double power_sum(double p) const { return lp_power_sum(values_, p); }

  const std::map<double, double>& cached_norms() const { return norm_cache_; }

 private:
  friend NoiseVector sample_lp_sphere(std::size_t, double, double,
                                      RandomStream&);

  std::vector<double> values_;
  mutable std::map<double, double> norm_cache_;
  mutable std::optional<double> sup_cache_;
};

// Standard normal via the Marsaglia polar method. Exact (rejection, no
// approximation); consumes a variable number of uniforms.
inline double sample_standard_normal(RandomStream& stream) {
  for (;;) {
    const double u = 2.0 * stream.next_double() - 1.0;
    const double v = 2.0 * stream.next_double() - 1.0;
    const double q = u * u + v * v;
    if (q > 0.0 && q < 1.0) return u * std::sqrt(-2.0 * std::log(q) / q);
  }
}

// Gamma(shape) with unit rate, by Marsaglia-Tsang squeeze/rejection for
// shape >= 1 and the U^{1/shape} boost below 1. Exact for all shapes; the
// sub-1 branch matters because shape 1/p arises for every p > 1.
inline double sample_gamma(double shape, RandomStream& stream) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("sample_gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double u = stream.next_open_double();
    return sample_gamma(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_standard_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_open_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Laplace(scale) by inverse CDF.
inline double sample_laplace(double scale, RandomStream& stream) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("sample_laplace: scale must be positive");
  }
  const double u = stream.next_open_double() - 0.5;
  return u < 0.0 ? scale * std::log1p(2.0 * u) : -scale * std::log1p(-2.0 * u);
}

// One draw with density proportional to exp(-(|x|/sigma)^p), via the Gamma
// power transform: sign * sigma * G^{1/p} with G ~ Gamma(1/p).
inline double sample_univariate_ggauss(double p, double sigma,
                                       RandomStream& stream) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("sample_univariate_ggauss: need p >= 1");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sample_univariate_ggauss: need sigma > 0");
  }
  const double magnitude = sigma * std::pow(sample_gamma(1.0 / p, stream),
                                            1.0 / p);
  return stream.next_bool() ? magnitude : -magnitude;
}

// k iid coordinates; joint density proportional to exp(-(|x|_p / sigma)^p).
inline NoiseVector sample_ggauss_vector(std::size_t k, double p, double sigma,
                                        RandomStream& stream) {
  if (k < 1) throw std::invalid_argument("sample_ggauss_vector: need k >= 1");
  std::vector<double> values(k);
  for (auto& v : values) v = sample_univariate_ggauss(p, sigma, stream);
  return NoiseVector(std::move(values));
}

// GGamma(a, b) as G^{1/b} with G ~ Gamma(a/b).
inline double sample_ggamma(const GGammaParams& params, RandomStream& stream) {
  return std::pow(sample_gamma(params.a / params.b, stream), 1.0 / params.b);
}

// Point with |x|_p = radius, direction from a normalized GGauss draw (the
// factorized density makes the direction independent of the radius).
inline NoiseVector sample_lp_sphere(std::size_t k, double p, double radius,
                                    RandomStream& stream) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("sample_lp_sphere: radius must be positive");
  }
  for (;;) {
    NoiseVector direction = sample_ggauss_vector(k, p, 1.0, stream);
    const double nrm = direction.norm(p);
    if (nrm == 0.0) continue;  // measure-zero underflow; resample
    std::vector<double> values = direction.values();
    const double scale = radius / nrm;
    for (auto& v : values) v *= scale;
    NoiseVector out{std::move(values)};
    out.norm_cache_.emplace(p, radius);
    return out;
  }
}

// Law with density proportional to exp(-(|x|_p / sigma)^q) for 1 <= q <= p:
// radius sigma * Gamma(k/q)^{1/q} times an independent lp-sphere direction.
// Coordinates are dependent unless q = p.
inline NoiseVector sample_ggauss_pq_vector(std::size_t k, double p, double q,
                                           double sigma,
                                           RandomStream& stream) {
  if (!(q >= 1.0) || !(p >= q)) {
    throw std::invalid_argument("sample_ggauss_pq_vector: need 1 <= q <= p");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sample_ggauss_pq_vector: need sigma > 0");
  }
  const double radius =
      sigma *
      std::pow(sample_gamma(static_cast<double>(k) / q, stream), 1.0 / q);
  return sample_lp_sphere(k, p, radius, stream);
}

}  // namespace ggdp

#endif  // GGDP_DISTRIBUTIONS_HPP_
