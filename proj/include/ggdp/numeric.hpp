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

#ifndef GGDP_NUMERIC_HPP_
#define GGDP_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ggdp {

// Neumaier variant of compensated summation. Sums of k-th powers span many
// orders of magnitude for large exponents, so plain accumulation loses
// digits at k up to 2^20.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// |x|^p with an exact repeated-squaring path when p is a small integer.
inline double pow_abs(double x, double p) {
  const double ax = std::abs(x);
  const int ip = static_cast<int>(p);
  if (static_cast<double>(ip) == p && ip >= 1 && ip <= 64) {
    double base = ax;
    double result = 1.0;
    int e = ip;
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }
  return std::pow(ax, p);
}

// Sum of |x_i|^p with compensated accumulation.
inline double lp_power_sum(std::span<const double> values, double p) {
  CompensatedSum acc;
  for (double v : values) acc.add(pow_abs(v, p));
  return acc.value();
}

inline double lp_norm(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: order must be >= 1");
  return std::pow(lp_power_sum(values, p), 1.0 / p);
}

inline double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

// Welford accumulator for Monte Carlo means and standard errors.
class OnlineMoments {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }

  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }

  double std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Standard error of an empirical probability estimate.
inline double binomial_std_error(double p_hat, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) /
                   static_cast<double>(trials));
}

// Empirical quantile by sorting a copy; level in [0, 1].
inline double quantile(std::vector<double> samples, double level) {
  if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
  level = std::clamp(level, 0.0, 1.0);
  const std::size_t idx = std::min(
      samples.size() - 1,
      static_cast<std::size_t>(level * static_cast<double>(samples.size())));
  std::nth_element(samples.begin(), samples.begin() + idx, samples.end());
  return samples[idx];
}

// Least-squares slope and intercept of y against x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit fit_line(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate x");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace ggdp

#endif  // GGDP_NUMERIC_HPP_
