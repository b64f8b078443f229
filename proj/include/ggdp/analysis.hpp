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
// Monte Carlo estimators and deterministic quadrature checks for the tail
// bounds, moment identities and error guarantees the mechanisms rely on.
// Checks that involve a hidden asymptotic constant take it as a parameter;
// nothing here asserts a constant the analysis does not pin down.

#ifndef GGDP_ANALYSIS_HPP_
#define GGDP_ANALYSIS_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ggdp/calibration.hpp"
#include "ggdp/composed.hpp"
#include "ggdp/distributions.hpp"
#include "ggdp/mechanisms.hpp"
#include "ggdp/numeric.hpp"
#include "ggdp/quadrature.hpp"
#include "ggdp/random.hpp"
#include "ggdp/special_functions.hpp"

namespace ggdp {

// Verdict rules:
//   "empirical<=bound+3se"   an empirical quantity must sit below a bound
//   "estimate-2se<=target"   an estimated probability must meet a target
//   "quadrature<=bound"      deterministic, no randomness involved
//   "deterministic"          plain arithmetic comparison
// A failing verdict may be downgraded to informational with rule
// "constant_mismatch" when doubling the check's free constant makes it pass;
// a genuine shape violation never is.
struct BoundVerdict {
  std::string name;
  double empirical = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  std::string rule;
  bool pass = false;
  bool informational = false;
};

inline BoundVerdict one_sided_verdict(std::string name, double empirical,
                                      double bound, double std_error) {
  BoundVerdict v;
  v.name = std::move(name);
  v.empirical = empirical;
  v.bound = bound;
  v.std_error = std_error;
  v.rule = "empirical<=bound+3se";
  v.pass = empirical <= bound + 3.0 * std_error;
  return v;
}

struct SubGammaSpec {
  enum class Side { right, left };
  double variance_proxy = 1.0;
  double scale = 0.0;
  Side side = Side::right;
};

// Sub-gamma membership of the |x|^{p-1} summands in the privacy analysis:
// variance proxy is the mean 1/Gamma(1/p), scale 1 to the right and 3/2 to
// the left.
inline SubGammaSpec ggamma_subgamma_spec(int p, SubGammaSpec::Side side) {
  if (p < 2) throw std::invalid_argument("ggamma_subgamma_spec: need p >= 2");
  SubGammaSpec spec;
  spec.variance_proxy = 1.0 / std::tgamma(1.0 / static_cast<double>(p));
  spec.scale = side == SubGammaSpec::Side::right ? 1.0 : 1.5;
  spec.side = side;
  return spec;
}

struct NormSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

inline NormSummary summarize(const std::vector<double>& samples) {
  OnlineMoments m;
  for (double v : samples) m.add(v);
  NormSummary s;
  s.mean = m.mean();
  s.std_error = m.std_error();
  s.median = quantile(samples, 0.5);
  s.q90 = quantile(samples, 0.9);
  s.q99 = quantile(samples, 0.99);
  return s;
}

// Monte Carlo summary of the error d~ - d under a mechanism, in the norms
// the guarantees speak about: l1/k, lq/k^{1/q}, lp, linf.
struct ErrorReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double p = 4.0;
  double q = 2.0;
  NormSummary l1_per_k;
  NormSummary lq_normalized;
  NormSummary lp;
  NormSummary linf;
  double truncation_rate = 0.0;
  std::vector<BoundVerdict> bound_verdicts;
};

using MechanismFn =
    std::function<MechanismOutput(const QueryAnswers&, RandomStream&)>;

inline ErrorReport estimate_error_norms(const MechanismFn& mechanism,
                                        const QueryAnswers& d, double p,
                                        double q, std::size_t trials,
                                        RandomStream& stream) {
  if (trials < 100) {
    throw std::invalid_argument("estimate_error_norms: need trials >= 100");
  }
  const std::size_t k = d.dim();
  const double kd = static_cast<double>(k);
  std::vector<double> l1(trials), lq(trials), lp_(trials), linf(trials);
  std::size_t truncations = 0;
  std::vector<double> error(k);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const MechanismOutput out = mechanism(d, child);
    if (out.truncated) ++truncations;
    for (std::size_t i = 0; i < k; ++i) {
      error[i] = out.values[i] - d.values()[i];
    }
    l1[trial] = lp_power_sum(error, 1.0) / kd;
    lq[trial] = lp_norm(error, q) / std::pow(kd, 1.0 / q);
    lp_[trial] = lp_norm(error, p);
    linf[trial] = sup_norm(error);
  }
  ErrorReport report;
  report.trials = trials;
  report.seed = stream.seed();
  report.p = p;
  report.q = q;
  report.l1_per_k = summarize(l1);
  report.lq_normalized = summarize(lq);
  report.lp = summarize(lp_);
  report.linf = summarize(linf);
  report.truncation_rate =
      static_cast<double>(truncations) / static_cast<double>(trials);
  return report;
}

// Pr[|x_1| >= r |x|_p] on the lp-sphere against both forms of the cap
// bound: (1 - r^p)^{(k-1)/p} and exp(-(k-1) r^p / p).
inline std::vector<BoundVerdict> sphere_cap_check(
    std::size_t k, double p, const std::vector<double>& r_grid,
    std::size_t trials, RandomStream& stream) {
  std::vector<std::size_t> hits(r_grid.size(), 0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const NoiseVector x = sample_lp_sphere(k, p, 1.0, child);
    const double a = std::abs(x[0]);
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
      if (a >= r_grid[j]) ++hits[j];
    }
  }
  const double exponent = (static_cast<double>(k) - 1.0) / p;
  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < r_grid.size(); ++j) {
    const double r = r_grid[j];
    const double p_hat =
        static_cast<double>(hits[j]) / static_cast<double>(trials);
    const double se = binomial_std_error(p_hat, trials);
    verdicts.push_back(one_sided_verdict(
        "sphere_cap[r=" + std::to_string(r) + "]", p_hat,
        std::pow(1.0 - pow_abs(r, p), exponent), se));
    verdicts.push_back(one_sided_verdict(
        "sphere_cap_exp[r=" + std::to_string(r) + "]", p_hat,
        std::exp(-exponent * pow_abs(r, p)), se));
  }
  return verdicts;
}

// Pr[|x|_inf >= r |x|_p] against the union bound k exp(-(k-1) r^p / p);
// recorded even where the bound is vacuous (> 1).
inline std::vector<BoundVerdict> linf_union_check(
    std::size_t k, double p, const std::vector<double>& r_grid,
    std::size_t trials, RandomStream& stream) {
  std::vector<std::size_t> hits(r_grid.size(), 0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const NoiseVector x = sample_lp_sphere(k, p, 1.0, child);
    const double m = x.sup_norm();
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
      if (m >= r_grid[j]) ++hits[j];
    }
  }
  const double exponent = (static_cast<double>(k) - 1.0) / p;
  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < r_grid.size(); ++j) {
    const double r = r_grid[j];
    const double p_hat =
        static_cast<double>(hits[j]) / static_cast<double>(trials);
    verdicts.push_back(one_sided_verdict(
        "linf_union[r=" + std::to_string(r) + "]", p_hat,
        static_cast<double>(k) * std::exp(-exponent * pow_abs(r, p)),
        binomial_std_error(p_hat, trials)));
  }
  return verdicts;
}

struct TailEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  bool pass = false;
};

// Monte Carlo estimate of Pr[(|x - D|_p^p - |x|_p^p) / sigma^p > eps] for
// x drawn at scale sigma and a shift D with |D|_inf <= 1. Passes when the
// estimate minus two standard errors is at most delta.
inline TailEstimate privacy_loss_tail(std::size_t k, int p, double sigma,
                                      double eps, double delta,
                                      const std::vector<double>& shift,
                                      std::size_t trials,
                                      RandomStream& stream) {
  if (shift.size() != k) {
    throw std::invalid_argument("privacy_loss_tail: shift dimension mismatch");
  }
  for (double s : shift) {
    if (!(std::abs(s) <= 1.0)) {
      throw std::invalid_argument("privacy_loss_tail: need |shift|_inf <= 1");
    }
  }
  const double pd = static_cast<double>(p);
  std::size_t violations = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    CompensatedSum loss;
    for (std::size_t i = 0; i < k; ++i) {
      const double z = sample_univariate_ggauss(pd, 1.0, child);
      loss.add(pow_abs(z - shift[i] / sigma, pd) - pow_abs(z, pd));
    }
    if (loss.value() > eps) ++violations;
  }
  TailEstimate result;
  result.estimate =
      static_cast<double>(violations) / static_cast<double>(trials);
  result.std_error = binomial_std_error(result.estimate, trials);
  result.target = delta;
  result.pass = result.estimate - 2.0 * result.std_error <= delta;
  return result;
}

// Deterministic check of E[exp(+-lambda(Y - mu))] <= exp(lambda^2 v /
// (2 (1 - c lambda))) for Y ~ GGamma(1/(p-1), p/(p-1)), by quadrature.
inline std::vector<BoundVerdict> mgf_subgamma_check(
    int p, const SubGammaSpec& spec, const std::vector<double>& lambda_grid,
    double quadrature_tol = 1e-8) {
  if (p < 2) throw std::invalid_argument("mgf_subgamma_check: need p >= 2");
  const double a = 1.0 / (static_cast<double>(p) - 1.0);
  const double b = static_cast<double>(p) / (static_cast<double>(p) - 1.0);
  const double mu = ggamma_moment(a, b, 1.0);
  const bool left = spec.side == SubGammaSpec::Side::left;
  std::vector<BoundVerdict> verdicts;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0) ||
        (spec.scale > 0.0 && !(lambda < 1.0 / spec.scale))) {
      throw std::invalid_argument(
          "mgf_subgamma_check: lambda outside (0, 1/c)");
    }
    const double sign = left ? -1.0 : 1.0;
    const double mgf = ggamma_expectation(
        a, b,
        [&](double y) { return std::exp(sign * lambda * (y - mu)); },
        quadrature_tol);
    const double bound = std::exp(lambda * lambda * spec.variance_proxy /
                                  (2.0 * (1.0 - spec.scale * lambda)));
    BoundVerdict v;
    v.name = std::string(left ? "mgf_left" : "mgf_right") + "[p=" +
             std::to_string(p) + ",lambda=" + std::to_string(lambda) + "]";
    v.empirical = mgf;
    v.bound = bound;
    v.std_error = 0.0;
    v.rule = "quadrature<=bound";
    v.pass = mgf <= bound * (1.0 + quadrature_tol);
    verdicts.push_back(v);
  }
  return verdicts;
}

// Moment identity E[Y^r] = Gamma((a+r)/b) / Gamma(a/b), Monte Carlo flavor.
inline std::vector<BoundVerdict> ggamma_moment_check(
    double a, double b, const std::vector<double>& r_set, std::size_t trials,
    RandomStream& stream) {
  const GGammaParams params(a, b);
  std::vector<OnlineMoments> stats(r_set.size());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const double y = sample_ggamma(params, stream);
    for (std::size_t j = 0; j < r_set.size(); ++j) {
      stats[j].add(std::pow(y, r_set[j]));
    }
  }
  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < r_set.size(); ++j) {
    const double expected = ggamma_moment(a, b, r_set[j]);
    BoundVerdict v;
    v.name = "ggamma_moment_mc[r=" + std::to_string(r_set[j]) + "]";
    v.empirical = stats[j].mean();
    v.bound = expected;
    v.std_error = stats[j].std_error();
    v.rule = "abs(empirical-bound)<=5se";
    v.pass = std::abs(v.empirical - expected) <= 5.0 * v.std_error;
    verdicts.push_back(v);
  }
  return verdicts;
}

// Moment identity, deterministic quadrature flavor.
inline std::vector<BoundVerdict> ggamma_moment_check(
    double a, double b, const std::vector<double>& r_set,
    double rel_tol = 1e-6) {
  std::vector<BoundVerdict> verdicts;
  for (double r : r_set) {
    const double numeric =
        ggamma_expectation(a, b, [r](double y) { return std::pow(y, r); },
                           1e-9);
    const double expected = ggamma_moment(a, b, r);
    BoundVerdict v;
    v.name = "ggamma_moment_quad[r=" + std::to_string(r) + "]";
    v.empirical = numeric;
    v.bound = expected;
    v.std_error = 0.0;
    v.rule = "quadrature_rel_err<=1e-6";
    v.pass = std::abs(numeric - expected) <= rel_tol * std::abs(expected);
    verdicts.push_back(v);
  }
  return verdicts;
}

// 1/p <= 1/Gamma(1/p) <= 1.2/p for every integer p in [p_min, p_max].
inline std::vector<BoundVerdict> mu_bounds_check(int p_min, int p_max) {
  if (p_min < 2 || p_max < p_min) {
    throw std::invalid_argument("mu_bounds_check: need 2 <= p_min <= p_max");
  }
  std::vector<BoundVerdict> verdicts;
  for (int p = p_min; p <= p_max; ++p) {
    const double pd = static_cast<double>(p);
    const double mu = 1.0 / std::tgamma(1.0 / pd);
    BoundVerdict v;
    v.name = "mu_bounds[p=" + std::to_string(p) + "]";
    v.empirical = mu;
    v.bound = 1.2 / pd;
    v.std_error = 0.0;
    v.rule = "1/p<=value<=1.2/p";
    v.pass = (1.0 / pd <= mu) && (mu <= 1.2 / pd);
    verdicts.push_back(v);
  }
  return verdicts;
}

// Bernstein-form tail of a sub-gamma variable: exceedance of
// E + sqrt(2 v t) + c t (right) or the mirrored event (left) at most e^{-t}.
inline std::vector<BoundVerdict> gamma_tail_check(
    const SubGammaSpec& spec, double expectation,
    const std::function<double(RandomStream&)>& sampler,
    const std::vector<double>& t_grid, std::size_t trials,
    RandomStream& stream) {
  std::vector<std::size_t> hits(t_grid.size(), 0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const double x = sampler(child);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      const double slack = std::sqrt(2.0 * spec.variance_proxy * t_grid[j]) +
                           spec.scale * t_grid[j];
      const bool hit = spec.side == SubGammaSpec::Side::right
                           ? x > expectation + slack
                           : x < expectation - slack;
      if (hit) ++hits[j];
    }
  }
  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double p_hat =
        static_cast<double>(hits[j]) / static_cast<double>(trials);
    verdicts.push_back(one_sided_verdict(
        std::string(spec.side == SubGammaSpec::Side::right ? "subgamma_right"
                                                           : "subgamma_left") +
            "[t=" + std::to_string(t_grid[j]) + "]",
        p_hat, std::exp(-t_grid[j]), binomial_std_error(p_hat, trials)));
  }
  return verdicts;
}

namespace internal {

// Downgrades a failed bound verdict to informational "constant_mismatch"
// when the same data passes with the free constant doubled; a failure that
// survives doubling stays a hard shape violation.
inline void classify_constant_failure(BoundVerdict& v,
                                      double empirical_at_doubled_constant) {
  if (v.pass) return;
  if (empirical_at_doubled_constant <= v.bound + 3.0 * v.std_error) {
    v.rule = "constant_mismatch";
    v.informational = true;
  } else {
    v.rule = "shape_violation";
  }
}

}  // namespace internal

// Tail of the worst-coordinate error of the shape-p mechanism at thresholds
// c t sqrt(k p) (ln k)^{1/p} sqrt(ln(1/delta)) / eps against
// e^{-t^p ln k} (+ e^{-.001 k / p} when the guard is off).
inline std::vector<BoundVerdict> mechanism_linf_tail_check(
    std::size_t k, int p, const PrivacyBudget& budget,
    const std::vector<double>& t_grid, std::size_t trials, double c_const,
    bool truncate, RandomStream& stream) {
  const double kd = static_cast<double>(k);
  const double pd = static_cast<double>(p);
  const double sigma = calibrate_sigma_ggauss(k, p, budget);
  MechanismSpec spec;
  spec.family = MechanismFamily::ggauss;
  spec.p = pd;
  spec.sigma = sigma;
  spec.truncate = truncate;
  const QueryAnswers zero(std::vector<double>(k, 0.0));

  const auto threshold = [&](double t, double c) {
    return c * t * std::sqrt(kd * pd) * std::pow(std::log(kd), 1.0 / pd) *
           std::sqrt(std::log(1.0 / budget.delta)) / budget.epsilon;
  };

  std::vector<std::size_t> hits(t_grid.size(), 0);
  std::vector<std::size_t> hits_doubled(t_grid.size(), 0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const MechanismOutput out = ggauss_mechanism(zero, spec, child);
    const double err = sup_norm(out.values);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      if (err >= threshold(t_grid[j], c_const)) ++hits[j];
      if (err >= threshold(t_grid[j], 2.0 * c_const)) ++hits_doubled[j];
    }
  }

  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    const double p_hat =
        static_cast<double>(hits[j]) / static_cast<double>(trials);
    double bound = std::exp(-pow_abs(t, pd) * std::log(kd));
    if (!truncate) bound += std::exp(-0.001 * kd / pd);
    BoundVerdict v = one_sided_verdict(
        "mechanism_linf_tail[t=" + std::to_string(t) + "]", p_hat, bound,
        binomial_std_error(p_hat, trials));
    internal::classify_constant_failure(
        v, static_cast<double>(hits_doubled[j]) / static_cast<double>(trials));
    verdicts.push_back(v);
  }
  return verdicts;
}

// Composed-mechanism analogue: Pr[|d~ - d|_inf >= alpha_SV(t)] against
// e^{-(ln k)^t}. The threshold is the composition's own accuracy parameter.
// t = 0 is excluded (it makes the sparse-vector accuracy target zero).
inline std::vector<BoundVerdict> composed_tail_check(
    std::size_t k, int p, const PrivacyBudget& budget,
    const std::vector<double>& t_grid, std::size_t trials,
    RandomStream& stream) {
  const QueryAnswers zero(std::vector<double>(k, 0.0));
  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    if (!(t > 0.0)) {
      throw std::invalid_argument("composed_tail_check: need t > 0");
    }
    const ComposedParams params = calibrate_composed(k, p, budget, t);
    std::size_t hits = 0;
    RandomStream grid_stream = stream.split(j);
    for (std::size_t trial = 0; trial < trials; ++trial) {
      RandomStream child = grid_stream.split(trial);
      const ComposedRun run =
          composed_mechanism(zero, p, budget, t, ComposedOptions{}, child);
      if (sup_norm(run.output.values) >= params.alpha_sv) ++hits;
    }
    const double p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    verdicts.push_back(one_sided_verdict(
        "composed_linf_tail[t=" + std::to_string(t) + "]", p_hat,
        std::exp(-std::pow(std::log(static_cast<double>(k)), t)),
        binomial_std_error(p_hat, trials)));
  }
  return verdicts;
}

// Unconditional lq chain under the truncation guard: the mean of
// |x|_q / k^{1/q} stays below k^{-1/p} (2k/p)^{1/p} sigma.
inline std::vector<BoundVerdict> lq_chain_check(std::size_t k, int p,
                                                double sigma,
                                                const std::vector<double>& qs,
                                                std::size_t trials,
                                                RandomStream& stream) {
  const double kd = static_cast<double>(k);
  const double pd = static_cast<double>(p);
  MechanismSpec spec;
  spec.family = MechanismFamily::ggauss;
  spec.p = pd;
  spec.sigma = sigma;
  spec.truncate = true;
  const QueryAnswers zero(std::vector<double>(k, 0.0));
  std::vector<OnlineMoments> stats(qs.size());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const MechanismOutput out = ggauss_mechanism(zero, spec, child);
    for (std::size_t j = 0; j < qs.size(); ++j) {
      stats[j].add(lp_norm(out.values, qs[j]) / std::pow(kd, 1.0 / qs[j]));
    }
  }
  const double cap =
      std::pow(2.0 * kd / pd, 1.0 / pd) * sigma * std::pow(kd, -1.0 / pd);
  std::vector<BoundVerdict> verdicts;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    verdicts.push_back(one_sided_verdict(
        "lq_chain[q=" + std::to_string(qs[j]) + "]", stats[j].mean(), cap,
        stats[j].std_error()));
  }
  return verdicts;
}

// Paired check of E|x|_inf <= 5 (ln k)^{1/p} k^{-1/p} E|x|_p for shape-p
// noise, via the per-trial difference linf - factor * lp.
inline BoundVerdict linf_expectation_check(std::size_t k, int p, double sigma,
                                           std::size_t trials,
                                           RandomStream& stream) {
  const double kd = static_cast<double>(k);
  const double pd = static_cast<double>(p);
  const double factor =
      5.0 * std::pow(std::log(kd), 1.0 / pd) * std::pow(kd, -1.0 / pd);
  OnlineMoments diff;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream child = stream.split(trial);
    const NoiseVector x = sample_ggauss_vector(k, pd, sigma, child);
    diff.add(x.sup_norm() - factor * x.norm(pd));
  }
  BoundVerdict v;
  v.name = "linf_expectation[k=" + std::to_string(k) + "]";
  v.empirical = diff.mean();
  v.bound = 0.0;
  v.std_error = diff.std_error();
  v.rule = "empirical<=bound+3se";
  v.pass = diff.mean() <= 3.0 * diff.std_error();
  return v;
}

}  // namespace ggdp

#endif  // GGDP_ANALYSIS_HPP_
