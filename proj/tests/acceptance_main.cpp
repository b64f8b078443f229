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
// Acceptance gate: one self-contained check per release criterion, each
// printing a single pass/fail line. Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ggdp/ggdp.hpp"

namespace {

int g_failures = 0;

void report(int number, bool pass, const std::string& description,
            const std::string& detail) {
  std::printf("[%s] criterion %02d: %s (%s)\n", pass ? "PASS" : "FAIL",
              number, description.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed_seconds(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// 1. Moments of the power-transformed sampler match the closed form.
void criterion_sampler_moments() {
  const auto start = std::chrono::steady_clock::now();
  ggdp::RandomStream stream(1001);
  const ggdp::GGammaParams params(1.0 / 3.0, 4.0 / 3.0);
  std::vector<ggdp::OnlineMoments> stats(3);
  for (int i = 0; i < 1000000; ++i) {
    const double y = ggdp::sample_ggamma(params, stream);
    stats[0].add(y);
    stats[1].add(y * y);
    stats[2].add(y * y * y);
  }
  bool pass = true;
  char detail[256];
  std::string detail_all;
  for (int r = 1; r <= 3; ++r) {
    const double expected = ggdp::ggamma_moment(1.0 / 3.0, 4.0 / 3.0, r);
    const double got = stats[r - 1].mean();
    const double se = stats[r - 1].std_error();
    if (std::abs(got - expected) > 5.0 * se) pass = false;
    std::snprintf(detail, sizeof(detail), "r=%d: %.5f vs %.5f (se %.2g); ", r,
                  got, expected, se);
    detail_all += detail;
  }
  const double secs = elapsed_seconds(start);
  if (secs >= 30.0) pass = false;
  std::snprintf(detail, sizeof(detail), "%.1fs", secs);
  detail_all += detail;
  report(1, pass, "GGamma moment identity at 1e6 draws within 5 se, <30s",
         detail_all);
}

// 2. 1/p <= 1/Gamma(1/p) <= 1.2/p for all integer p in [2, 64].
void criterion_mu_bounds() {
  const auto verdicts = ggdp::mu_bounds_check(2, 64);
  bool pass = true;
  for (const auto& v : verdicts) {
    if (!v.pass) pass = false;
  }
  report(2, pass, "mean bounds 1/p <= 1/Gamma(1/p) <= 1.2/p for p in [2,64]",
         std::to_string(verdicts.size()) + " shapes checked");
}

// 3. Sub-gamma MGF domination by quadrature, both sides, p in {4, 6, 8}.
void criterion_mgf() {
  bool pass = true;
  int checks = 0;
  for (int p : {4, 6, 8}) {
    const auto right = ggdp::mgf_subgamma_check(
        p, ggdp::ggamma_subgamma_spec(p, ggdp::SubGammaSpec::Side::right),
        {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    const auto left = ggdp::mgf_subgamma_check(
        p, ggdp::ggamma_subgamma_spec(p, ggdp::SubGammaSpec::Side::left),
        {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    for (const auto& v : right) {
      ++checks;
      if (!v.pass) pass = false;
    }
    for (const auto& v : left) {
      ++checks;
      if (!v.pass) pass = false;
    }
  }
  report(3, pass, "sub-gamma MGF domination by quadrature at 1e-8 tolerance",
         std::to_string(checks) + " (p, lambda, side) points");
}

// 4. (|x|_p / sigma)^p has Gamma(k/p) mean within 1% and variance within 3%.
void criterion_radius_law() {
  bool pass = true;
  std::string detail_all;
  char detail[128];
  int idx = 0;
  for (const std::size_t k : {std::size_t{64}, std::size_t{256}}) {
    for (const int p : {4, 8}) {
      ggdp::RandomStream stream(1100 + idx++);
      ggdp::OnlineMoments m;
      for (int i = 0; i < 100000; ++i) {
        const ggdp::NoiseVector x =
            ggdp::sample_ggauss_vector(k, p, 1.0, stream);
        m.add(x.power_sum(p));
      }
      const double target = static_cast<double>(k) / p;
      const bool mean_ok = std::abs(m.mean() - target) <= 0.01 * target;
      const bool var_ok = std::abs(m.variance() - target) <= 0.03 * target;
      if (!mean_ok || !var_ok) pass = false;
      std::snprintf(detail, sizeof(detail), "k=%zu p=%d: %.3f/%.3f; ", k, p,
                    m.mean(), m.variance());
      detail_all += detail;
    }
  }
  report(4, pass, "radius law mean within 1% and variance within 3% at 1e5",
         detail_all);
}

// 5. Sphere-cap bound grid at 1e6 draws, plus the exact circle case.
void criterion_sphere_cap() {
  bool pass = true;
  std::string detail_all;
  for (const int p : {2, 4}) {
    ggdp::RandomStream stream(1200 + p);
    const auto verdicts = ggdp::sphere_cap_check(
        50, p, {0.2, 0.3, 0.4, 0.5, 0.7}, 1000000, stream);
    for (const auto& v : verdicts) {
      if (!v.pass) {
        pass = false;
        detail_all += v.name + " failed; ";
      }
    }
  }
  ggdp::RandomStream circle(1299);
  std::size_t hits = 0;
  const std::size_t trials = 1000000;
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < trials; ++i) {
    const ggdp::NoiseVector x = ggdp::sample_lp_sphere(2, 2.0, 1.0, circle);
    if (std::abs(x[0]) >= r) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / trials;
  if (std::abs(p_hat - 0.5) > 0.002) pass = false;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "circle case %.4f vs 0.500", p_hat);
  report(5, pass, "sphere-cap bound at k=50 (p=2,4) and exact circle case",
         detail_all + detail);
}

// 6. E|x|_inf <= 5 (ln k)^{1/4} k^{-1/4} E|x|_4 + 3 se for k in {256, 4096}.
void criterion_linf_expectation() {
  bool pass = true;
  std::string detail_all;
  char detail[128];
  int idx = 0;
  for (const std::size_t k : {std::size_t{256}, std::size_t{4096}}) {
    ggdp::RandomStream stream(1300 + idx++);
    const std::size_t trials = k <= 256 ? 20000 : 5000;
    const ggdp::BoundVerdict v =
        ggdp::linf_expectation_check(k, 4, 1.0, trials, stream);
    if (!v.pass) pass = false;
    std::snprintf(detail, sizeof(detail), "k=%zu diff=%.4g (se %.2g); ", k,
                  v.empirical, v.std_error);
    detail_all += detail;
  }
  report(6, pass, "worst-coordinate expectation bound at k in {256, 4096}",
         detail_all);
}

// 7. Privacy-loss tail at the empirically calibrated and analytic scales.
void criterion_empirical_privacy() {
  const std::size_t k = 64;
  const int p = 4;
  const ggdp::PrivacyBudget budget(1.0, 0.01);
  const std::vector<double> ones(k, 1.0);

  ggdp::RandomStream cal_stream(1401);
  const double sigma_emp =
      ggdp::empirical_calibrate(k, p, budget, 100000, cal_stream);
  ggdp::RandomStream s1(1402);
  const ggdp::TailEstimate emp = ggdp::privacy_loss_tail(
      k, p, sigma_emp, 1.0, 0.01, ones, 100000, s1);

  const double sigma_analytic = ggdp::calibrate_sigma_ggauss(k, p, budget, 4.0);
  ggdp::RandomStream s2(1403);
  const ggdp::TailEstimate ana = ggdp::privacy_loss_tail(
      k, p, sigma_analytic, 1.0, 0.01, ones, 100000, s2);

  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "sigma_emp=%.2f est=%.2g; sigma_c4=%.2f est=%.2g", sigma_emp,
                emp.estimate, sigma_analytic, ana.estimate);
  report(7, emp.pass && ana.pass,
         "privacy-loss tail below delta at both calibrated scales", detail);
}

// 8. Reduction equivalences by two-sample KS at 1e6 draws.
void criterion_reductions() {
  bool pass = true;
  std::string detail_all;
  char detail[128];
  const std::size_t n = 1000000;
  const double crit = std::sqrt(-std::log(0.0005) / 2.0) *
                      std::sqrt(2.0 / static_cast<double>(n));
  {
    ggdp::RandomStream sa(1501), sb(1502);
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = ggdp::sample_univariate_ggauss(1.0, 2.0, sa);
    for (auto& v : b) v = ggdp::sample_laplace(2.0, sb);
    const double d = ggdp::internal::ks_two_sample_statistic(std::move(a),
                                                             std::move(b));
    if (d >= 0.003) pass = false;
    std::snprintf(detail, sizeof(detail), "p1-laplace %.5f<0.003; ", d);
    detail_all += detail;
  }
  {
    ggdp::RandomStream sa(1503), sb(1504);
    std::vector<double> a(n), b(n);
    for (auto& v : a) {
      v = ggdp::sample_univariate_ggauss(2.0, std::sqrt(2.0), sa);
    }
    for (auto& v : b) v = ggdp::sample_standard_normal(sb);
    const double d = ggdp::internal::ks_two_sample_statistic(std::move(a),
                                                             std::move(b));
    if (d >= crit) pass = false;
    std::snprintf(detail, sizeof(detail), "p2-normal %.5f<%.5f; ", d, crit);
    detail_all += detail;
  }
  {
    const std::size_t k = 8;
    ggdp::RandomStream sa(1505), sb(1506);
    std::vector<double> na(n), nb(n), fa(n), fb(n);
    for (std::size_t i = 0; i < n; ++i) {
      const ggdp::NoiseVector a =
          ggdp::sample_ggauss_pq_vector(k, 4.0, 4.0, 1.0, sa);
      const ggdp::NoiseVector b = ggdp::sample_ggauss_vector(k, 4.0, 1.0, sb);
      na[i] = a.norm(4.0);
      nb[i] = b.norm(4.0);
      fa[i] = a[0];
      fb[i] = b[0];
    }
    const double dn = ggdp::internal::ks_two_sample_statistic(std::move(na),
                                                              std::move(nb));
    const double df = ggdp::internal::ks_two_sample_statistic(std::move(fa),
                                                              std::move(fb));
    if (dn >= crit || df >= crit) pass = false;
    std::snprintf(detail, sizeof(detail), "qp norm %.5f, coord %.5f", dn, df);
    detail_all += detail;
  }
  report(8, pass, "reduction equivalences by KS at significance 1e-3",
         detail_all);
}

// 9. Sparse-vector contract: accuracy and exact zeros.
void criterion_sparse_vector() {
  const std::size_t k = 1000;
  const ggdp::SvConfig config =
      ggdp::SvConfig::for_queries(k, 8, 1.0, 0.01, 0.05);
  std::vector<double> d(k, 0.0);
  for (int i = 0; i < 5; ++i) d[137 * (i + 1)] = 10.0 * config.alpha;
  ggdp::RandomStream stream(1601);
  const std::size_t trials = 10000;
  std::size_t misses = 0;
  bool zeros_exact = true;
  bool budget_ok = true;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ggdp::RandomStream child = stream.split(trial);
    const std::vector<double> out = ggdp::numeric_sparse(d, config, child);
    double err = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < k; ++i) {
      err = std::max(err, std::abs(out[i] - d[i]));
      if (out[i] != 0.0) {
        ++nonzero;
      } else if (std::signbit(out[i])) {
        zeros_exact = false;  // suppressed entries are bit-exact +0
      }
    }
    if (nonzero > config.budget_count) budget_ok = false;
    if (err >= config.alpha) ++misses;
  }
  const double p_hat = static_cast<double>(misses) / trials;
  const double bound =
      config.beta + 3.0 * ggdp::binomial_std_error(p_hat, trials);
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "miss rate %.4g <= %.4g; zeros exact %s; budget %s", p_hat,
                bound, zeros_exact ? "yes" : "no", budget_ok ? "yes" : "no");
  report(9, p_hat <= bound && zeros_exact && budget_ok,
         "sparse-vector accuracy and exact below-threshold zeros", detail);
}

// 10. Composed mechanism end to end at k = 4096.
void criterion_composed() {
  const std::size_t k = 4096;
  const int p = 4;
  const ggdp::PrivacyBudget budget(1.0, 1e-4);
  const double t = 1.0;
  const ggdp::ComposedParams params =
      ggdp::calibrate_composed(k, p, budget, t);
  const ggdp::QueryAnswers d(std::vector<double>(k, 0.0));
  ggdp::RandomStream stream(1701);
  const std::size_t trials = 10000;
  std::size_t truncations = 0, count_over = 0, misses = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ggdp::RandomStream child = stream.split(trial);
    const ggdp::ComposedRun run = ggdp::composed_mechanism(
        d, p, budget, t, ggdp::ComposedOptions{}, child);
    if (run.truncated) ++truncations;
    if (ggdp::count_large_coordinates(run.noise, params.alpha_sv / 2.0) >
        params.c_sv) {
      ++count_over;
    }
    if (ggdp::sup_norm(run.output.values) >= params.alpha_sv) ++misses;
  }
  const double trunc_rate = static_cast<double>(truncations) / trials;
  const double count_rate = static_cast<double>(count_over) / trials;
  const double miss_rate = static_cast<double>(misses) / trials;
  const double trunc_bound =
      std::exp(-0.001 * static_cast<double>(k) / p) +
      3.0 * ggdp::binomial_std_error(trunc_rate, trials);
  const double miss_bound = params.beta_sv + count_rate +
                            3.0 * ggdp::binomial_std_error(miss_rate, trials);
  const bool pass = trunc_rate <= trunc_bound && count_rate <= 0.01 &&
                    miss_rate <= miss_bound;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "trunc %.2g<=%.2g; count>c_sv %.2g<=0.01; miss %.2g<=%.2g",
                trunc_rate, trunc_bound, count_rate, miss_rate, miss_bound);
  report(10, pass, "composed mechanism truncation/count/accuracy bounds",
         detail);
}

// 11. Mean l1/k error scales like sqrt(p) and sqrt(k).
void criterion_scaling() {
  const ggdp::PrivacyBudget budget(1.0, 1e-3);
  std::vector<double> log_x, log_y;
  ggdp::RandomStream stream(1801);
  std::size_t idx = 0;
  for (const int p : {4, 8, 16}) {
    ggdp::MechanismSpec spec;
    spec.p = p;
    spec.sigma = ggdp::calibrate_sigma_ggauss(1024, p, budget);
    const ggdp::QueryAnswers d(std::vector<double>(1024, 0.0));
    ggdp::RandomStream child = stream.split(idx++);
    const auto mech = [&spec](const ggdp::QueryAnswers& q,
                              ggdp::RandomStream& r) {
      return ggdp::ggauss_mechanism(q, spec, r);
    };
    const ggdp::ErrorReport report_p =
        ggdp::estimate_error_norms(mech, d, p, 2.0, 300, child);
    log_x.push_back(std::log(static_cast<double>(p)));
    log_y.push_back(std::log(report_p.l1_per_k.mean));
  }
  const double slope_p = ggdp::fit_line(log_x, log_y).slope;

  log_x.clear();
  log_y.clear();
  for (const std::size_t k :
       {std::size_t{256}, std::size_t{1024}, std::size_t{4096}}) {
    ggdp::MechanismSpec spec;
    spec.p = 4.0;
    spec.sigma = ggdp::calibrate_sigma_ggauss(k, 4, budget);
    const ggdp::QueryAnswers d(std::vector<double>(k, 0.0));
    ggdp::RandomStream child = stream.split(idx++);
    const auto mech = [&spec](const ggdp::QueryAnswers& q,
                              ggdp::RandomStream& r) {
      return ggdp::ggauss_mechanism(q, spec, r);
    };
    const ggdp::ErrorReport report_k =
        ggdp::estimate_error_norms(mech, d, 4.0, 2.0, 300, child);
    log_x.push_back(std::log(static_cast<double>(k)));
    log_y.push_back(std::log(report_k.l1_per_k.mean));
  }
  const double slope_k = ggdp::fit_line(log_x, log_y).slope;

  const bool pass = slope_p >= 0.35 && slope_p <= 0.65 && slope_k >= 0.4 &&
                    slope_k <= 0.6;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "p-exponent %.3f in [0.35,0.65]; k-exponent %.3f in [0.4,0.6]",
                slope_p, slope_k);
  report(11, pass, "error scaling exponents in p and k", detail);
}

// 12. Byte-identical verdict streams and bounded runtime for the full suite.
void criterion_determinism() {
  const auto start = std::chrono::steady_clock::now();
  const auto first = ggdp::run_suite_with_reported_seed("all", 42);
  const auto second = ggdp::run_suite_with_reported_seed("all", 42);
  const double secs = elapsed_seconds(start);
  const bool identical =
      ggdp::render_jsonl(first) == ggdp::render_jsonl(second);
  const bool green = ggdp::all_pass(first);
  const bool fast = secs < 900.0;  // two full runs well inside the budget
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%zu verdicts, identical=%s, all-pass=%s, 2 runs in %.0fs",
                first.size(), identical ? "yes" : "no", green ? "yes" : "no",
                secs);
  report(12, identical && green && fast,
         "verify --suite all --seed 42 is byte-identical and inside budget",
         detail);
}

}  // namespace

int main() {
  criterion_sampler_moments();
  criterion_mu_bounds();
  criterion_mgf();
  criterion_radius_law();
  criterion_sphere_cap();
  criterion_linf_expectation();
  criterion_empirical_privacy();
  criterion_reductions();
  criterion_sparse_vector();
  criterion_composed();
  criterion_scaling();
  criterion_determinism();
  if (g_failures > 0) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
