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
// Command-line surface: parameter calibration, mechanism runs over datasets,
// benchmarking sweeps, and the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parameter error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ggdp/ggdp.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t pick_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Dataset ingestion: the file holds the already-computed answer vector d.
// JSON flat arrays and CSV with one value per line (or one comma-separated
// row) are accepted.
std::vector<double> parse_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw std::invalid_argument("dataset is empty: " + path);
  }
  if (text[first] == '[') {
    json parsed;
    try {
      parsed = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("dataset JSON parse error: " +
                                  std::string(e.what()));
    }
    if (!parsed.is_array()) {
      throw std::invalid_argument("dataset JSON must be a flat array");
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      if (!parsed[i].is_number()) {
        throw std::invalid_argument("dataset JSON element " +
                                    std::to_string(i) + " is not a number");
      }
      values.push_back(parsed[i].get<double>());
    }
    return values;
  }

  std::vector<double> values;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto begin = cell.find_first_not_of(" \t\r");
      if (begin == std::string::npos) continue;
      const auto end = cell.find_last_not_of(" \t\r");
      const std::string token = cell.substr(begin, end - begin + 1);
      try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                    ": could not parse '" + token + "'");
      }
    }
  }
  if (values.empty()) {
    throw std::invalid_argument("dataset contains no values: " + path);
  }
  return values;
}

std::vector<double> parse_inline(const std::string& text) {
  std::vector<double> values;
  std::istringstream cells(text);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw std::invalid_argument("could not parse inline value '" + cell +
                                  "'");
    }
  }
  if (values.empty()) throw std::invalid_argument("no inline values given");
  return values;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output: " + out_path);
  out << text;
}

struct CommonFlags {
  std::size_t k = 0;
  double p = 4.0;
  std::optional<double> q;
  std::optional<double> eps;
  std::optional<double> delta;
  double t = 1.0;
  std::optional<double> sigma;
  double c_sigma = 1.0;
  std::string log_base = "natural";
  std::size_t trials = 100000;
  std::optional<std::uint64_t> seed;
  std::string mechanism = "ggauss";
  bool truncate = true;
  std::string format = "json";
  std::string out_path;
  // sparse-vector extras
  std::optional<double> alpha;
  std::size_t c_sv = 1;
  double beta = 0.05;
  bool empirical = false;
};

ggdp::LogBase to_log_base(const std::string& name) {
  if (name == "natural") return ggdp::LogBase::natural;
  if (name == "base2") return ggdp::LogBase::base2;
  throw std::invalid_argument("unknown log base: " + name);
}

json calibration_record(const CommonFlags& flags) {
  if (flags.k < 2) throw std::invalid_argument("calibrate: need --k >= 2");
  if (!flags.eps) throw std::invalid_argument("calibrate: need --eps");
  if (!flags.delta) {
    throw std::invalid_argument("calibrate: need --delta for this mechanism");
  }
  const ggdp::PrivacyBudget budget(*flags.eps, *flags.delta);
  const ggdp::LogBase base = to_log_base(flags.log_base);
  const ggdp::ValidationReport validation =
      ggdp::validate_params(flags.k, flags.p, budget);

  json record{{"schema_version", ggdp::kSchemaVersion},
              {"command", "calibrate"},
              {"inputs",
               {{"k", flags.k},
                {"p", flags.p},
                {"eps", *flags.eps},
                {"delta", *flags.delta},
                {"c_sigma", flags.c_sigma},
                {"log_base", flags.log_base},
                {"mechanism", flags.mechanism}}},
              {"normalized_p", validation.p},
              {"warnings", validation.warnings}};

  if (flags.mechanism == "composed") {
    const ggdp::ComposedParams params = ggdp::calibrate_composed(
        flags.k, validation.p, budget, flags.t, flags.c_sigma, base);
    record["inputs"]["t"] = flags.t;
    if (auto warning = ggdp::composed_t_range_warning(
            flags.k, flags.t, ggdp::kDefaultTRangeConstant, base)) {
      record["warnings"].push_back(*warning);
    }
    record["sigma"] = params.sigma;
    record["composed"] = {{"alpha_sv", params.alpha_sv},
                          {"c_sv", params.c_sv},
                          {"eps_sv", params.eps_sv},
                          {"delta_sv", params.delta_sv},
                          {"beta_sv", params.beta_sv},
                          {"t", params.t}};
    return record;
  }
  if (flags.q) {
    record["inputs"]["q"] = *flags.q;
    record["sigma"] = ggdp::calibrate_sigma_pq(flags.k, validation.p, *flags.q,
                                               budget, flags.c_sigma, base);
    return record;
  }
  if (flags.empirical) {
    const std::uint64_t seed = pick_seed(flags.seed);
    ggdp::RandomStream stream(seed);
    record["method"] = "empirical";
    record["inputs"]["trials"] = flags.trials;
    record["seed"] = seed;
    record["sigma"] = ggdp::empirical_calibrate(flags.k, validation.p, budget,
                                                flags.trials, stream);
    record["analytic_sigma"] = ggdp::calibrate_sigma_ggauss(
        flags.k, validation.p, budget, flags.c_sigma, base);
    return record;
  }
  const ggdp::SigmaBranches branches =
      ggdp::sigma_branches_ggauss(flags.k, validation.p, budget, base);
  record["branches"] = {{"privacy", branches.privacy_branch},
                        {"epsilon_root", branches.epsilon_root_branch}};
  record["sigma"] = ggdp::calibrate_sigma_ggauss(flags.k, validation.p, budget,
                                                 flags.c_sigma, base);
  return record;
}

int cmd_calibrate(const CommonFlags& flags) {
  const json record = calibration_record(flags);
  if (flags.format == "table") {
    std::ostringstream out;
    out << "sigma = " << record["sigma"].get<double>() << "\n";
    if (record.contains("composed")) {
      const auto& c = record["composed"];
      out << "alpha_sv = " << c["alpha_sv"].get<double>()
          << "\nc_sv = " << c["c_sv"].get<std::size_t>()
          << "\neps_sv = " << c["eps_sv"].get<double>()
          << "\ndelta_sv = " << c["delta_sv"].get<double>()
          << "\nbeta_sv = " << c["beta_sv"].get<double>() << "\n";
    }
    for (const auto& w : record["warnings"]) {
      out << "warning: " << w.get<std::string>() << "\n";
    }
    emit(out.str(), flags.out_path);
  } else {
    emit(record.dump(2) + "\n", flags.out_path);
  }
  return kExitOk;
}

int cmd_run(const CommonFlags& flags, const std::string& data_path,
            const std::string& inline_values) {
  std::vector<double> data;
  if (!inline_values.empty()) {
    data = parse_inline(inline_values);
  } else if (!data_path.empty()) {
    data = parse_dataset(data_path);
  } else {
    throw std::invalid_argument("run: need --data or --values");
  }
  const ggdp::QueryAnswers d(data);
  const std::size_t k = d.dim();
  const std::uint64_t seed = pick_seed(flags.seed);
  ggdp::RandomStream stream(seed);
  const ggdp::LogBase base = to_log_base(flags.log_base);

  json record{{"schema_version", ggdp::kSchemaVersion},
              {"command", "run"},
              {"mechanism", flags.mechanism},
              {"k", k},
              {"seed", seed}};

  ggdp::MechanismOutput output;
  if (flags.mechanism == "laplace") {
    if (!flags.eps) throw std::invalid_argument("run: need --eps");
    const ggdp::PrivacyBudget budget(*flags.eps, flags.delta.value_or(1e-6));
    output =
        ggdp::laplace_mechanism(d, budget, stream, flags.sigma.value_or(0.0));
    record["eps"] = *flags.eps;
  } else if (flags.mechanism == "gaussian") {
    if (!flags.eps || !flags.delta) {
      throw std::invalid_argument("run: need --eps and --delta");
    }
    const ggdp::PrivacyBudget budget(*flags.eps, *flags.delta);
    output =
        ggdp::gaussian_mechanism(d, budget, stream, flags.sigma.value_or(0.0));
    record["eps"] = *flags.eps;
    record["delta"] = *flags.delta;
  } else if (flags.mechanism == "ggauss" || flags.mechanism == "ggauss_pq") {
    ggdp::MechanismSpec spec;
    spec.family = flags.mechanism == "ggauss"
                      ? ggdp::MechanismFamily::ggauss
                      : ggdp::MechanismFamily::ggauss_pq;
    spec.truncate = flags.truncate;
    spec.c_sigma = flags.c_sigma;
    spec.log_base = base;
    if (flags.sigma) {
      spec.p = flags.p;
      spec.q = flags.q.value_or(flags.p);
      spec.sigma = *flags.sigma;
    } else {
      if (!flags.eps || !flags.delta) {
        throw std::invalid_argument(
            "run: need --sigma or both --eps and --delta");
      }
      const ggdp::PrivacyBudget budget(*flags.eps, *flags.delta);
      const ggdp::ValidationReport validation =
          ggdp::validate_params(k, flags.p, budget);
      spec.p = validation.p;
      spec.q = flags.q.value_or(spec.p);
      spec.sigma = flags.mechanism == "ggauss"
                       ? ggdp::calibrate_sigma_ggauss(k, validation.p, budget,
                                                      flags.c_sigma, base)
                       : ggdp::calibrate_sigma_pq(k, validation.p, spec.q,
                                                  budget, flags.c_sigma, base);
      record["warnings"] = validation.warnings;
    }
    record["p"] = spec.p;
    record["q"] = spec.q;
    record["sigma"] = spec.sigma;
    output = flags.mechanism == "ggauss"
                 ? ggdp::ggauss_mechanism(d, spec, stream)
                 : ggdp::ggauss_pq_mechanism(d, spec, stream);
  } else if (flags.mechanism == "sv") {
    if (!flags.eps || !flags.delta) {
      throw std::invalid_argument("run: need --eps and --delta");
    }
    const ggdp::SvConfig config =
        flags.alpha ? ggdp::SvConfig::derive(*flags.alpha, flags.c_sv,
                                             *flags.eps, *flags.delta,
                                             flags.beta)
                    : ggdp::SvConfig::for_queries(k, flags.c_sv, *flags.eps,
                                                  *flags.delta, flags.beta);
    output.values = ggdp::numeric_sparse(data, config, stream);
    record["alpha"] = config.alpha;
    record["c_sv"] = config.budget_count;
    record["eps"] = *flags.eps;
    record["delta"] = *flags.delta;
  } else if (flags.mechanism == "composed") {
    if (!flags.eps || !flags.delta) {
      throw std::invalid_argument("run: need --eps and --delta");
    }
    const ggdp::PrivacyBudget budget(*flags.eps, *flags.delta);
    const ggdp::ValidationReport validation =
        ggdp::validate_params(k, flags.p, budget);
    ggdp::ComposedOptions options;
    options.c_sigma = flags.c_sigma;
    options.log_base = base;
    const ggdp::ComposedRun run = ggdp::composed_mechanism(
        d, validation.p, budget, flags.t, options, stream);
    output = run.output;
    record["p"] = validation.p;
    record["t"] = flags.t;
    record["sigma"] = run.params.sigma;
    record["alpha_sv"] = run.params.alpha_sv;
    record["c_sv"] = run.params.c_sv;
  } else {
    throw std::invalid_argument("unknown mechanism: " + flags.mechanism);
  }

  record["truncated"] = output.truncated;
  record["noise_norm_p"] = output.noise_norm_p;
  record["values"] = output.values;

  if (flags.format == "csv") {
    std::ostringstream out;
    out.precision(17);
    for (double v : output.values) out << v << "\n";
    emit(out.str(), flags.out_path);
  } else if (flags.format == "table") {
    std::ostringstream out;
    out << "mechanism=" << flags.mechanism << " k=" << k << " seed=" << seed
        << " truncated=" << (output.truncated ? "true" : "false") << "\n";
    emit(out.str(), flags.out_path);
  } else {
    emit(record.dump(2) + "\n", flags.out_path);
  }
  return kExitOk;
}

int cmd_bench(const CommonFlags& flags, const std::string& mechanisms_list,
              const std::string& k_list, const std::string& p_list) {
  if (!flags.eps || !flags.delta) {
    throw std::invalid_argument("bench: need --eps and --delta");
  }
  const ggdp::PrivacyBudget budget(*flags.eps, *flags.delta);
  const std::uint64_t seed = pick_seed(flags.seed);

  std::vector<std::string> mechanisms;
  {
    std::istringstream ss(mechanisms_list);
    std::string token;
    while (std::getline(ss, token, ',')) mechanisms.push_back(token);
  }
  std::vector<std::size_t> ks;
  for (double v : parse_inline(k_list)) {
    ks.push_back(static_cast<std::size_t>(v));
  }
  std::vector<int> ps;
  for (double v : parse_inline(p_list)) ps.push_back(static_cast<int>(v));

  json rows = json::array();
  std::size_t cell = 0;
  ggdp::RandomStream master(seed);
  for (const std::string& mechanism : mechanisms) {
    for (std::size_t k : ks) {
      for (int p : ps) {
        const ggdp::QueryAnswers d(std::vector<double>(k, 0.0));
        ggdp::MechanismFn fn;
        double sigma = 0.0;
        if (mechanism == "laplace") {
          fn = [&budget](const ggdp::QueryAnswers& q, ggdp::RandomStream& r) {
            return ggdp::laplace_mechanism(q, budget, r);
          };
          sigma = static_cast<double>(k) / budget.epsilon;
        } else if (mechanism == "gaussian") {
          fn = [&budget](const ggdp::QueryAnswers& q, ggdp::RandomStream& r) {
            return ggdp::gaussian_mechanism(q, budget, r);
          };
          sigma = std::sqrt(2.0 * static_cast<double>(k) *
                            std::log(1.25 / budget.delta)) /
                  budget.epsilon;
        } else if (mechanism == "ggauss") {
          ggdp::MechanismSpec spec;
          spec.p = static_cast<double>(p);
          spec.truncate = flags.truncate;
          spec.sigma =
              ggdp::calibrate_sigma_ggauss(k, p, budget, flags.c_sigma);
          sigma = spec.sigma;
          fn = [spec](const ggdp::QueryAnswers& q, ggdp::RandomStream& r) {
            return ggdp::ggauss_mechanism(q, spec, r);
          };
        } else {
          throw std::invalid_argument("bench: unsupported mechanism " +
                                      mechanism);
        }
        ggdp::RandomStream cell_stream = master.split(cell++);
        const ggdp::ErrorReport report = ggdp::estimate_error_norms(
            fn, d, static_cast<double>(p), 2.0, flags.trials, cell_stream);
        rows.push_back({{"mechanism", mechanism},
                        {"k", k},
                        {"p", p},
                        {"sigma", sigma},
                        {"trials", flags.trials},
                        {"seed", seed},
                        {"l1_per_k_mean", report.l1_per_k.mean},
                        {"l2_normalized_mean", report.lq_normalized.mean},
                        {"lp_mean", report.lp.mean},
                        {"linf_mean", report.linf.mean},
                        {"linf_stderr", report.linf.std_error},
                        {"truncation_rate", report.truncation_rate}});
      }
    }
  }

  if (flags.format == "csv") {
    std::ostringstream out;
    out << "mechanism,k,p,sigma,trials,seed,l1_per_k_mean,l2_normalized_mean,"
           "lp_mean,linf_mean,linf_stderr,truncation_rate\n";
    out.precision(12);
    for (const auto& row : rows) {
      out << row["mechanism"].get<std::string>() << ","
          << row["k"].get<std::size_t>() << "," << row["p"].get<int>() << ","
          << row["sigma"].get<double>() << ","
          << row["trials"].get<std::size_t>() << ","
          << row["seed"].get<std::uint64_t>() << ","
          << row["l1_per_k_mean"].get<double>() << ","
          << row["l2_normalized_mean"].get<double>() << ","
          << row["lp_mean"].get<double>() << ","
          << row["linf_mean"].get<double>() << ","
          << row["linf_stderr"].get<double>() << ","
          << row["truncation_rate"].get<double>() << "\n";
    }
    emit(out.str(), flags.out_path);
  } else if (flags.format == "table") {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-10s %7s %4s %12s %12s %12s\n",
                  "mechanism", "k", "p", "sigma", "l1/k", "linf");
    out << buf;
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof(buf), "%-10s %7zu %4d %12.5g %12.5g %12.5g\n",
                    row["mechanism"].get<std::string>().c_str(),
                    row["k"].get<std::size_t>(), row["p"].get<int>(),
                    row["sigma"].get<double>(),
                    row["l1_per_k_mean"].get<double>(),
                    row["linf_mean"].get<double>());
      out << buf;
    }
    emit(out.str(), flags.out_path);
  } else {
    emit(rows.dump(2) + "\n", flags.out_path);
  }
  return kExitOk;
}

int cmd_verify(const CommonFlags& flags, const std::string& suite,
               bool k_given, bool p_given) {
  const std::uint64_t seed = pick_seed(flags.seed);
  ggdp::SuiteOptions options;
  if (k_given) options.k = flags.k;
  if (p_given) options.p = static_cast<int>(flags.p);
  const std::vector<ggdp::Verdict> verdicts =
      ggdp::run_suite_with_reported_seed(suite, seed, options);
  std::string rendered;
  if (flags.format == "table") {
    rendered = ggdp::render_table(verdicts);
  } else if (flags.format == "csv") {
    rendered = ggdp::render_csv(verdicts);
  } else {
    rendered = ggdp::render_jsonl(verdicts);
  }
  emit(rendered, flags.out_path);
  return ggdp::all_pass(verdicts) ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Gaussian mechanisms for counting queries"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string data_path;
  std::string inline_values;
  std::string suite;
  std::string mechanisms_list = "laplace,gaussian,ggauss";
  std::string k_list = "1024";
  std::string p_list = "4";
  CLI::Option* k_opt = nullptr;
  CLI::Option* p_opt = nullptr;

  const auto add_common = [&](CLI::App* cmd) {
    k_opt = cmd->add_option("--k", flags.k, "number of queries");
    p_opt = cmd->add_option("--p", flags.p, "shape exponent");
    cmd->add_option("--q", flags.q, "norm exponent for the p,q family");
    cmd->add_option("--eps", flags.eps, "privacy parameter epsilon");
    cmd->add_option("--delta", flags.delta, "privacy parameter delta");
    cmd->add_option("--t", flags.t, "composed-mechanism tail parameter");
    cmd->add_option("--sigma", flags.sigma, "noise scale override");
    cmd->add_option("--c-sigma", flags.c_sigma, "calibration constant");
    cmd->add_option("--log-base", flags.log_base, "natural or base2")
        ->check(CLI::IsMember({"natural", "base2"}));
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials");
    cmd->add_option("--seed", flags.seed, "RNG seed (auto when omitted)");
    cmd->add_option("--mechanism", flags.mechanism,
                    "laplace|gaussian|ggauss|ggauss_pq|sv|composed");
    cmd->add_flag("--truncate,!--no-truncate", flags.truncate,
                  "release guard on noise norm");
    cmd->add_option("--format", flags.format, "json|csv|table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    cmd->add_option("--out", flags.out_path, "write output to PATH");
    cmd->add_option("--alpha", flags.alpha, "sparse-vector accuracy target");
    cmd->add_option("--c-sv", flags.c_sv, "sparse-vector budget count");
    cmd->add_option("--beta", flags.beta, "sparse-vector failure probability");
    cmd->add_flag("--empirical", flags.empirical,
                  "calibrate sigma by Monte Carlo search instead of the "
                  "analytic formula");
  };

  CLI::App* calibrate = app.add_subcommand("calibrate", "compute noise scales");
  add_common(calibrate);

  CLI::App* run = app.add_subcommand("run", "answer a dataset privately");
  add_common(run);
  run->add_option("--data", data_path, "dataset path (CSV or JSON array)");
  run->add_option("--values", inline_values, "inline comma-separated vector");

  CLI::App* bench = app.add_subcommand("bench", "error benchmarking sweeps");
  add_common(bench);
  bench->add_option("--mechanisms", mechanisms_list,
                    "comma-separated mechanism list");
  bench->add_option("--k-grid", k_list, "comma-separated k values");
  bench->add_option("--p-grid", p_list, "comma-separated p values");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify);
  CLI::Option* verify_k = k_opt;
  CLI::Option* verify_p = p_opt;
  verify
      ->add_option("--suite", suite,
                   "distributions|spherecap|subgamma|privacy|errors|composed|"
                   "all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(flags);
    if (run->parsed()) return cmd_run(flags, data_path, inline_values);
    if (bench->parsed()) {
      return cmd_bench(flags, mechanisms_list, k_list, p_list);
    }
    if (verify->parsed()) {
      return cmd_verify(flags, suite, verify_k->count() > 0,
                        verify_p->count() > 0);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
