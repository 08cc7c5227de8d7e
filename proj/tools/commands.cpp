#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "apelt/estimators.hpp"
#include "apelt/rng.hpp"
#include "apelt/segmenters.hpp"

namespace apelt::cli {

namespace {

std::string trim(const std::string& s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  const auto b = std::find_if(s.begin(), s.end(), not_space);
  const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string(b, e) : std::string();
}

std::optional<double> parse_double(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

Theta parse_theta(const std::string& text) {
  Theta out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v || !std::isfinite(*v)) throw ConfigError("invalid --theta0 value '" + text + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigError("empty --theta0");
  return out;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "A" || name == "a") return Scenario::A;
  if (name == "B" || name == "b") return Scenario::B;
  throw ConfigError("unknown scenario '" + name + "'");
}

Theta default_theta(CostFamily family) {
  return family == CostFamily::Beta ? Theta{1.0, 1.0} : Theta{0.0};
}

void write_theta(std::ostream& out, const Theta& theta) {
  for (std::size_t i = 0; i < theta.size(); ++i) out << (i ? "," : "") << theta[i];
}

bool uses_normal_state(Method method) {
  return method != Method::Op && method != Method::Pelt;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::Op: return "op";
    case Method::Pelt: return "pelt";
    case Method::ApeltFixed: return "apelt-fixed";
    case Method::ApeltPlugin: return "apelt-plugin";
    case Method::ApeltProfile: return "apelt-profile";
    case Method::ApeltH: return "apelt-h";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::Op, Method::Pelt, Method::ApeltFixed, Method::ApeltPlugin,
                   Method::ApeltProfile, Method::ApeltH}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

std::string to_string(CostFamily family) {
  switch (family) {
    case CostFamily::GaussianFull: return "gaussian";
    case CostFamily::GaussianFixedVariance: return "gaussian-fixedvar";
    case CostFamily::Beta: return "beta";
  }
  return "?";
}

CostFamily parse_cost(const std::string& name) {
  for (CostFamily f : {CostFamily::GaussianFull, CostFamily::GaussianFixedVariance, CostFamily::Beta}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown cost family '" + name + "'");
}

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::EpidemicMean: return "epidemic-mean";
    case Protocol::ShortSegment: return "short-segment";
    case Protocol::PValues: return "pvalues";
  }
  return "?";
}

Protocol parse_protocol(const std::string& name) {
  if (name == "4.1" || name == "epidemic-mean") return Protocol::EpidemicMean;
  if (name == "4.2" || name == "short-segment") return Protocol::ShortSegment;
  if (name == "5.1" || name == "pvalues") return Protocol::PValues;
  throw ConfigError("unknown protocol '" + name + "'");
}

CostFamily resolve_cost(const RunConfig& config) {
  if (config.method == Method::ApeltH) return CostFamily::GaussianFixedVariance;
  if (config.cost) return *config.cost;
  if (config.command == Command::Benchmark && config.protocol == Protocol::PValues) {
    return CostFamily::Beta;
  }
  return CostFamily::GaussianFull;
}

void validate(const RunConfig& config) {
  if (config.method == Method::ApeltH && config.cost &&
      *config.cost != CostFamily::GaussianFixedVariance) {
    throw ConfigError("apelt-h requires the gaussian-fixedvar cost");
  }
  const CostFamily family = resolve_cost(config);
  if (family == CostFamily::Beta &&
      (config.method == Method::ApeltPlugin || config.method == Method::ApeltProfile)) {
    throw ConfigError(to_string(config.method) + " needs a scalar Gaussian normal-state mean");
  }
  if (config.theta0 && uses_normal_state(config.method)) {
    const std::size_t want = family == CostFamily::Beta ? 2 : 1;
    if (config.theta0->size() != want) {
      throw ConfigError("--theta0 needs " + std::to_string(want) + " value(s) for " +
                        to_string(family));
    }
    if (family == CostFamily::Beta && ((*config.theta0)[0] <= 0.0 || (*config.theta0)[1] <= 0.0)) {
      throw ConfigError("Beta normal-state parameters must be positive");
    }
  }
  for (const auto& p : {config.penalty_normal, config.penalty_epidemic, config.penalty_uniform}) {
    if (p && (!std::isfinite(*p) || *p < 0.0)) throw ConfigError("penalties must be finite and >= 0");
  }
  if (config.min_seg_len && *config.min_seg_len == 0) throw ConfigError("--min-seg-len must be >= 1");
  if (config.variance_window == 0) throw ConfigError("variance window must be >= 1");
  if (config.plugin_window == 0) throw ConfigError("plug-in window must be >= 1");
  if (config.profile_starts == 0) throw ConfigError("profile starts must be >= 1");
  if (config.command == Command::Benchmark && config.reps == 0) {
    throw ConfigError("--reps must be at least 1");
  }
  if (config.command != Command::Detect && config.n == 0) throw ConfigError("--n must be positive");
}

std::vector<double> read_values(std::istream& in, bool header) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    const std::string s = trim(line);
    if (s.empty()) continue;
    const auto v = parse_double(s);
    if (!v || !std::isfinite(*v)) {
      throw InputError("line " + std::to_string(lineno) + ": not a finite number: '" + s + "'");
    }
    values.push_back(*v);
  }
  if (values.empty()) throw InputError("input contains no values");
  return values;
}

Detection detect(const TimeSeries& ts, const RunConfig& config) {
  const CostFamily family = resolve_cost(config);
  const std::size_t n = ts.size();

  CostModel cost = [&] {
    switch (family) {
      case CostFamily::GaussianFull:
        return CostModel::gaussian_full();
      case CostFamily::GaussianFixedVariance: {
        double v = config.variance_estimator == VarianceEstimator::Mad
                       ? estimate_variance_mad(ts)
                       : estimate_variance_localreg(ts, config.variance_window).value;
        return CostModel::gaussian_fixed_variance(std::max(v, kVarianceFloor));
      }
      case CostFamily::Beta:
        return CostModel::beta();
    }
    throw ConfigError("unknown cost family");
  }();
  if (config.min_seg_len) cost.set_min_seg_len(*config.min_seg_len);

  PenaltySpec penalty = PenaltySpec::bic(family, n);
  if (config.penalty_normal) penalty.normal = *config.penalty_normal;
  if (config.penalty_epidemic) penalty.epidemic = *config.penalty_epidemic;
  if (config.penalty_uniform) penalty.uniform = *config.penalty_uniform;

  Detection det{Segmentation{}, cost, penalty, std::nullopt, 0.0};
  const Theta theta = config.theta0.value_or(default_theta(family));
  const auto start = std::chrono::steady_clock::now();
  switch (config.method) {
    case Method::Op:
      det.segmentation = optimal_partitioning(ts, cost, penalty);
      break;
    case Method::Pelt:
      det.segmentation = pelt(ts, cost, penalty);
      break;
    case Method::ApeltFixed:
    case Method::ApeltH:
      det.segmentation = apelt_fixed(ts, cost, penalty, theta);
      break;
    case Method::ApeltPlugin:
      det.segmentation = apelt_plugin(ts, cost, penalty, config.plugin_window);
      break;
    case Method::ApeltProfile: {
      const double init = config.theta0 ? (*config.theta0)[0]
                                        : estimate_normal_mean_plugin(ts, config.plugin_window);
      ProfileConfig pc;
      pc.starts = config.profile_starts;
      det.segmentation = apelt_profile(ts, cost, penalty, init, pc).segmentation;
      break;
    }
  }
  det.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  det.theta = det.segmentation.normal_param;
  return det;
}

void write_detection(std::ostream& out, const RunConfig& config, const Detection& det) {
  const Segmentation& seg = det.segmentation;
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "method=" << to_string(config.method) << '\n';
  out << "cost=" << to_string(det.cost.family()) << '\n';
  out << "n=" << seg.n << '\n';
  if (det.cost.family() == CostFamily::GaussianFixedVariance) {
    out << "variance=" << det.cost.fixed_variance() << '\n';
  }
  if (det.theta) {
    out << "theta0=";
    write_theta(out, *det.theta);
    out << '\n';
  }
  out << "penalty_normal=" << det.penalty.normal << '\n';
  out << "penalty_epidemic=" << det.penalty.epidemic << '\n';
  out << "penalty_uniform=" << det.penalty.uniform << '\n';
  out << "total_cost=" << seg.total_cost << '\n';
  out << "m=" << seg.changepoints.size() << '\n';
  out << "changepoints=";
  for (std::size_t i = 0; i < seg.changepoints.size(); ++i) out << (i ? "," : "") << seg.changepoints[i];
  out << '\n';
  // segment=<first>,<last>,<state>,<interest...>,<nuisance...> (1-based, inclusive)
  for (std::size_t i = 0; i < seg.segment_count(); ++i) {
    const auto [t, s] = seg.segment(i);
    out << "segment=" << t + 1 << ',' << s << ','
        << (seg.has_states() ? std::string(apelt::to_string(seg.states[i])) : "none");
    if (i < seg.params.size()) {
      for (double v : seg.params[i].interest) out << ',' << v;
      for (double v : seg.params[i].nuisance) out << ',' << v;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

EvalReport evaluate(const Detection& det, const LabeledSequence& truth, const RunConfig& config) {
  EvalReport report;
  const Segmentation& seg = det.segmentation;
  switch (config.protocol) {
    case Protocol::EpidemicMean: {
      const auto rates = tpr_fpr(seg, truth, config.match_tolerance);
      report.tpr = rates.tpr;
      report.fpr = rates.fpr;
      if (det.cost.family() != CostFamily::Beta) report.mse = param_mse(seg, truth);
      break;
    }
    case Protocol::ShortSegment: {
      const auto rates = sensitivity_precision(seg, truth, config.epidemic_length);
      report.sensitivity = rates.sensitivity;
      report.precision = rates.precision;
      break;
    }
    case Protocol::PValues: {
      const Segmentation labelled =
          seg.has_states() ? seg : postprocess_alternating(seg, truth.values.size());
      const auto rates = multiple_testing_rates(labelled, truth);
      report.fdr = rates.fdr;
      report.fnr = rates.fnr;
      report.mdr = rates.mdr;
      break;
    }
  }
  return report;
}

std::vector<BenchmarkRow> run_benchmark(const RunConfig& config) {
  validate(config);
  std::vector<BenchmarkRow> rows(config.reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  const auto worker = [&] {
    for (std::size_t r = next++; r < config.reps && !failed; r = next++) {
      try {
        DgpSpec spec;
        spec.protocol = config.protocol;
        spec.n = config.n;
        spec.m = config.m;
        spec.scenario = config.scenario;
        spec.epidemic_length = config.epidemic_length;
        spec.delta = config.delta;
        spec.seed = Rng::stream(config.seed, r).next();
        const LabeledSequence truth = generate(spec);
        const TimeSeries ts(truth.values);
        const Detection det = detect(ts, config);
        rows[r] = {r, spec.seed, det.segmentation.changepoints.size(),
                   evaluate(det, truth, config), det.seconds};
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, config.reps));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_benchmark_rows(std::ostream& out, const RunConfig& config,
                          const std::vector<BenchmarkRow>& rows) {
  out << "replication,seed,protocol,method,n,m_hat";
  for (const auto& c : eval_report_columns()) out << ',' << c;
  out << '\n';
  for (const auto& row : rows) {
    out << row.replication << ',' << row.seed << ',' << to_string(config.protocol) << ','
        << to_string(config.method) << ',' << config.n << ',' << row.m_hat << ',';
    write_eval_fields(out, row.report);
    out << '\n';
  }
}

void write_benchmark_summary(std::ostream& out, const RunConfig& config,
                             const std::vector<BenchmarkRow>& rows) {
  std::vector<EvalReport> reports;
  double m_hat = 0.0;
  double seconds = 0.0;
  for (const auto& row : rows) {
    reports.push_back(row.report);
    m_hat += static_cast<double>(row.m_hat);
    seconds += row.seconds;
  }
  const double count = static_cast<double>(std::max<std::size_t>(rows.size(), 1));
  out << "protocol,method,n,reps,m_hat";
  for (const auto& c : eval_report_columns()) out << ',' << c;
  out << ",seconds\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << to_string(config.protocol) << ',' << to_string(config.method) << ',' << config.n << ','
      << rows.size() << ',' << m_hat / count << ',';
  write_eval_fields(out, mean_report(reports));
  out << ',' << seconds / count << '\n';
  out.precision(old_precision);
}

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NonFiniteValueError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    std::vector<double> values;
    if (config.input.empty() || config.input == "-") {
      values = read_values(std::cin, config.header);
    } else {
      std::ifstream in(config.input);
      if (!in) throw InputError("cannot open '" + config.input + "'");
      values = read_values(in, config.header);
    }
    const TimeSeries ts(std::move(values));
    const Detection det = detect(ts, config);
    if (!config.output.empty()) {
      std::ofstream file(config.output);
      if (!file) throw std::runtime_error("cannot write '" + config.output + "'");
      write_detection(file, config, det);
    } else {
      write_detection(out, config, det);
    }
    return kExitOk;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    DgpSpec spec;
    spec.protocol = config.protocol;
    spec.n = config.n;
    spec.m = config.m;
    spec.scenario = config.scenario;
    spec.epidemic_length = config.epidemic_length;
    spec.delta = config.delta;
    spec.seed = config.seed;
    const LabeledSequence seq = generate(spec);
    if (!config.output.empty()) {
      std::ofstream file(config.output);
      if (!file) throw std::runtime_error("cannot write '" + config.output + "'");
      write_csv(file, seq);
    } else {
      write_csv(out, seq);
    }
    return kExitOk;
  });
}

int cmd_benchmark(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rows = run_benchmark(config);
    if (!config.output.empty()) {
      std::ofstream file(config.output);
      if (!file) throw std::runtime_error("cannot write '" + config.output + "'");
      write_benchmark_rows(file, config, rows);
    }
    write_benchmark_summary(out, config, rows);
    return kExitOk;
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alternating pruned dynamic programming for epidemic change-points"};
  app.require_subcommand(1);

  RunConfig config;
  std::string method = "apelt-fixed";
  std::string cost;
  std::string theta0;
  std::string protocol = "epidemic-mean";
  std::string scenario = "A";
  std::string variance = "localreg";

  const auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("--method", method, "op, pelt, apelt-fixed, apelt-plugin, apelt-profile, apelt-h");
    sub->add_option("--cost", cost, "gaussian, gaussian-fixedvar, beta");
    sub->add_option("--theta0", theta0, "normal-state parameter, e.g. 0 or 1,1");
    sub->add_option("--penalty-normal", config.penalty_normal, "penalty per normal segment");
    sub->add_option("--penalty-epidemic", config.penalty_epidemic, "penalty per epidemic segment");
    sub->add_option("--penalty", config.penalty_uniform, "penalty per segment for op/pelt");
    sub->add_option("--min-seg-len", config.min_seg_len, "minimum segment length");
    sub->add_option("--variance", variance, "fixed-variance estimator: localreg or mad");
    sub->add_option("--variance-window", config.variance_window, "local-regression half-width");
    sub->add_option("--window", config.plugin_window, "plug-in screening window");
    sub->add_option("--starts", config.profile_starts, "profile search starts");
    sub->add_option("--out", config.output, "output path");
  };
  const auto add_dgp_options = [&](CLI::App* sub) {
    sub->add_option("--protocol", protocol, "epidemic-mean, short-segment or pvalues");
    sub->add_option("--n", config.n, "sequence length");
    sub->add_option("--m", config.m, "number of change-points (epidemic-mean)");
    sub->add_option("--scenario", scenario, "A or B (epidemic-mean)");
    sub->add_option("--L", config.epidemic_length, "epidemic length (short-segment)");
    sub->add_option("--delta", config.delta, "signal level (short-segment)");
    sub->add_option("--seed", config.seed, "random seed");
  };

  auto* detect_cmd = app.add_subcommand("detect", "segment a sequence read from CSV");
  detect_cmd->add_option("input", config.input, "input CSV, one value per line ('-' for stdin)");
  detect_cmd->add_flag("--header", config.header, "skip the first line of the input");
  add_model_options(detect_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "write a simulated sequence as CSV");
  add_dgp_options(simulate_cmd);
  simulate_cmd->add_option("--out", config.output, "output path");

  auto* bench_cmd = app.add_subcommand("benchmark", "run seeded replications and score them");
  add_model_options(bench_cmd);
  add_dgp_options(bench_cmd);
  bench_cmd->add_option("--reps", config.reps, "number of replications");
  bench_cmd->add_option("--threads", config.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  return guarded(err, [&] {
    config.method = parse_method(method);
    if (!cost.empty()) config.cost = parse_cost(cost);
    if (!theta0.empty()) config.theta0 = parse_theta(theta0);
    config.protocol = parse_protocol(protocol);
    config.scenario = parse_scenario(scenario);
    if (variance == "localreg") {
      config.variance_estimator = VarianceEstimator::LocalRegression;
    } else if (variance == "mad") {
      config.variance_estimator = VarianceEstimator::Mad;
    } else {
      throw ConfigError("unknown variance estimator '" + variance + "'");
    }
    if (detect_cmd->parsed()) {
      config.command = Command::Detect;
      return cmd_detect(config, out, err);
    }
    if (simulate_cmd->parsed()) {
      config.command = Command::Simulate;
      return cmd_simulate(config, out, err);
    }
    config.command = Command::Benchmark;
    return cmd_benchmark(config, out, err);
  });
}

}  // namespace apelt::cli
