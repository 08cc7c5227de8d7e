#include "apelt/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace apelt {

namespace {

double ratio(std::size_t num, std::size_t den, double empty) {
  return den == 0 ? empty : static_cast<double>(num) / static_cast<double>(den);
}

struct Interval {
  std::size_t begin;  // prefix bounds (begin, end]
  std::size_t end;
};

bool overlaps(const Interval& a, const Interval& b) { return a.begin < b.end && b.begin < a.end; }

std::vector<Interval> truth_signals(const LabeledSequence& truth) {
  std::vector<Interval> out;
  const std::size_t n = truth.values.size();
  std::size_t t = 0;
  for (std::size_t i = 0; i < truth.true_states.size(); ++i) {
    const std::size_t s = i < truth.true_changepoints.size() ? truth.true_changepoints[i] : n;
    if (truth.true_states[i] == State::Epidemic) out.push_back({t, s});
    t = s;
  }
  return out;
}

// (field, accessor) table shared by the CSV writer and the aggregator.
using Field = std::optional<double> EvalReport::*;
constexpr std::array<std::pair<const char*, Field>, 8> kFields{{
    {"tpr", &EvalReport::tpr},
    {"fpr", &EvalReport::fpr},
    {"mse", &EvalReport::mse},
    {"sensitivity", &EvalReport::sensitivity},
    {"precision", &EvalReport::precision},
    {"fdr", &EvalReport::fdr},
    {"fnr", &EvalReport::fnr},
    {"mdr", &EvalReport::mdr},
}};

}  // namespace

RecoveryRates tpr_fpr(const Segmentation& est, const LabeledSequence& truth, std::size_t tol) {
  const auto& truth_cp = truth.true_changepoints;
  const auto& est_cp = est.changepoints;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < truth_cp.size(); ++i) {
    for (std::size_t j = 0; j < est_cp.size(); ++j) {
      const std::size_t d = truth_cp[i] > est_cp[j] ? truth_cp[i] - est_cp[j] : est_cp[j] - truth_cp[i];
      if (d <= tol) pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> true_used(truth_cp.size(), false);
  std::vector<bool> est_used(est_cp.size(), false);
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (true_used[i] || est_used[j]) continue;
    true_used[i] = true;
    est_used[j] = true;
    ++matched;
  }
  return {ratio(matched, truth_cp.size(), 1.0), ratio(est_cp.size() - matched, est_cp.size(), 0.0)};
}

double param_mse(const Segmentation& est, const LabeledSequence& truth) {
  const auto fitted = expand_parameter(est);
  if (fitted.size() != truth.true_means.size()) {
    throw std::invalid_argument("segmentation length differs from truth");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    const double d = fitted[i] - truth.true_means[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(fitted.size()));
}

SignalRates sensitivity_precision(const Segmentation& est, const LabeledSequence& truth,
                                  std::size_t epidemic_length) {
  const auto signals = truth_signals(truth);
  std::vector<Interval> detected;
  for (std::size_t i = 0; i < est.segment_count(); ++i) {
    const auto [t, s] = est.segment(i);
    if (s - t < 2 * epidemic_length) detected.push_back({t, s});
  }
  std::size_t found = 0;
  for (const auto& sig : signals) {
    if (std::any_of(detected.begin(), detected.end(),
                    [&](const Interval& d) { return overlaps(d, sig); })) {
      ++found;
    }
  }
  std::size_t correct = 0;
  for (const auto& d : detected) {
    if (std::any_of(signals.begin(), signals.end(),
                    [&](const Interval& sig) { return overlaps(d, sig); })) {
      ++correct;
    }
  }
  return {ratio(found, signals.size(), 1.0), ratio(correct, detected.size(), 1.0)};
}

TestingRates multiple_testing_rates(const Segmentation& est, const LabeledSequence& truth) {
  if (!est.has_states()) throw std::invalid_argument("segmentation carries no state labels");
  const std::size_t n = truth.values.size();
  if (est.n != n) throw std::invalid_argument("segmentation length differs from truth");
  const auto rejected = expand_states(n, est.changepoints, est.states);
  const auto alternative = expand_states(n, truth.true_changepoints, truth.true_states);

  TestingRates r;
  for (std::size_t i = 0; i < n; ++i) {
    const bool rej = rejected[i] == State::Epidemic;
    const bool alt = alternative[i] == State::Epidemic;
    r.rejections += rej;
    r.acceptances += !rej;
    r.alternatives += alt;
    r.false_rejections += rej && !alt;
    r.false_acceptances += !rej && alt;
  }
  r.fdr = ratio(r.false_rejections, r.rejections, 0.0);
  r.fnr = ratio(r.false_acceptances, r.acceptances, 0.0);
  r.mdr = ratio(r.false_acceptances, r.alternatives, 0.0);
  return r;
}

Segmentation postprocess_alternating(const Segmentation& est, std::size_t n) {
  Segmentation out = est;
  out.n = n;
  std::size_t odd_total = 0;
  for (std::size_t i = 0; i < out.segment_count(); i += 2) {
    const auto [t, s] = out.segment(i);
    odd_total += s - t;
  }
  const bool odd_epidemic = 2 * odd_total < n;
  out.states.resize(out.segment_count());
  for (std::size_t i = 0; i < out.segment_count(); ++i) {
    const bool odd = i % 2 == 0;  // 0-based i is the (i+1)-th segment
    out.states[i] = odd == odd_epidemic ? State::Epidemic : State::Normal;
  }
  out.normal_param.reset();
  return out;
}

std::size_t bic_parameter_count(const Segmentation& est) {
  const std::size_t m = est.changepoints.size();
  if (!est.has_states()) return 2 * m + 2;
  const auto epidemic =
      static_cast<std::size_t>(std::count(est.states.begin(), est.states.end(), State::Epidemic));
  return m + 2 + epidemic;
}

double bic_score(const Segmentation& est, const TimeSeries& ts, const CostModel& cost,
                 bool homoscedastic) {
  validate_segmentation(est);
  if (est.n != ts.size()) throw std::invalid_argument("segmentation length differs from data");
  const double n = static_cast<double>(ts.size());
  const auto is_normal = [&](std::size_t i) {
    return est.has_states() && est.states[i] == State::Normal;
  };

  double neg2ll = 0.0;
  if (homoscedastic) {
    if (cost.family() == CostFamily::Beta) {
      throw std::invalid_argument("homoscedastic BIC applies to Gaussian families only");
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < est.segment_count(); ++i) {
      const auto [t, s] = est.segment(i);
      double mu;
      if (is_normal(i)) {
        mu = est.normal_param.value().at(0);
      } else if (est.params.size() == est.segment_count()) {
        mu = est.params[i].interest.at(0);
      } else {
        mu = ts.sum(t, s) / static_cast<double>(s - t);
      }
      for (std::size_t k = t; k < s; ++k) rss += (ts[k] - mu) * (ts[k] - mu);
    }
    const double v = std::max(rss / n, cost.variance_floor());
    neg2ll = n * std::log(2.0 * std::numbers::pi * v) + rss / v;
  } else {
    for (std::size_t i = 0; i < est.segment_count(); ++i) {
      const auto [t, s] = est.segment(i);
      neg2ll += is_normal(i) ? cost.normal_cost(ts, t, s, est.normal_param.value())
                             : cost.epidemic_cost(ts, t, s);
    }
  }
  return neg2ll + static_cast<double>(bic_parameter_count(est)) * std::log(n);
}

std::vector<std::string> eval_report_columns() {
  std::vector<std::string> out;
  for (const auto& [name, field] : kFields) out.emplace_back(name);
  return out;
}

void write_eval_fields(std::ostream& out, const EvalReport& report) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  bool first = true;
  for (const auto& [name, field] : kFields) {
    if (!first) out << ',';
    first = false;
    if (const auto& v = report.*field) out << *v;
  }
  out.precision(old_precision);
}

EvalReport mean_report(const std::vector<EvalReport>& reports) {
  EvalReport out;
  for (const auto& [name, field] : kFields) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& r : reports) {
      if (const auto& v = r.*field) {
        acc += *v;
        ++count;
      }
    }
    if (count > 0) out.*field = acc / static_cast<double>(count);
  }
  return out;
}

}  // namespace apelt
