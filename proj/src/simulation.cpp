#include "apelt/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "apelt/rng.hpp"
#include "apelt/segmentation.hpp"
#include "apelt/timeseries.hpp"

namespace apelt {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Fills per-index means and sds from piecewise segment values.
void paint(LabeledSequence& seq, std::size_t t, std::size_t s, double mean, double sd) {
  for (std::size_t i = t; i < s; ++i) {
    seq.true_means[i] = mean;
    seq.true_sds[i] = sd;
  }
}

}  // namespace

LabeledSequence generate_epidemic_mean(const DgpSpec& spec) {
  require(spec.protocol == Protocol::EpidemicMean, "spec is not an epidemic-mean protocol");
  require(spec.m % 2 == 1, "number of change-points must be odd");
  require(spec.n >= 10 * (spec.m + 1), "sequence too short for the number of change-points");

  const std::size_t n = spec.n;
  const std::size_t blocks = (spec.m + 1) / 2;
  const double normal_sd = spec.scenario == Scenario::A ? 1.0 : 1.5;
  Rng rng(spec.seed);

  LabeledSequence seq;
  seq.values.resize(n);
  seq.true_means.resize(n);
  seq.true_sds.resize(n);
  for (std::size_t j = 0; j < blocks; ++j) {
    const std::size_t begin = j * n / blocks;
    const std::size_t end = (j + 1) * n / blocks;
    const double ratio = rng.uniform(0.2, 0.5);  // epidemic length / normal length
    const auto normal_len =
        static_cast<std::size_t>(std::floor(static_cast<double>(end - begin) / (1.0 + ratio)));
    const double sign = rng.bernoulli(0.5) ? -1.0 : 1.0;
    const double level = sign * rng.uniform(1.0, 1.25);

    paint(seq, begin, begin + normal_len, 0.0, normal_sd);
    paint(seq, begin + normal_len, end, level, 1.0);
    if (j > 0) seq.true_changepoints.push_back(begin);
    seq.true_changepoints.push_back(begin + normal_len);
    seq.true_states.push_back(State::Normal);
    seq.true_states.push_back(State::Epidemic);
  }
  for (std::size_t i = 0; i < n; ++i) seq.values[i] = rng.normal(seq.true_means[i], seq.true_sds[i]);
  return seq;
}

LabeledSequence generate_short_segments(const DgpSpec& spec) {
  require(spec.protocol == Protocol::ShortSegment, "spec is not a short-segment protocol");
  require(spec.n >= 1000 && spec.n % 1000 == 0, "sequence length must be a multiple of 1000");
  require(spec.epidemic_length >= 1, "epidemic length must be positive");
  require(spec.sigma > 0.0, "noise sd must be positive");

  const std::size_t n = spec.n;
  const std::size_t k_count = n / 1000 + 1;
  const std::size_t len = spec.epidemic_length;
  require(len < n / k_count, "epidemic length must be shorter than n / K");

  LabeledSequence seq;
  seq.values.resize(n);
  seq.true_means.assign(n, 0.0);
  seq.true_sds.assign(n, spec.sigma);

  // I_k = {floor(kn/K) - L + 1, ..., floor(kn/K)} in 1-based indices, i.e.
  // the prefix range (floor(kn/K) - L, floor(kn/K)].
  std::size_t prev_end = 0;
  const State signal_state = spec.delta == 0.0 ? State::Normal : State::Epidemic;
  for (std::size_t k = 1; k <= k_count; ++k) {
    const std::size_t end = k * n / k_count;
    require(end >= len, "interval out of range");
    const std::size_t begin = end - len;
    require(begin >= prev_end, "intervals overlap");
    if (begin > prev_end) {
      seq.true_states.push_back(State::Normal);
      seq.true_changepoints.push_back(begin);
    }
    seq.true_states.push_back(signal_state);
    paint(seq, begin, end, spec.delta, spec.sigma);
    if (end < n) seq.true_changepoints.push_back(end);
    prev_end = end;
  }
  if (prev_end < n) seq.true_states.push_back(State::Normal);

  Rng rng(spec.seed);
  for (std::size_t i = 0; i < n; ++i) seq.values[i] = rng.normal(seq.true_means[i], spec.sigma);
  return seq;
}

LabeledSequence generate_pvalues(const DgpSpec& spec) {
  require(spec.protocol == Protocol::PValues, "spec is not a p-value protocol");
  require(spec.n >= 40, "sequence too short for the p-value mean structure");

  const std::size_t n = spec.n;
  constexpr std::array<double, 7> kPercent{2.5, 2.5, 30.0, 2.5, 30.0, 2.5, 30.0};
  constexpr std::array<double, 7> kLevel{1.0, -1.5, 0.0, 1.5, 0.0, 0.0, 0.0};
  constexpr std::size_t kAlternating = 5;

  LabeledSequence seq;
  seq.values.resize(n);
  seq.true_means.assign(n, 0.0);
  seq.true_sds.assign(n, 1.0);

  // Boundaries by rounding cumulative fractions, so the last one is exactly n.
  std::array<std::size_t, 8> bound{};
  double cum = 0.0;
  for (std::size_t j = 0; j < kPercent.size(); ++j) {
    cum += kPercent[j];
    bound[j + 1] = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cum / 100.0));
  }
  bound[7] = n;
  for (std::size_t j = 0; j < kPercent.size(); ++j) {
    for (std::size_t i = bound[j]; i < bound[j + 1]; ++i) {
      seq.true_means[i] =
          j == kAlternating ? ((i - bound[j]) % 2 == 0 ? -1.5 : 1.0) : kLevel[j];
    }
  }
  // The two leading 2.5% pieces form one epidemic stretch.
  seq.true_changepoints = {bound[2], bound[3], bound[4], bound[5], bound[6]};
  seq.true_states = {State::Epidemic, State::Normal, State::Epidemic,
                     State::Normal,   State::Epidemic, State::Normal};

  Rng rng(spec.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = rng.normal(seq.true_means[i], 1.0);
    const double p = std::erfc(std::abs(y) / std::sqrt(2.0));
    seq.values[i] = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  }
  return seq;
}

LabeledSequence generate(const DgpSpec& spec) {
  switch (spec.protocol) {
    case Protocol::EpidemicMean:
      return generate_epidemic_mean(spec);
    case Protocol::ShortSegment:
      return generate_short_segments(spec);
    case Protocol::PValues:
      return generate_pvalues(spec);
  }
  throw std::invalid_argument("unknown protocol");
}

void write_csv(std::ostream& out, const LabeledSequence& seq) {
  const auto states = expand_states(seq.values.size(), seq.true_changepoints, seq.true_states);
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "index,value,true_mean,true_sd,state\n";
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    out << i + 1 << ',' << seq.values[i] << ',' << seq.true_means[i] << ',' << seq.true_sds[i]
        << ',' << to_string(states[i]) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace apelt
