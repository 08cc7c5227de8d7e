#include <algorithm>
#include <limits>
#include <stdexcept>

#include "apelt/segmenters.hpp"

namespace apelt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

void check_inputs(const TimeSeries& ts, const CostModel& cost, const PenaltySpec& penalty) {
  penalty.validate();
  cost.validate_series(ts);
  if (ts.size() < cost.min_seg_len()) {
    throw std::invalid_argument("sequence shorter than the minimum segment length");
  }
}

Segmentation backtrack(const TimeSeries& ts, const CostModel& cost,
                       const std::vector<double>& f, const std::vector<std::size_t>& back) {
  const std::size_t n = ts.size();
  Segmentation seg;
  seg.n = n;
  seg.total_cost = f[n];
  for (std::size_t s = back[n]; s != 0 && s != kNone; s = back[s]) seg.changepoints.push_back(s);
  std::reverse(seg.changepoints.begin(), seg.changepoints.end());
  fit_segment_params(ts, cost, seg, std::nullopt);
  return seg;
}

}  // namespace

Segmentation optimal_partitioning(const TimeSeries& ts, const CostModel& cost,
                                  const PenaltySpec& penalty) {
  check_inputs(ts, cost, penalty);
  const std::size_t n = ts.size();
  const std::size_t min_len = cost.min_seg_len();
  std::vector<double> f(n + 1, kInf);
  std::vector<std::size_t> back(n + 1, kNone);
  f[0] = 0.0;
  for (std::size_t s = min_len; s <= n; ++s) {
    for (std::size_t t = 0; t + min_len <= s; ++t) {
      const double v = f[t] + cost.epidemic_cost(ts, t, s) + penalty.uniform;
      if (v < f[s]) {
        f[s] = v;
        back[s] = t;
      }
    }
  }
  return backtrack(ts, cost, f, back);
}

PeltRun run_pelt(const TimeSeries& ts, const CostModel& cost, const PenaltySpec& penalty,
                 double k) {
  check_inputs(ts, cost, penalty);
  const std::size_t n = ts.size();
  const std::size_t min_len = cost.min_seg_len();
  std::vector<double> f(n + 1, kInf);
  std::vector<std::size_t> back(n + 1, kNone);
  // A candidate that fails the pruning test at step s can still be the best
  // last change-point for steps before s + min_len, where s itself is not
  // yet admissible; it is dropped once that window has passed.
  std::vector<std::size_t> expires(n + 1, kNone);
  f[0] = 0.0;

  PeltRun run;
  std::vector<std::size_t> candidates{0};
  std::vector<double> fit(1);
  candidates.reserve(n + 1);

  for (std::size_t s = 1; s <= n; ++s) {
    std::size_t kept = 0;
    fit.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t t = candidates[i];
      if (expires[t] <= s) continue;
      candidates[kept] = t;
      fit[kept] = kInf;
      if (s - t >= min_len) {
        fit[kept] = f[t] + cost.epidemic_cost(ts, t, s);
        ++run.stats.cost_evaluations;
        const double v = fit[kept] + penalty.uniform;
        if (v < f[s]) {
          f[s] = v;
          back[s] = t;
        }
      }
      ++kept;
    }
    candidates.resize(kept);
    ++run.stats.steps;
    run.stats.candidates_total += kept;
    run.stats.max_candidates = std::max(run.stats.max_candidates, kept);

    for (std::size_t i = 0; i < kept; ++i) {
      const std::size_t t = candidates[i];
      if (s - t < min_len || expires[t] != kNone) continue;
      if (fit[i] + k > f[s]) expires[t] = s + min_len;
    }
    candidates.push_back(s);
  }

  run.segmentation = backtrack(ts, cost, f, back);
  return run;
}

}  // namespace apelt
