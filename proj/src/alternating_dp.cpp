#include <algorithm>
#include <limits>
#include <stdexcept>

#include "apelt/estimators.hpp"
#include "apelt/segmenters.hpp"

namespace apelt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// One side of the alternating recursion: the candidate set R, the
// per-candidate fit values of the current step, and the pruning bookkeeping.
struct Chain {
  State state;
  std::size_t min_len;
  double penalty;
  double k;
  std::vector<std::size_t> candidates{0};
  std::vector<double> fit;
  std::vector<std::size_t> expires;

  Chain(State st, std::size_t n, std::size_t len, double pen, double slack)
      : state(st), min_len(len), penalty(pen), k(slack), expires(n + 1, kNone) {
    candidates.reserve(n + 1);
  }
};

// F_this(s) = min_t F_other(t) + C_this(t, s) + P_this over the live
// candidates. Expired candidates are compacted away.
template <typename SegmentCost>
void relax(Chain& chain, std::size_t s, const std::vector<double>& f_other, double& f_out,
           std::size_t& back_out, SegmentCost&& segment_cost, DpStats& stats) {
  std::size_t kept = 0;
  chain.fit.resize(chain.candidates.size());
  double best = kInf;
  std::size_t arg = kNone;
  for (std::size_t i = 0; i < chain.candidates.size(); ++i) {
    const std::size_t t = chain.candidates[i];
    if (chain.expires[t] <= s) continue;
    chain.candidates[kept] = t;
    chain.fit[kept] = kInf;
    if (s - t >= chain.min_len) {
      chain.fit[kept] = f_other[t] + segment_cost(t, s);
      ++stats.cost_evaluations;
      const double v = chain.fit[kept] + chain.penalty;
      if (v < best) {
        best = v;
        arg = t;
      }
    }
    ++kept;
  }
  chain.candidates.resize(kept);
  stats.candidates_total += kept;
  f_out = best;
  back_out = arg;
}

// Drops t from the chain once F_other(t) + C(t, s) + K > F_other(s): from
// step s + min_len on, s itself is a strictly better last change-point.
void prune(Chain& chain, std::size_t s, double f_other_s, const PruneObserver& observer) {
  for (std::size_t i = 0; i < chain.candidates.size(); ++i) {
    const std::size_t t = chain.candidates[i];
    if (s - t < chain.min_len || chain.expires[t] != kNone) continue;
    const double lhs = chain.fit[i] + chain.k;
    if (lhs > f_other_s) {
      chain.expires[t] = s + chain.min_len;
      if (observer) observer(PruneEvent{chain.state, t, s, lhs, f_other_s});
    }
  }
}

std::vector<std::size_t> live(const Chain& chain, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t t : chain.candidates) {
    if (chain.expires[t] > n) out.push_back(t);
  }
  return out;
}

}  // namespace

AlternatingRun run_alternating(const TimeSeries& ts, const CostModel& cost,
                               const PenaltySpec& penalty, const Theta& theta,
                               const DpOptions& options, const PruneObserver& observer) {
  penalty.validate();
  cost.validate_series(ts);
  cost.validate_theta(theta);
  const std::size_t n = ts.size();
  if (n < std::min(cost.min_seg_len(State::Normal), cost.min_seg_len(State::Epidemic))) {
    throw std::invalid_argument("sequence shorter than the minimum segment length");
  }

  AlternatingRun run;
  DpState& st = run.state;
  st.f_normal.assign(n + 1, kInf);
  st.f_epidemic.assign(n + 1, kInf);
  st.back_normal.assign(n + 1, kNone);
  st.back_epidemic.assign(n + 1, kNone);
  st.f_normal[0] = 0.0;
  st.f_epidemic[0] = 0.0;

  Chain normal(State::Normal, n, cost.min_seg_len(State::Normal), penalty.normal,
               options.k_normal);
  Chain epidemic(State::Epidemic, n, cost.min_seg_len(State::Epidemic), penalty.epidemic,
                 options.k_epidemic);

  const auto normal_cost = [&](std::size_t t, std::size_t s) {
    return cost.normal_cost(ts, t, s, theta);
  };
  const auto epidemic_cost = [&](std::size_t t, std::size_t s) {
    return cost.epidemic_cost(ts, t, s);
  };

  for (std::size_t s = 1; s <= n; ++s) {
    relax(normal, s, st.f_epidemic, st.f_normal[s], st.back_normal[s], normal_cost, run.stats);
    relax(epidemic, s, st.f_normal, st.f_epidemic[s], st.back_epidemic[s], epidemic_cost,
          run.stats);
    ++run.stats.steps;
    run.stats.max_candidates = std::max(
        {run.stats.max_candidates, normal.candidates.size(), epidemic.candidates.size()});

    if (options.prune) {
      prune(normal, s, st.f_epidemic[s], observer);
      prune(epidemic, s, st.f_normal[s], observer);
    }
    normal.candidates.push_back(s);
    epidemic.candidates.push_back(s);
  }
  st.candidates_normal = live(normal, n);
  st.candidates_epidemic = live(epidemic, n);

  const double best = std::min(st.f_normal[n], st.f_epidemic[n]);
  if (!(best < kInf)) throw std::invalid_argument("no feasible segmentation");

  Segmentation& seg = run.segmentation;
  seg.n = n;
  seg.total_cost = best;
  seg.normal_param = theta;
  State state = st.f_normal[n] <= st.f_epidemic[n] ? State::Normal : State::Epidemic;
  for (std::size_t s = n; s > 0;) {
    const std::size_t t = state == State::Normal ? st.back_normal[s] : st.back_epidemic[s];
    seg.states.push_back(state);
    if (t != 0) seg.changepoints.push_back(t);
    state = flip(state);
    s = t;
  }
  std::reverse(seg.changepoints.begin(), seg.changepoints.end());
  std::reverse(seg.states.begin(), seg.states.end());
  fit_segment_params(ts, cost, seg, theta);
  return run;
}

Segmentation apelt_plugin(const TimeSeries& ts, const CostModel& cost,
                          const PenaltySpec& penalty, std::size_t window,
                          const DpOptions& options) {
  if (cost.family() == CostFamily::Beta) {
    throw std::invalid_argument("plug-in estimator requires a Gaussian mean family");
  }
  const double theta = estimate_normal_mean_plugin(ts, window);
  return apelt_fixed(ts, cost, penalty, Theta{theta}, options);
}

}  // namespace apelt
