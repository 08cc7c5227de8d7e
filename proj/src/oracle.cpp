#include "apelt/oracle.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace apelt::oracle {

namespace {

std::vector<std::size_t> changepoints_of(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> cps;
  for (std::size_t i = 1; i < n; ++i) {
    if (mask & (std::uint64_t{1} << (i - 1))) cps.push_back(i);
  }
  return cps;
}

}  // namespace

OracleResult brute_force_op(const TimeSeries& ts, const CostModel& cost,
                            const PenaltySpec& penalty) {
  const std::size_t n = ts.size();
  if (n > kMaxOpLength) throw std::invalid_argument("instance too large for enumeration");
  cost.validate_series(ts);

  OracleResult out;
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Segmentation seg;
    seg.n = n;
    seg.changepoints = changepoints_of(mask, n);
    double total = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < seg.segment_count() && feasible; ++i) {
      const auto [t, s] = seg.segment(i);
      if (s - t < cost.min_seg_len()) {
        feasible = false;
        break;
      }
      total = total + cost.epidemic_cost(ts, t, s) + penalty.uniform;
    }
    if (!feasible) continue;
    ++out.candidates_evaluated;
    if (total < best) {
      best = total;
      seg.total_cost = total;
      out.best = std::move(seg);
    }
  }
  if (out.candidates_evaluated == 0) throw std::invalid_argument("no feasible segmentation");
  fit_segment_params(ts, cost, out.best, std::nullopt);
  return out;
}

OracleResult brute_force_apelt(const TimeSeries& ts, const CostModel& cost,
                               const PenaltySpec& penalty, const Theta& theta) {
  const std::size_t n = ts.size();
  if (n > kMaxAlternatingLength) throw std::invalid_argument("instance too large for enumeration");
  cost.validate_series(ts);
  cost.validate_theta(theta);

  OracleResult out;
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  // Normal-last first so that exact ties resolve the same way as the DP.
  for (State last : {State::Normal, State::Epidemic}) {
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      Segmentation seg;
      seg.n = n;
      seg.changepoints = changepoints_of(mask, n);
      seg.states.resize(seg.segment_count());
      State st = last;
      for (std::size_t i = seg.segment_count(); i-- > 0;) {
        seg.states[i] = st;
        st = flip(st);
      }
      double total = 0.0;
      bool feasible = true;
      for (std::size_t i = 0; i < seg.segment_count(); ++i) {
        const auto [t, s] = seg.segment(i);
        if (s - t < cost.min_seg_len(seg.states[i])) {
          feasible = false;
          break;
        }
        total = seg.states[i] == State::Normal
                    ? total + cost.normal_cost(ts, t, s, theta) + penalty.normal
                    : total + cost.epidemic_cost(ts, t, s) + penalty.epidemic;
      }
      if (!feasible) continue;
      ++out.candidates_evaluated;
      if (total < best) {
        best = total;
        seg.total_cost = total;
        seg.normal_param = theta;
        out.best = std::move(seg);
      }
    }
  }
  if (out.candidates_evaluated == 0) throw std::invalid_argument("no feasible segmentation");
  fit_segment_params(ts, cost, out.best, theta);
  return out;
}

}  // namespace apelt::oracle
