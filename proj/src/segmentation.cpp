#include "apelt/segmentation.hpp"

#include <algorithm>
#include <stdexcept>

namespace apelt {

void validate_segmentation(const Segmentation& seg) {
  if (seg.n == 0) throw std::invalid_argument("segmentation of an empty sequence");
  std::size_t prev = 0;
  for (std::size_t cp : seg.changepoints) {
    if (cp <= prev || cp >= seg.n) {
      throw std::invalid_argument("change-points must be strictly increasing inside (0, n)");
    }
    prev = cp;
  }
  if (seg.has_states()) {
    if (seg.states.size() != seg.segment_count()) {
      throw std::invalid_argument("state count does not match segment count");
    }
    for (std::size_t i = 1; i < seg.states.size(); ++i) {
      if (seg.states[i] == seg.states[i - 1]) {
        throw std::invalid_argument("states must alternate");
      }
    }
  }
}

std::vector<State> expand_states(std::size_t n, const std::vector<std::size_t>& changepoints,
                                 const std::vector<State>& states) {
  if (states.size() != changepoints.size() + 1) {
    throw std::invalid_argument("state count does not match segment count");
  }
  std::vector<State> out(n);
  std::size_t t = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t s = i < changepoints.size() ? changepoints[i] : n;
    for (std::size_t k = t; k < s; ++k) out[k] = states[i];
    t = s;
  }
  return out;
}

std::vector<double> expand_parameter(const Segmentation& seg) {
  if (seg.params.size() != seg.segment_count()) {
    throw std::invalid_argument("segmentation carries no fitted parameters");
  }
  std::vector<double> out(seg.n);
  for (std::size_t i = 0; i < seg.segment_count(); ++i) {
    const auto [t, s] = seg.segment(i);
    const double v = seg.params[i].interest.at(0);
    for (std::size_t k = t; k < s; ++k) out[k] = v;
  }
  return out;
}

double recompute_cost(const TimeSeries& ts, const CostModel& cost, const PenaltySpec& penalty,
                      const Segmentation& seg, const std::optional<Theta>& theta) {
  validate_segmentation(seg);
  if (seg.n != ts.size()) throw std::invalid_argument("segmentation length differs from data");
  const bool any_normal =
      seg.has_states() && std::find(seg.states.begin(), seg.states.end(), State::Normal) !=
                              seg.states.end();
  if (any_normal) {
    if (!theta) throw std::invalid_argument("normal segments need a normal-state parameter");
    cost.validate_theta(*theta);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < seg.segment_count(); ++i) {
    const auto [t, s] = seg.segment(i);
    if (!seg.has_states()) {
      if (s - t < cost.min_seg_len()) throw SegmentTooShortError();
      total = total + cost.epidemic_cost(ts, t, s) + penalty.uniform;
    } else if (seg.states[i] == State::Normal) {
      if (s - t < cost.min_seg_len(State::Normal)) throw SegmentTooShortError();
      total = total + cost.normal_cost(ts, t, s, *theta) + penalty.normal;
    } else {
      if (s - t < cost.min_seg_len(State::Epidemic)) throw SegmentTooShortError();
      total = total + cost.epidemic_cost(ts, t, s) + penalty.epidemic;
    }
  }
  return total;
}

void fit_segment_params(const TimeSeries& ts, const CostModel& cost, Segmentation& seg,
                        const std::optional<Theta>& theta) {
  seg.params.clear();
  seg.params.reserve(seg.segment_count());
  for (std::size_t i = 0; i < seg.segment_count(); ++i) {
    const auto [t, s] = seg.segment(i);
    if (seg.has_states() && seg.states[i] == State::Normal) {
      seg.params.push_back(cost.fit_normal(ts, t, s, theta.value()));
    } else {
      seg.params.push_back(cost.fit_epidemic(ts, t, s));
    }
  }
}

}  // namespace apelt
