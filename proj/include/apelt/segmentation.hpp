#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "apelt/cost_model.hpp"
#include "apelt/state.hpp"
#include "apelt/timeseries.hpp"

namespace apelt {

/// A fitted segmentation of y_1..y_n.
///
/// Change-point tau_i is the last index of segment i, so segment i covers the
/// prefix range (tau_{i-1}, tau_i] with tau_0 = 0 and tau_{m+1} = n. `states`
/// is empty for segmenters that do not label segments.
struct Segmentation {
  std::size_t n = 0;
  std::vector<std::size_t> changepoints;
  std::vector<State> states;
  std::vector<SegmentParams> params;
  double total_cost = 0.0;
  std::optional<Theta> normal_param;

  std::size_t segment_count() const noexcept { return changepoints.size() + 1; }
  bool has_states() const noexcept { return !states.empty(); }

  /// Prefix bounds (t, s] of segment i.
  std::pair<std::size_t, std::size_t> segment(std::size_t i) const noexcept {
    const std::size_t t = i == 0 ? 0 : changepoints[i - 1];
    const std::size_t s = i == changepoints.size() ? n : changepoints[i];
    return {t, s};
  }
};

/// Throws std::invalid_argument unless the change-points are strictly
/// increasing in (0, n) and the states (if any) alternate and match the
/// segment count.
void validate_segmentation(const Segmentation& seg);

/// Per-index state labels for the segments described by `changepoints`.
std::vector<State> expand_states(std::size_t n, const std::vector<std::size_t>& changepoints,
                                 const std::vector<State>& states);

/// Per-index value of the first interest parameter (the fitted mean for the
/// Gaussian families).
std::vector<double> expand_parameter(const Segmentation& seg);

/// Re-evaluates the penalised objective of `seg` from scratch: normal
/// segments contribute C_o + P_o, epidemic ones C_1 + P_1, unlabelled ones
/// C_1 + P.
double recompute_cost(const TimeSeries& ts, const CostModel& cost, const PenaltySpec& penalty,
                      const Segmentation& seg, const std::optional<Theta>& theta);

/// Fills `params` for every segment of `seg` using the cost model.
void fit_segment_params(const TimeSeries& ts, const CostModel& cost, Segmentation& seg,
                        const std::optional<Theta>& theta);

}  // namespace apelt
