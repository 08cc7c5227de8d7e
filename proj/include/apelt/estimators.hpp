#pragma once

#include <cstddef>

#include "apelt/timeseries.hpp"

namespace apelt {

struct VarianceEstimate {
  double value = 0.0;
  /// Set when the sequence was too short for the requested window and the
  /// plain sample variance was returned instead.
  bool fell_back = false;
};

/// n^{-1} sum (y_i - ybar_i)^2 where ybar_i is the centred moving average of
/// half-width h. Near the ends the window shrinks symmetrically to the
/// neighbours that exist. Requires n >= 2h + 1.
VarianceEstimate estimate_variance_localreg(const TimeSeries& ts, std::size_t h = 10);

/// (1.4826 * MAD of first differences)^2 / 2.
double estimate_variance_mad(const TimeSeries& ts);

/// Median of all sliding-window means of length w.
double estimate_normal_mean_plugin(const TimeSeries& ts, std::size_t w = 10);

}  // namespace apelt
