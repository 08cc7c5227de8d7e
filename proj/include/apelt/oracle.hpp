#pragma once

#include <cstddef>

#include "apelt/cost_model.hpp"
#include "apelt/segmentation.hpp"
#include "apelt/timeseries.hpp"

namespace apelt::oracle {

inline constexpr std::size_t kMaxOpLength = 16;
inline constexpr std::size_t kMaxAlternatingLength = 14;

struct OracleResult {
  Segmentation best;
  std::size_t candidates_evaluated = 0;
};

/// Enumerates all 2^{n-1} change-point sets and returns the minimiser of
/// sum_i C_1(segment i) + P. Sets with a segment shorter than the minimum
/// length are skipped and not counted.
OracleResult brute_force_op(const TimeSeries& ts, const CostModel& cost,
                            const PenaltySpec& penalty);

/// Enumerates change-point sets x {last segment normal, last epidemic}.
OracleResult brute_force_apelt(const TimeSeries& ts, const CostModel& cost,
                               const PenaltySpec& penalty, const Theta& theta);

}  // namespace apelt::oracle
