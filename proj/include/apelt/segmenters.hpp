#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "apelt/cost_model.hpp"
#include "apelt/segmentation.hpp"
#include "apelt/timeseries.hpp"

namespace apelt {

/// Candidate-set instrumentation for the pruned recursions.
struct DpStats {
  std::size_t steps = 0;
  std::size_t cost_evaluations = 0;
  /// Sum over steps of the candidate-set size(s) scanned at that step.
  std::size_t candidates_total = 0;
  std::size_t max_candidates = 0;

  double mean_candidates() const noexcept {
    return steps == 0 ? 0.0 : static_cast<double>(candidates_total) / static_cast<double>(steps);
  }
};

// ---------------------------------------------------------------------------
// Classical segmentation: F(s) = min_t F(t) + C(y_{t+1:s}) + P.
// ---------------------------------------------------------------------------

/// Exact O(n^2) optimal partitioning with the uniform penalty.
Segmentation optimal_partitioning(const TimeSeries& ts, const CostModel& cost,
                                  const PenaltySpec& penalty);

struct PeltRun {
  Segmentation segmentation;
  DpStats stats;
};

/// PELT: optimal partitioning with inequality pruning, exact whenever
/// C(t,s) + C(s,u) + k <= C(t,u).
PeltRun run_pelt(const TimeSeries& ts, const CostModel& cost, const PenaltySpec& penalty,
                 double k = 0.0);

inline Segmentation pelt(const TimeSeries& ts, const CostModel& cost,
                         const PenaltySpec& penalty, double k = 0.0) {
  return run_pelt(ts, cost, penalty, k).segmentation;
}

// ---------------------------------------------------------------------------
// Alternating recursion at a fixed normal-state parameter:
//   F_o(s) = min_t F_1(t) + C_o(y_{t+1:s}) + P_o
//   F_1(s) = min_t F_o(t) + C_1(y_{t+1:s}) + P_1
// ---------------------------------------------------------------------------

struct DpOptions {
  bool prune = true;
  double k_normal = 0.0;
  double k_epidemic = 0.0;
};

/// Working state of the alternating recursion after the final step.
/// Back-pointers are single predecessor indices; the state of the
/// predecessor segment is implied by alternation.
struct DpState {
  std::vector<double> f_normal;
  std::vector<double> f_epidemic;
  std::vector<std::size_t> candidates_normal;
  std::vector<std::size_t> candidates_epidemic;
  std::vector<std::size_t> back_normal;
  std::vector<std::size_t> back_epidemic;
};

/// Emitted whenever a candidate fails the pruning inequality; `lhs > rhs`
/// held at `step`.
struct PruneEvent {
  State chain;  // recursion the candidate is dropped from
  std::size_t candidate;
  std::size_t step;
  double lhs;
  double rhs;
};
using PruneObserver = std::function<void(const PruneEvent&)>;

struct AlternatingRun {
  Segmentation segmentation;
  DpState state;
  DpStats stats;
};

AlternatingRun run_alternating(const TimeSeries& ts, const CostModel& cost,
                               const PenaltySpec& penalty, const Theta& theta,
                               const DpOptions& options = {},
                               const PruneObserver& observer = {});

/// Exact minimiser over alternating-state segmentations whose normal
/// segments share `theta`. Ties prefer the normal-last solution and, within
/// a recursion, the smallest last change-point.
inline Segmentation apelt_fixed(const TimeSeries& ts, const CostModel& cost,
                                const PenaltySpec& penalty, const Theta& theta,
                                const DpOptions& options = {}) {
  return run_alternating(ts, cost, penalty, theta, options).segmentation;
}

/// apelt_fixed at the median-of-window-means estimate of the normal mean.
Segmentation apelt_plugin(const TimeSeries& ts, const CostModel& cost,
                          const PenaltySpec& penalty, std::size_t window = 10,
                          const DpOptions& options = {});

// ---------------------------------------------------------------------------
// Profile search over a scalar normal-state parameter.
// ---------------------------------------------------------------------------

struct ProfileConfig {
  /// Search bracket; defaults to [min(y) - 1, max(y) + 1].
  std::optional<double> lower;
  std::optional<double> upper;
  /// Number of local searches. The first starts at the supplied initial
  /// value, the rest at equally spaced interior points of the bracket.
  std::size_t starts = 1;
  /// First bracketing step as a fraction of the bracket width.
  double initial_step = 0.01;
  /// Resolution of the final local grid as a fraction of the bracket width.
  double resolution = 1e-4;
  /// The final grid spans +-refine_points steps around the best point.
  std::size_t refine_points = 10;
  std::size_t max_iterations = 200;
  DpOptions dp;
};

struct ProfileEvaluation {
  double theta = 0.0;
  double value = 0.0;
};

struct ProfileResult {
  double theta_star = 0.0;
  double value = 0.0;
  std::vector<ProfileEvaluation> trace;
  Segmentation segmentation;
};

/// Minimises theta -> F*(n; theta) with a derivative-free local search
/// (downhill bracketing, golden-section, final grid), evaluating each point
/// with the pruned alternating recursion.
ProfileResult apelt_profile(const TimeSeries& ts, const CostModel& cost,
                            const PenaltySpec& penalty, double theta_init,
                            const ProfileConfig& config = {});

}  // namespace apelt
