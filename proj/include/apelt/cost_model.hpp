#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "apelt/state.hpp"
#include "apelt/timeseries.hpp"

namespace apelt {

/// Lower bound applied to every per-segment variance estimate.
inline constexpr double kVarianceFloor = 1e-8;

enum class CostFamily { GaussianFull, GaussianFixedVariance, Beta };

/// Normal-state parameter: the mean for the Gaussian families, (alpha, beta)
/// for the Beta family.
using Theta = std::vector<double>;

class SegmentTooShortError : public std::invalid_argument {
 public:
  SegmentTooShortError() : std::invalid_argument("segment too short") {}
};

/// Fitted parameters of one segment. `interest` holds the parameter that
/// changes between states (mean, or alpha/beta); `nuisance` holds the profiled
/// variance for the Gaussian families and is empty for Beta.
struct SegmentParams {
  std::vector<double> interest;
  std::vector<double> nuisance;
};

/// Penalties P (classical), P_o (normal segment) and P_1 (epidemic segment).
struct PenaltySpec {
  double normal = 0.0;
  double epidemic = 0.0;
  double uniform = 0.0;

  /// BIC defaults: Gaussian full 2 log n / 3 log n / 3 log n, fixed variance
  /// log n / 2 log n / 2 log n, Beta log n / 3 log n / 3 log n.
  static PenaltySpec bic(CostFamily family, std::size_t n);
  void validate() const;
};

// Closed-form segment costs over (t, s]. All of them reject t >= s, s > n and
// segments shorter than min_seg_len.

/// C_1 for the Gaussian mean/variance model: (s-t) log(2 pi v) + RSS / v with
/// v = max(RSS / (s-t), var_floor).
double cost_gaussian_full(const TimeSeries& ts, std::size_t t, std::size_t s,
                          std::size_t min_seg_len = 2,
                          double var_floor = kVarianceFloor);

/// C_o for the Gaussian model with the mean fixed at `mean` and the variance
/// profiled out.
double cost_gaussian_normalstate(const TimeSeries& ts, std::size_t t,
                                 std::size_t s, double mean,
                                 std::size_t min_seg_len = 2,
                                 double var_floor = kVarianceFloor);

/// Homoscedastic cost with known variance; the mean is the segment average
/// when `mean` is empty.
double cost_gaussian_fixedvar(const TimeSeries& ts, std::size_t t,
                              std::size_t s, double variance,
                              std::optional<double> mean,
                              std::size_t min_seg_len = 1);

struct BetaFit {
  double alpha = 1.0;
  double beta = 1.0;
  double cost = 0.0;  // -2 log-likelihood at (alpha, beta)
  int iterations = 0;
  bool converged = false;  // false: grid fallback was used
};

/// Maximum-likelihood Beta fit of (t, s] over the box [1e-2, 1e2]^2, by
/// active-set Newton iteration on the score started from the method-of-moments
/// estimate. Falls back to a 50 x 50 log-spaced grid over the same box if
/// Newton fails.
BetaFit fit_beta(const TimeSeries& ts, std::size_t t, std::size_t s,
                 std::size_t min_seg_len = 2);

/// -2 log-likelihood of (t, s] under Beta(alpha, beta); minimized over
/// (alpha, beta) when `theta` is empty.
double cost_beta(const TimeSeries& ts, std::size_t t, std::size_t s,
                 std::optional<std::pair<double, double>> theta,
                 std::optional<std::size_t> min_seg_len = std::nullopt);

/// Family-specific segment cost evaluator exposing C_o and C_1.
class CostModel {
 public:
  static CostModel gaussian_full();
  static CostModel gaussian_fixed_variance(double variance);
  static CostModel beta();

  CostFamily family() const noexcept { return family_; }
  double fixed_variance() const noexcept { return variance_; }
  double variance_floor() const noexcept { return var_floor_; }

  /// Overrides the minimum segment length for both states.
  CostModel& set_min_seg_len(std::size_t len);
  std::size_t min_seg_len(State state) const noexcept {
    return state == State::Normal ? min_len_normal_ : min_len_epidemic_;
  }
  /// Minimum length of a freely fitted segment (OP, PELT).
  std::size_t min_seg_len() const noexcept { return min_len_epidemic_; }

  std::size_t theta_size() const noexcept;
  /// Throws std::invalid_argument when theta does not fit the family.
  void validate_theta(const Theta& theta) const;
  /// Rejects sequences the family cannot score (Beta needs values in [0,1]).
  void validate_series(const TimeSeries& ts) const;

  /// C_o(y_{t+1:s}) at the normal-state parameter. No range checks.
  double normal_cost(const TimeSeries& ts, std::size_t t, std::size_t s,
                     const Theta& theta) const noexcept;
  /// C_1(y_{t+1:s}). No range checks.
  double epidemic_cost(const TimeSeries& ts, std::size_t t,
                       std::size_t s) const noexcept;

  SegmentParams fit_normal(const TimeSeries& ts, std::size_t t, std::size_t s,
                           const Theta& theta) const;
  SegmentParams fit_epidemic(const TimeSeries& ts, std::size_t t,
                             std::size_t s) const;

 private:
  CostModel(CostFamily family, double variance, std::size_t min_normal,
            std::size_t min_epidemic);

  CostFamily family_;
  double variance_ = 0.0;
  double var_floor_ = kVarianceFloor;
  std::size_t min_len_normal_;
  std::size_t min_len_epidemic_;
};

}  // namespace apelt
