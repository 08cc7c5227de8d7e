#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace apelt {

/// Values in [0, 1] are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
/// before the log prefixes used by the Beta cost are built.
inline constexpr double kProbabilityClamp = 1e-10;

class NonFiniteValueError : public std::invalid_argument {
 public:
  explicit NonFiniteValueError(std::size_t index);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An observed univariate sequence y_1..y_n with cumulative statistics.
///
/// Segments are addressed by prefix indices: (t, s] covers values[t..s-1],
/// so every segment statistic is a difference of two prefix entries.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<const double> prefix_sum() const noexcept { return prefix_sum_; }
  std::span<const double> prefix_sumsq() const noexcept { return prefix_sumsq_; }
  /// Empty unless every value lies in [0, 1].
  std::span<const double> prefix_log() const noexcept { return prefix_log_; }
  std::span<const double> prefix_log1m() const noexcept { return prefix_log1m_; }
  bool has_log_prefixes() const noexcept { return !prefix_log_.empty(); }

  double sum(std::size_t t, std::size_t s) const noexcept {
    return prefix_sum_[s] - prefix_sum_[t];
  }
  double sum_sq(std::size_t t, std::size_t s) const noexcept {
    return prefix_sumsq_[s] - prefix_sumsq_[t];
  }
  double sum_log(std::size_t t, std::size_t s) const noexcept {
    return prefix_log_[s] - prefix_log_[t];
  }
  double sum_log1m(std::size_t t, std::size_t s) const noexcept {
    return prefix_log1m_[s] - prefix_log1m_[t];
  }

  /// Sums of y_i - centre() and its square, used for variance-type
  /// statistics to avoid cancellation when the data sit far from zero.
  double centre() const noexcept { return centre_; }
  double centred_sum(std::size_t t, std::size_t s) const noexcept {
    return prefix_csum_[s] - prefix_csum_[t];
  }
  double centred_sum_sq(std::size_t t, std::size_t s) const noexcept {
    return prefix_csumsq_[s] - prefix_csumsq_[t];
  }

  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }

 private:
  std::vector<double> values_;
  std::vector<double> prefix_sum_;
  std::vector<double> prefix_sumsq_;
  std::vector<double> prefix_log_;
  std::vector<double> prefix_log1m_;
  std::vector<double> prefix_csum_;
  std::vector<double> prefix_csumsq_;
  double centre_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace apelt
