#include "apelt/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apelt {

NonFiniteValueError::NonFiniteValueError(std::size_t index)
    : std::invalid_argument("non-finite value at index " + std::to_string(index)),
      index_(index) {}

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("empty sequence");
  const std::size_t n = values_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values_[i])) throw NonFiniteValueError(i);
  }

  prefix_sum_.assign(n + 1, 0.0);
  prefix_sumsq_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix_sum_[i + 1] = prefix_sum_[i] + values_[i];
    prefix_sumsq_[i + 1] = prefix_sumsq_[i] + values_[i] * values_[i];
  }
  centre_ = prefix_sum_[n] / static_cast<double>(n);
  prefix_csum_.assign(n + 1, 0.0);
  prefix_csumsq_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = values_[i] - centre_;
    prefix_csum_[i + 1] = prefix_csum_[i] + z;
    prefix_csumsq_[i + 1] = prefix_csumsq_[i] + z * z;
  }
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;

  if (min_ >= 0.0 && max_ <= 1.0) {
    prefix_log_.assign(n + 1, 0.0);
    prefix_log1m_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::clamp(values_[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
      prefix_log_[i + 1] = prefix_log_[i] + std::log(p);
      prefix_log1m_[i + 1] = prefix_log1m_[i] + std::log1p(-p);
    }
  }
}

}  // namespace apelt
