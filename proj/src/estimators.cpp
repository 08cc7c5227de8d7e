#include "apelt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace apelt {

namespace {

double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

VarianceEstimate estimate_variance_localreg(const TimeSeries& ts, std::size_t h) {
  if (h == 0) throw std::invalid_argument("window half-width must be at least 1");
  const std::size_t n = ts.size();
  if (n < 2 * h + 1) {
    const double mean = ts.centred_sum(0, n) / static_cast<double>(n);
    const double var =
        std::max(ts.centred_sum_sq(0, n) / static_cast<double>(n) - mean * mean, 0.0);
    return {var, true};
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t reach = std::min({h, i, n - 1 - i});
    const std::size_t lo = i - reach;
    const std::size_t hi = i + reach + 1;
    const double local = ts.sum(lo, hi) / static_cast<double>(hi - lo);
    const double r = ts[i] - local;
    acc += r * r;
  }
  return {acc / static_cast<double>(n), false};
}

double estimate_variance_mad(const TimeSeries& ts) {
  const std::size_t n = ts.size();
  if (n < 2) throw std::invalid_argument("MAD estimator needs at least two values");
  std::vector<double> diffs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) diffs[i] = ts[i + 1] - ts[i];
  std::vector<double> work = diffs;
  const double med = median_inplace(work);
  for (auto& d : diffs) d = std::abs(d - med);
  const double sd = 1.4826 * median_inplace(diffs) / std::sqrt(2.0);
  return sd * sd;
}

double estimate_normal_mean_plugin(const TimeSeries& ts, std::size_t w) {
  if (w == 0) throw std::invalid_argument("window length must be at least 1");
  const std::size_t n = ts.size();
  if (n < w) throw std::invalid_argument("sequence shorter than window");
  std::vector<double> means(n - w + 1);
  for (std::size_t t = 0; t + w <= n; ++t) {
    means[t] = ts.sum(t, t + w) / static_cast<double>(w);
  }
  return median_inplace(means);
}

}  // namespace apelt
