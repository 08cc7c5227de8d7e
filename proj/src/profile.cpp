#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "apelt/segmenters.hpp"

namespace apelt {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1 / golden ratio

class ProfileSearch {
 public:
  ProfileSearch(const TimeSeries& ts, const CostModel& cost, const PenaltySpec& penalty,
                const ProfileConfig& config, double lo, double hi)
      : ts_(ts), cost_(cost), penalty_(penalty), config_(config), lo_(lo), hi_(hi) {
    result_.value = std::numeric_limits<double>::infinity();
  }

  double eval(double x) {
    x = std::clamp(x, lo_, hi_);
    if (auto it = cache_.find(x); it != cache_.end()) return it->second;
    Segmentation seg = apelt_fixed(ts_, cost_, penalty_, Theta{x}, config_.dp);
    const double v = seg.total_cost;
    cache_.emplace(x, v);
    result_.trace.push_back({x, v});
    if (v < result_.value) {
      result_.value = v;
      result_.theta_star = x;
      result_.segmentation = std::move(seg);
    }
    return v;
  }

  void local_search(double x0) {
    x0 = std::clamp(x0, lo_, hi_);
    const double width = hi_ - lo_;
    const double h = config_.initial_step * width;
    const double f0 = eval(x0);

    // Downhill bracketing: find a < b < c with f(b) <= f(a), f(c).
    double dir = 1.0;
    double right = std::min(x0 + h, hi_);
    if (eval(right) >= f0) {
      const double left = std::max(x0 - h, lo_);
      if (eval(left) >= f0) {
        golden(left, right);
        return;
      }
      dir = -1.0;
    }
    double prev = x0;
    double cur = std::clamp(x0 + dir * h, lo_, hi_);
    double step = h;
    for (std::size_t it = 0; it < config_.max_iterations; ++it) {
      step /= kInvPhi;
      const double next = std::clamp(cur + dir * step, lo_, hi_);
      if (next == cur) break;  // reached the bracket edge
      if (eval(next) >= eval(cur)) {
        golden(std::min(prev, next), std::max(prev, next));
        return;
      }
      prev = cur;
      cur = next;
    }
    golden(std::min(prev, cur), std::max(prev, cur));
  }

  void golden(double a, double b) {
    const double tol = std::max(config_.resolution * (hi_ - lo_), 1e-12);
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (std::size_t it = 0; it < config_.max_iterations && b - a > tol; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = eval(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = eval(x2);
      }
    }
  }

  void refine() {
    const double centre = result_.theta_star;
    const double res = config_.resolution * (hi_ - lo_);
    const auto k = static_cast<long>(config_.refine_points);
    for (long i = -k; i <= k; ++i) eval(centre + static_cast<double>(i) * res);
  }

  ProfileResult take() { return std::move(result_); }
  const ProfileResult& current() const { return result_; }

 private:
  const TimeSeries& ts_;
  const CostModel& cost_;
  const PenaltySpec& penalty_;
  const ProfileConfig& config_;
  double lo_;
  double hi_;
  std::map<double, double> cache_;
  ProfileResult result_;
};

}  // namespace

ProfileResult apelt_profile(const TimeSeries& ts, const CostModel& cost,
                            const PenaltySpec& penalty, double theta_init,
                            const ProfileConfig& config) {
  if (cost.theta_size() != 1) {
    throw std::invalid_argument("profile search requires a scalar normal-state parameter");
  }
  const double lo = config.lower.value_or(ts.min_value() - 1.0);
  const double hi = config.upper.value_or(ts.max_value() + 1.0);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("profile bracket must be finite with lower < upper");
  }
  if (!std::isfinite(theta_init)) throw std::invalid_argument("initial value is not finite");
  if (config.starts == 0) throw std::invalid_argument("profile search needs at least one start");

  ProfileSearch search(ts, cost, penalty, config, lo, hi);
  search.local_search(theta_init);
  for (std::size_t j = 1; j < config.starts; ++j) {
    search.local_search(lo + (hi - lo) * static_cast<double>(j) /
                                 static_cast<double>(config.starts));
  }
  if (!std::isfinite(search.current().value)) {
    throw std::invalid_argument("no finite evaluation inside the profile bracket");
  }
  search.refine();
  return search.take();
}

}  // namespace apelt
