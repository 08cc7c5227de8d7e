#include "apelt/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apelt/special_functions.hpp"

namespace apelt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_range(const TimeSeries& ts, std::size_t t, std::size_t s, std::size_t min_len) {
  if (t >= s || s > ts.size()) throw std::out_of_range("segment bounds outside the sequence");
  if (s - t < min_len) throw SegmentTooShortError();
}

double rss_about_mean(const TimeSeries& ts, std::size_t t, std::size_t s) noexcept {
  const double len = static_cast<double>(s - t);
  const double sum = ts.centred_sum(t, s);
  return std::max(ts.centred_sum_sq(t, s) - sum * sum / len, 0.0);
}

double rss_about(const TimeSeries& ts, std::size_t t, std::size_t s, double mu) noexcept {
  const double len = static_cast<double>(s - t);
  const double d = mu - ts.centre();
  return std::max(ts.centred_sum_sq(t, s) - 2.0 * d * ts.centred_sum(t, s) + len * d * d, 0.0);
}

// min over v >= floor of len log(2 pi v) + rss / v.
double profiled_gaussian(double len, double rss, double var_floor) noexcept {
  const double v = std::max(rss / len, var_floor);
  return len * std::log(kTwoPi * v) + rss / v;
}

double fixedvar_kernel(double len, double rss, double variance) noexcept {
  return len * std::log(kTwoPi * variance) + rss / variance;
}

double beta_loglik(double n, double sum_log, double sum_log1m, double a, double b) noexcept {
  return (a - 1.0) * sum_log + (b - 1.0) * sum_log1m - n * log_beta(a, b);
}

double beta_fixed_kernel(const TimeSeries& ts, std::size_t t, std::size_t s, double a,
                         double b) noexcept {
  if (a == 1.0 && b == 1.0) return 0.0;
  const double n = static_cast<double>(s - t);
  return -2.0 * beta_loglik(n, ts.sum_log(t, s), ts.sum_log1m(t, s), a, b);
}

constexpr int kNewtonMaxIterations = 100;
constexpr double kScoreTolerance = 1e-8;
constexpr int kGridSize = 50;
constexpr double kBetaLower = 1e-2;
constexpr double kBetaUpper = 1e2;

BetaFit beta_grid(double n, double sl, double sl1m) {
  BetaFit best;
  best.cost = std::numeric_limits<double>::infinity();
  const double lo = std::log(kBetaLower);
  const double hi = std::log(kBetaUpper);
  for (int i = 0; i < kGridSize; ++i) {
    const double a = std::exp(lo + (hi - lo) * i / (kGridSize - 1));
    for (int j = 0; j < kGridSize; ++j) {
      const double b = std::exp(lo + (hi - lo) * j / (kGridSize - 1));
      const double c = -2.0 * beta_loglik(n, sl, sl1m, a, b);
      if (c < best.cost) {
        best.alpha = a;
        best.beta = b;
        best.cost = c;
      }
    }
  }
  best.converged = false;
  return best;
}

BetaFit beta_mle(const TimeSeries& ts, std::size_t t, std::size_t s) {
  const double n = static_cast<double>(s - t);
  const double sl = ts.sum_log(t, s);
  const double sl1m = ts.sum_log1m(t, s);

  // Method-of-moments start.
  const double mean = ts.sum(t, s) / n;
  const double cmean = ts.centred_sum(t, s) / n;
  const double var = std::max(ts.centred_sum_sq(t, s) / n - cmean * cmean, 0.0);
  double a = 1.0;
  double b = 1.0;
  if (var > 0.0 && mean > 0.0 && mean < 1.0 && var < mean * (1.0 - mean)) {
    const double common = mean * (1.0 - mean) / var - 1.0;
    a = mean * common;
    b = (1.0 - mean) * common;
  }

  a = std::clamp(a, kBetaLower, kBetaUpper);
  b = std::clamp(b, kBetaLower, kBetaUpper);

  double ll = beta_loglik(n, sl, sl1m, a, b);
  BetaFit fit;
  const auto accept = [&](int it) {
    fit.alpha = a;
    fit.beta = b;
    fit.cost = -2.0 * ll;
    fit.iterations = it;
    fit.converged = true;
    return fit;
  };
  // Coordinates pinned at a bound with the score pointing outside the box.
  const auto pinned = [](double x, double g) {
    return (x <= kBetaLower && g < 0.0) || (x >= kBetaUpper && g > 0.0);
  };
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    const double psi_ab = digamma(a + b);
    const double g1 = sl - n * (digamma(a) - psi_ab);
    const double g2 = sl1m - n * (digamma(b) - psi_ab);
    const bool fix1 = pinned(a, g1);
    const bool fix2 = pinned(b, g2);
    const double pg1 = fix1 ? 0.0 : g1;
    const double pg2 = fix2 ? 0.0 : g2;
    if (std::max(std::abs(pg1), std::abs(pg2)) <= kScoreTolerance * n) return accept(it);

    const double tri_ab = trigamma(a + b);
    const double h11 = -n * (trigamma(a) - tri_ab);
    const double h22 = -n * (trigamma(b) - tri_ab);
    const double h12 = n * tri_ab;
    double d1 = 0.0;
    double d2 = 0.0;
    if (!fix1 && !fix2) {
      const double det = h11 * h22 - h12 * h12;
      if (!(det > 0.0) || !std::isfinite(det)) break;
      d1 = -(h22 * g1 - h12 * g2) / det;
      d2 = -(h11 * g2 - h12 * g1) / det;
    } else if (!fix1) {
      d1 = -g1 / h11;
    } else {
      d2 = -g2 / h22;
    }

    double step = 1.0;
    bool moved = false;
    for (int half = 0; half < 60; ++half, step *= 0.5) {
      const double na = std::clamp(a + step * d1, kBetaLower, kBetaUpper);
      const double nb = std::clamp(b + step * d2, kBetaLower, kBetaUpper);
      const double nll = beta_loglik(n, sl, sl1m, na, nb);
      if (std::isfinite(nll) && nll >= ll) {
        moved = na != a || nb != b;
        a = na;
        b = nb;
        ll = nll;
        break;
      }
    }
    if (!moved) {
      // No ascent possible along the Newton direction: accept a point whose
      // projected score is already at rounding level.
      if (std::max(std::abs(pg1), std::abs(pg2)) <= 1e-6 * n) return accept(it);
      break;
    }
  }

  BetaFit grid = beta_grid(n, sl, sl1m);
  grid.iterations = kNewtonMaxIterations;
  return grid;
}

}  // namespace

PenaltySpec PenaltySpec::bic(CostFamily family, std::size_t n) {
  const double ln = std::log(static_cast<double>(n));
  switch (family) {
    case CostFamily::GaussianFull:
      return {2.0 * ln, 3.0 * ln, 3.0 * ln};
    case CostFamily::GaussianFixedVariance:
      return {ln, 2.0 * ln, 2.0 * ln};
    case CostFamily::Beta:
      return {ln, 3.0 * ln, 3.0 * ln};
  }
  return {};
}

void PenaltySpec::validate() const {
  for (double p : {normal, epidemic, uniform}) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("penalties must be finite and non-negative");
    }
  }
}

double cost_gaussian_full(const TimeSeries& ts, std::size_t t, std::size_t s,
                          std::size_t min_seg_len, double var_floor) {
  check_range(ts, t, s, min_seg_len);
  return profiled_gaussian(static_cast<double>(s - t), rss_about_mean(ts, t, s), var_floor);
}

double cost_gaussian_normalstate(const TimeSeries& ts, std::size_t t, std::size_t s,
                                 double mean, std::size_t min_seg_len, double var_floor) {
  check_range(ts, t, s, min_seg_len);
  return profiled_gaussian(static_cast<double>(s - t), rss_about(ts, t, s, mean), var_floor);
}

double cost_gaussian_fixedvar(const TimeSeries& ts, std::size_t t, std::size_t s,
                              double variance, std::optional<double> mean,
                              std::size_t min_seg_len) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("invalid model: variance must be positive");
  }
  check_range(ts, t, s, min_seg_len);
  const double rss = mean ? rss_about(ts, t, s, *mean) : rss_about_mean(ts, t, s);
  return fixedvar_kernel(static_cast<double>(s - t), rss, variance);
}

BetaFit fit_beta(const TimeSeries& ts, std::size_t t, std::size_t s, std::size_t min_seg_len) {
  if (!ts.has_log_prefixes()) throw std::invalid_argument("values outside (0,1)");
  check_range(ts, t, s, min_seg_len);
  return beta_mle(ts, t, s);
}

double cost_beta(const TimeSeries& ts, std::size_t t, std::size_t s,
                 std::optional<std::pair<double, double>> theta,
                 std::optional<std::size_t> min_seg_len) {
  if (!ts.has_log_prefixes()) throw std::invalid_argument("values outside (0,1)");
  if (theta) {
    if (!(theta->first > 0.0) || !(theta->second > 0.0)) {
      throw std::invalid_argument("Beta parameters must be positive");
    }
    check_range(ts, t, s, min_seg_len.value_or(1));
    return beta_fixed_kernel(ts, t, s, theta->first, theta->second);
  }
  check_range(ts, t, s, min_seg_len.value_or(2));
  return beta_mle(ts, t, s).cost;
}

CostModel::CostModel(CostFamily family, double variance, std::size_t min_normal,
                     std::size_t min_epidemic)
    : family_(family),
      variance_(variance),
      min_len_normal_(min_normal),
      min_len_epidemic_(min_epidemic) {}

CostModel CostModel::gaussian_full() { return CostModel(CostFamily::GaussianFull, 0.0, 2, 2); }

CostModel CostModel::gaussian_fixed_variance(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("invalid model: variance must be positive");
  }
  return CostModel(CostFamily::GaussianFixedVariance, variance, 1, 1);
}

CostModel CostModel::beta() { return CostModel(CostFamily::Beta, 0.0, 1, 2); }

CostModel& CostModel::set_min_seg_len(std::size_t len) {
  if (len == 0) throw std::invalid_argument("min_seg_len must be at least 1");
  min_len_normal_ = len;
  min_len_epidemic_ = len;
  return *this;
}

std::size_t CostModel::theta_size() const noexcept {
  return family_ == CostFamily::Beta ? 2 : 1;
}

void CostModel::validate_theta(const Theta& theta) const {
  if (theta.size() != theta_size()) {
    throw std::invalid_argument("normal-state parameter has the wrong dimension");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) throw std::invalid_argument("normal-state parameter is not finite");
  }
  if (family_ == CostFamily::Beta && (!(theta[0] > 0.0) || !(theta[1] > 0.0))) {
    throw std::invalid_argument("Beta parameters must be positive");
  }
}

void CostModel::validate_series(const TimeSeries& ts) const {
  if (family_ == CostFamily::Beta && !ts.has_log_prefixes()) {
    throw std::invalid_argument("values outside (0,1)");
  }
}

double CostModel::normal_cost(const TimeSeries& ts, std::size_t t, std::size_t s,
                              const Theta& theta) const noexcept {
  const double len = static_cast<double>(s - t);
  switch (family_) {
    case CostFamily::GaussianFull:
      return profiled_gaussian(len, rss_about(ts, t, s, theta[0]), var_floor_);
    case CostFamily::GaussianFixedVariance:
      return fixedvar_kernel(len, rss_about(ts, t, s, theta[0]), variance_);
    case CostFamily::Beta:
      return beta_fixed_kernel(ts, t, s, theta[0], theta[1]);
  }
  return 0.0;
}

double CostModel::epidemic_cost(const TimeSeries& ts, std::size_t t,
                                std::size_t s) const noexcept {
  const double len = static_cast<double>(s - t);
  switch (family_) {
    case CostFamily::GaussianFull:
      return profiled_gaussian(len, rss_about_mean(ts, t, s), var_floor_);
    case CostFamily::GaussianFixedVariance:
      return fixedvar_kernel(len, rss_about_mean(ts, t, s), variance_);
    case CostFamily::Beta:
      return beta_mle(ts, t, s).cost;
  }
  return 0.0;
}

SegmentParams CostModel::fit_normal(const TimeSeries& ts, std::size_t t, std::size_t s,
                                    const Theta& theta) const {
  const double len = static_cast<double>(s - t);
  switch (family_) {
    case CostFamily::GaussianFull:
      return {{theta[0]}, {std::max(rss_about(ts, t, s, theta[0]) / len, var_floor_)}};
    case CostFamily::GaussianFixedVariance:
      return {{theta[0]}, {variance_}};
    case CostFamily::Beta:
      return {{theta[0], theta[1]}, {}};
  }
  return {};
}

SegmentParams CostModel::fit_epidemic(const TimeSeries& ts, std::size_t t,
                                      std::size_t s) const {
  const double len = static_cast<double>(s - t);
  const double mean = ts.sum(t, s) / len;
  switch (family_) {
    case CostFamily::GaussianFull:
      return {{mean}, {std::max(rss_about_mean(ts, t, s) / len, var_floor_)}};
    case CostFamily::GaussianFixedVariance:
      return {{mean}, {variance_}};
    case CostFamily::Beta: {
      const BetaFit fit = beta_mle(ts, t, s);
      return {{fit.alpha, fit.beta}, {}};
    }
  }
  return {};
}

}  // namespace apelt
