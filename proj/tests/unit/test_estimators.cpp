#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "apelt/estimators.hpp"
#include "apelt/rng.hpp"
#include "apelt/simulation.hpp"

using namespace apelt;

namespace {

// Moving-average residual variance written out term by term.
double localreg_direct(const std::vector<double>& y, std::size_t h) {
  const std::size_t n = y.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = std::min({h, i, n - 1 - i});
    double sum = 0.0;
    for (std::size_t j = i - r; j <= i + r; ++j) sum += y[j];
    const double avg = sum / static_cast<double>(2 * r + 1);
    total += (y[i] - avg) * (y[i] - avg);
  }
  return total / static_cast<double>(n);
}

}  // namespace

TEST_CASE("local-regression variance of a constant sequence is zero") {
  const auto est = estimate_variance_localreg(TimeSeries(std::vector<double>(50, 4.2)));
  CHECK_FALSE(est.fell_back);
  CHECK(est.value < 1e-20);
}

TEST_CASE("local-regression variance matches the direct formula") {
  Rng rng(3);
  std::vector<double> y(137);
  for (auto& v : y) v = rng.normal(1.0, 2.0);
  for (std::size_t h : {1u, 3u, 10u}) {
    CAPTURE(h);
    CHECK(estimate_variance_localreg(TimeSeries(y), h).value ==
          doctest::Approx(localreg_direct(y, h)).epsilon(1e-10));
  }
}

TEST_CASE("local-regression variance falls back on short input") {
  std::vector<double> y(15);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 4);
  const auto est = estimate_variance_localreg(TimeSeries(y), 10);
  CHECK(est.fell_back);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= 15.0;
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  CHECK(est.value == doctest::Approx(var / 15.0));
}

TEST_CASE("local-regression variance is calibrated on white noise") {
  int inside = 0;
  constexpr int kReps = 1000;
  for (int r = 0; r < kReps; ++r) {
    Rng rng = Rng::stream(2024, static_cast<std::uint64_t>(r));
    std::vector<double> y(5000);
    for (auto& v : y) v = rng.normal();
    const double est = estimate_variance_localreg(TimeSeries(y), 10).value;
    if (est > 0.9 && est < 1.1) ++inside;
  }
  CHECK(inside >= 990);
}

TEST_CASE("MAD variance of first differences") {
  Rng rng(11);
  std::vector<double> y(20000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.normal(i < 10000 ? 0.0 : 5.0, 1.5);
  CHECK(estimate_variance_mad(TimeSeries(y)) == doctest::Approx(2.25).epsilon(0.05));
}

TEST_CASE("plug-in normal mean") {
  CHECK(estimate_normal_mean_plugin(TimeSeries(std::vector<double>(30, -1.25))) == -1.25);
  CHECK_THROWS_WITH_AS(estimate_normal_mean_plugin(TimeSeries({1, 2, 3, 4, 5}), 10),
                       "sequence shorter than window", std::invalid_argument);
  // Window means of 1..5 with w = 2: 1.5, 2.5, 3.5, 4.5 -> median 3.
  CHECK(estimate_normal_mean_plugin(TimeSeries({1, 2, 3, 4, 5}), 2) == doctest::Approx(3.0));
}

TEST_CASE("plug-in normal mean is robust to epidemic stretches") {
  int close = 0;
  constexpr int kReps = 100;
  for (int r = 0; r < kReps; ++r) {
    DgpSpec spec;
    spec.n = 2000;
    spec.m = 19;
    spec.seed = 500 + static_cast<std::uint64_t>(r);
    const auto seq = generate_epidemic_mean(spec);
    if (std::abs(estimate_normal_mean_plugin(TimeSeries(seq.values))) < 0.1) ++close;
  }
  CHECK(close >= 90);
}
