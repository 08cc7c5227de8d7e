#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apelt/cost_model.hpp"
#include "support/grid.hpp"

using namespace apelt;
using testsupport::gaussian_nll2;

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)
}

TEST_CASE("full Gaussian cost at the segment MLE") {
  const std::vector<double> y{1.0, 3.0};
  const TimeSeries ts(y);
  const double closed = cost_gaussian_full(ts, 0, 2);
  CHECK(closed == doctest::Approx(2.0 * kLog2Pi + 2.0).epsilon(1e-14));
  CHECK(closed == doctest::Approx(5.67575413281869).epsilon(1e-12));

  const double grid = testsupport::grid_min_2d(
      [&](double mu, double var) { return gaussian_nll2(y, mu, var); }, 0.0, 4.0, 0.05, 5.0);
  CHECK(closed <= grid + 1e-12);
  CHECK(closed == doctest::Approx(grid).epsilon(1e-8));
}

TEST_CASE("full Gaussian cost of a skewed four-point segment") {
  const std::vector<double> y{0.0, 0.0, 0.0, 4.0};
  const TimeSeries ts(y);
  const double closed = cost_gaussian_full(ts, 0, 4);
  CHECK(closed == doctest::Approx(4.0 * std::log(6.0 * std::numbers::pi) + 4.0).epsilon(1e-14));
  const double grid = testsupport::grid_min_2d(
      [&](double mu, double var) { return gaussian_nll2(y, mu, var); }, -1.0, 3.0, 0.1, 9.0);
  CHECK(closed == doctest::Approx(grid).epsilon(1e-8));
}

TEST_CASE("constant segment hits the variance floor") {
  const TimeSeries ts({2.5, 2.5});
  CHECK(cost_gaussian_full(ts, 0, 2) ==
        doctest::Approx(2.0 * std::log(2.0 * std::numbers::pi * kVarianceFloor)).epsilon(1e-14));
  CHECK(std::isfinite(cost_gaussian_normalstate(TimeSeries({0.0, 0.0}), 0, 2, 0.0)));
}

TEST_CASE("segments below the minimum length are rejected") {
  const TimeSeries ts({1.0, 2.0, 3.0});
  CHECK_THROWS_WITH_AS(cost_gaussian_full(ts, 1, 2), "segment too short", SegmentTooShortError);
  CHECK_THROWS_AS(cost_gaussian_normalstate(ts, 0, 1, 0.0), SegmentTooShortError);
  CHECK_NOTHROW(cost_gaussian_full(ts, 1, 2, 1));
  CHECK_THROWS_AS(cost_gaussian_full(ts, 2, 2), std::out_of_range);
}

TEST_CASE("normal-state Gaussian cost with the mean held fixed") {
  const std::vector<double> y{1.0, 3.0};
  const TimeSeries ts(y);
  CHECK(cost_gaussian_normalstate(ts, 0, 2, 2.0) ==
        doctest::Approx(cost_gaussian_full(ts, 0, 2)).epsilon(1e-14));

  const double at_zero = cost_gaussian_normalstate(ts, 0, 2, 0.0);
  CHECK(at_zero == doctest::Approx(2.0 * std::log(10.0 * std::numbers::pi) + 2.0).epsilon(1e-14));
  const double grid = testsupport::grid_min_1d(
      [&](double var) { return gaussian_nll2(y, 0.0, var); }, 0.1, 20.0);
  CHECK(at_zero == doctest::Approx(grid).epsilon(1e-10));
}

TEST_CASE("fixed-variance Gaussian cost") {
  CHECK(cost_gaussian_fixedvar(TimeSeries({0.0, 0.0}), 0, 2, 1.0, 0.0) ==
        doctest::Approx(2.0 * kLog2Pi).epsilon(1e-14));
  CHECK(cost_gaussian_fixedvar(TimeSeries({5.0}), 0, 1, 4.0, 0.0) ==
        doctest::Approx(std::log(8.0 * std::numbers::pi) + 25.0 / 4.0).epsilon(1e-14));

  const std::vector<double> y{1.0, 3.0};
  const double closed = cost_gaussian_fixedvar(TimeSeries(y), 0, 2, 1.0, std::nullopt);
  CHECK(closed == doctest::Approx(2.0 * kLog2Pi + 2.0).epsilon(1e-14));
  const double grid = testsupport::grid_min_1d(
      [&](double mu) { return gaussian_nll2(y, mu, 1.0); }, -2.0, 6.0);
  CHECK(closed == doctest::Approx(grid).epsilon(1e-10));

  CHECK_THROWS_AS(cost_gaussian_fixedvar(TimeSeries(y), 0, 2, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CostModel::gaussian_fixed_variance(-1.0), std::invalid_argument);
}

TEST_CASE("uniform Beta cost is exactly zero") {
  const TimeSeries ts({0.3, 0.9, 0.01, 0.5});
  CHECK(cost_beta(ts, 0, 4, std::pair{1.0, 1.0}) == 0.0);
  CHECK(cost_beta(ts, 2, 3, std::pair{1.0, 1.0}) == 0.0);
}

TEST_CASE("fixed Beta cost matches the density") {
  const TimeSeries ts({0.2, 0.6});
  // Beta(2, 3) density: 12 p (1 - p)^2.
  const double expected =
      -2.0 * (std::log(12.0 * 0.2 * 0.8 * 0.8) + std::log(12.0 * 0.6 * 0.4 * 0.4));
  CHECK(cost_beta(ts, 0, 2, std::pair{2.0, 3.0}) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("Beta MLE never exceeds the uniform cost") {
  CHECK(cost_beta(TimeSeries({0.5, 0.5}), 0, 2, std::nullopt) <= 0.0);
  CHECK(cost_beta(TimeSeries({0.1, 0.7, 0.4}), 0, 3, std::nullopt) <= 0.0);
}

TEST_CASE("Beta MLE regression value") {
  // Dense-grid minimum of -2 log L over (0, 50]^2, refined locally.
  constexpr double kGridMinimum = -13.5471000410;
  const TimeSeries ts({0.1, 0.2, 0.15, 0.08});
  const BetaFit fit = fit_beta(ts, 0, 4);
  CHECK(fit.converged);
  CHECK(fit.cost == doctest::Approx(kGridMinimum).epsilon(1e-9));
  CHECK(fit.alpha == doctest::Approx(7.0995).epsilon(1e-3));
  CHECK(fit.beta == doctest::Approx(46.472).epsilon(1e-3));
  CHECK(cost_beta(ts, 0, 4, std::nullopt) == doctest::Approx(fit.cost).epsilon(1e-15));
}

TEST_CASE("Beta MLE stays inside the parameter box") {
  const TimeSeries ts({0.40000, 0.40001});
  const BetaFit fit = fit_beta(ts, 0, 2);
  CHECK(fit.alpha <= 100.0);
  CHECK(fit.beta <= 100.0);
  CHECK(std::isfinite(fit.cost));
  CHECK(fit.cost == doctest::Approx(cost_beta(ts, 0, 2, std::pair{fit.alpha, fit.beta})));
}

TEST_CASE("Beta cost requires unit-interval data") {
  const TimeSeries ts({0.5, 2.0});
  CHECK_THROWS_WITH_AS(cost_beta(ts, 0, 2, std::nullopt), "values outside (0,1)",
                       std::invalid_argument);
  CHECK_THROWS_AS(CostModel::beta().validate_series(ts), std::invalid_argument);
}

TEST_CASE("cost model dispatch") {
  const TimeSeries ts({1.0, 3.0, -0.5, 2.0});
  const auto full = CostModel::gaussian_full();
  CHECK(full.min_seg_len(State::Normal) == 2);
  CHECK(full.epidemic_cost(ts, 0, 4) == doctest::Approx(cost_gaussian_full(ts, 0, 4)));
  CHECK(full.normal_cost(ts, 0, 4, {0.5}) ==
        doctest::Approx(cost_gaussian_normalstate(ts, 0, 4, 0.5)));

  const auto fixedvar = CostModel::gaussian_fixed_variance(2.0);
  CHECK(fixedvar.min_seg_len(State::Epidemic) == 1);
  CHECK(fixedvar.normal_cost(ts, 1, 2, {0.0}) ==
        doctest::Approx(cost_gaussian_fixedvar(ts, 1, 2, 2.0, 0.0)));

  const auto beta = CostModel::beta();
  CHECK(beta.min_seg_len(State::Normal) == 1);
  CHECK(beta.min_seg_len(State::Epidemic) == 2);
  CHECK(beta.theta_size() == 2);
  CHECK_THROWS_AS(beta.validate_theta({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(beta.validate_theta({1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(full.validate_theta({NAN}), std::invalid_argument);
}

TEST_CASE("fitted segment parameters") {
  const TimeSeries ts({1.0, 3.0});
  const auto full = CostModel::gaussian_full();
  const SegmentParams epi = full.fit_epidemic(ts, 0, 2);
  CHECK(epi.interest.at(0) == 2.0);
  CHECK(epi.nuisance.at(0) == doctest::Approx(1.0));
  const SegmentParams norm = full.fit_normal(ts, 0, 2, {0.0});
  CHECK(norm.interest.at(0) == 0.0);
  CHECK(norm.nuisance.at(0) == doctest::Approx(5.0));
}

TEST_CASE("BIC penalties per family") {
  const double ln = std::log(1000.0);
  const auto g = PenaltySpec::bic(CostFamily::GaussianFull, 1000);
  CHECK(g.normal == doctest::Approx(2.0 * ln));
  CHECK(g.epidemic == doctest::Approx(3.0 * ln));
  CHECK(g.uniform == doctest::Approx(3.0 * ln));
  const auto h = PenaltySpec::bic(CostFamily::GaussianFixedVariance, 1000);
  CHECK(h.normal == doctest::Approx(ln));
  CHECK(h.epidemic == doctest::Approx(2.0 * ln));
  CHECK_THROWS_AS((PenaltySpec{-1.0, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PenaltySpec{1.0, INFINITY, 1.0}.validate()), std::invalid_argument);
}
