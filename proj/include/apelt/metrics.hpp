#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "apelt/cost_model.hpp"
#include "apelt/segmentation.hpp"
#include "apelt/simulation.hpp"
#include "apelt/timeseries.hpp"

namespace apelt {

/// Evaluation measures of one replication. Only the fields relevant to the
/// protocol are populated.
struct EvalReport {
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> mse;
  std::optional<double> sensitivity;
  std::optional<double> precision;
  std::optional<double> fdr;
  std::optional<double> fnr;
  std::optional<double> mdr;
};

struct RecoveryRates {
  double tpr = 0.0;
  double fpr = 0.0;
};

/// One-to-one matching of estimated to true change-points, closest pairs
/// first, accepting pairs at distance <= tol. TPR is 1 when there are no
/// true change-points; FPR is 0 when nothing was estimated.
RecoveryRates tpr_fpr(const Segmentation& est, const LabeledSequence& truth, std::size_t tol = 10);

/// Root mean squared error between the fitted and true per-index means:
/// (sum_t (theta_hat_t - theta_t)^2 / n)^{1/2}. The square root is part of
/// the definition in use despite the name.
double param_mse(const Segmentation& est, const LabeledSequence& truth);

struct SignalRates {
  double sensitivity = 0.0;
  double precision = 0.0;
};

/// Estimated segments shorter than 2L are detected signals. A true signal
/// (epidemic segment of the truth) counts as found when a detected signal
/// overlaps it; a detected signal is correct when it overlaps a true signal.
/// Sensitivity = found / K (1 if K = 0), precision = correct / detected
/// (1 if nothing was detected).
SignalRates sensitivity_precision(const Segmentation& est, const LabeledSequence& truth,
                                  std::size_t epidemic_length);

struct TestingRates {
  double fdr = 0.0;
  double fnr = 0.0;
  double mdr = 0.0;
  std::size_t false_rejections = 0;
  std::size_t false_acceptances = 0;
  std::size_t rejections = 0;
  std::size_t acceptances = 0;
  std::size_t alternatives = 0;
};

/// Per-index rejection = estimated epidemic state; per-index alternative =
/// true epidemic state. Empty denominators give a rate of 0.
TestingRates multiple_testing_rates(const Segmentation& est, const LabeledSequence& truth);

/// Labels a stateless segmentation: odd-numbered segments (1st, 3rd, ...)
/// are epidemic if their total length is below n/2, otherwise the
/// even-numbered ones are.
Segmentation postprocess_alternating(const Segmentation& est, std::size_t n);

/// 2 x negative log-likelihood of the fitted model plus p log n, with
/// p = 2m + 2 for stateless fits and p = m + 2 + (#epidemic segments) for
/// alternating ones. With `homoscedastic` the Gaussian likelihood uses the
/// pooled variance MLE around the fitted segment means.
double bic_score(const Segmentation& est, const TimeSeries& ts, const CostModel& cost,
                 bool homoscedastic);

/// Number of free parameters counted by bic_score.
std::size_t bic_parameter_count(const Segmentation& est);

// CSV serialisation of EvalReport rows. Missing fields are written empty.
std::vector<std::string> eval_report_columns();
void write_eval_fields(std::ostream& out, const EvalReport& report);
/// Field-wise mean over the reports that populate each field.
EvalReport mean_report(const std::vector<EvalReport>& reports);

}  // namespace apelt
