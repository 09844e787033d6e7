#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/pipeline.hpp"

namespace soilcast {

struct EvaluationReport {
  std::string classifier;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  double accuracy_percent = 0.0;
  // confusion[actual][predicted], instance counts over all folds.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<std::string> class_values;
  std::vector<double> fold_accuracies;  // percent, one per fold
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::string params_echo;
};

// 100 * correct / total; full double precision, formatting is the caller's
// business. Zero total or correct > total raise InvalidArgumentError.
double accuracy_from_counts(std::size_t correct, std::size_t total);

// Fixed-point percent rendering ("91.90", "93.2093").
std::string format_percent(double value, int decimals);

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  // Runs a LEADING cfs wrapper once on the whole dataset instead of per
  // training fold. That lets test folds influence the subset, so it is off
  // by default and only offered for comparison with leak-prone protocols.
  bool selection_on_full_data = false;
};

// Stratified k-fold cross-validation of one pipeline: the full pipeline
// (selection, boosting, everything) retrains on each k-1 fold split and
// predicts the held-out fold. Counts, confusion and per-fold accuracies are
// aggregated over all folds. Deterministic per (dataset, spec, seed).
EvaluationReport cross_validate(const Dataset& dataset, const PipelineSpec& spec,
                                const PipelineParams& params, const CvOptions& options);

// cross_validate for each pipeline on identical fold assignments, sorted by
// accuracy descending (ties alphabetically). Needs at least two pipelines.
std::vector<EvaluationReport> compare(const Dataset& dataset,
                                      const std::vector<PipelineSpec>& specs,
                                      const PipelineParams& params, const CvOptions& options);

// One row per classifier under the columns "Correctly Classified Instances",
// "Incorrectly Classified Instances", "Accuracy (%)".
std::string render_comparison_table(const std::vector<EvaluationReport>& reports, int decimals);

// Two-line per-classifier summary (counts with percentages) plus the
// confusion matrix.
std::string render_report(const EvaluationReport& report, int decimals);

// Machine-readable forms; columns/keys are exactly classifier,
// correctly_classified, incorrectly_classified, accuracy_percent.
std::string render_reports_csv(const std::vector<EvaluationReport>& reports, int decimals);
std::string render_reports_json(const std::vector<EvaluationReport>& reports);

}  // namespace soilcast
