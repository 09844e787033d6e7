#include "soilcast/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>

#include <json.hpp>

#include "soilcast/cfs.hpp"
#include "soilcast/error.hpp"
#include "soilcast/rng.hpp"

namespace soilcast {

namespace {

// Per-fold training seeds live in their own stream, away from the fold
// assignment itself.
constexpr std::uint64_t kFoldSeedStream = 0x9000;

std::string pad(const std::string& text, std::size_t width, bool right_align) {
  if (text.size() >= width) return text;
  const std::string fill(width - text.size(), ' ');
  return right_align ? fill + text : text + fill;
}

}  // namespace

double accuracy_from_counts(std::size_t correct, std::size_t total) {
  if (total == 0) throw InvalidArgumentError("accuracy needs a positive total");
  if (correct > total) throw InvalidArgumentError("correct count exceeds total");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::string format_percent(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

EvaluationReport cross_validate(const Dataset& dataset, const PipelineSpec& spec,
                                const PipelineParams& params, const CvOptions& options) {
  const FoldAssignment folds = stratified_k_folds(dataset, options.folds, options.seed);
  const std::size_t num_classes = dataset.num_classes();

  EvaluationReport report;
  report.classifier = pipeline_display_name(spec);
  report.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  report.class_values = dataset.class_attribute().nominal_values;
  report.folds = options.folds;
  report.seed = options.seed;
  report.params_echo = pipeline_name(spec) + " cv=" + std::to_string(options.folds) +
                       " seed=" + std::to_string(options.seed);

  // With the leaky variant requested, a leading selection wrapper runs once
  // here on everything, and each fold trains only the rest of the pipeline.
  std::optional<cfs::FeatureSubset> full_subset;
  PipelineSpec inner_spec = spec;
  if (options.selection_on_full_data && !spec.wrappers.empty() && spec.wrappers.front() == "cfs") {
    full_subset = cfs::best_first_search(cfs::build_correlations(dataset));
    inner_spec.wrappers.erase(inner_spec.wrappers.begin());
  }

  for (std::size_t f = 0; f < folds.num_folds; ++f) {
    const auto [train, test] = split_by_fold(dataset, folds, f);
    PipelineParams fold_params = params;
    fold_params.seed = mix_seed(options.seed, kFoldSeedStream + f);

    Model model;
    if (full_subset) {
      SelectedModel selected;
      selected.subset = *full_subset;
      selected.original_class_index = dataset.class_index;
      selected.base = std::make_unique<Model>(
          train_pipeline(cfs::filter_dataset(train, *full_subset), inner_spec, fold_params));
      model.node = std::move(selected);
    } else {
      model = train_pipeline(train, spec, fold_params);
    }

    std::size_t fold_correct = 0;
    for (const auto& inst : test.instances) {
      const int actual = test.label_of(inst);
      const int predicted = predict_class(model, inst);
      report.confusion[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)]++;
      if (predicted == actual) ++fold_correct;
    }
    report.correct += fold_correct;
    report.incorrect += test.instances.size() - fold_correct;
    report.fold_accuracies.push_back(accuracy_from_counts(fold_correct, test.instances.size()));
  }
  report.accuracy_percent = accuracy_from_counts(report.correct, report.correct + report.incorrect);
  return report;
}

std::vector<EvaluationReport> compare(const Dataset& dataset,
                                      const std::vector<PipelineSpec>& specs,
                                      const PipelineParams& params, const CvOptions& options) {
  if (specs.size() < 2) throw InvalidArgumentError("compare needs at least two pipelines");
  std::vector<EvaluationReport> reports;
  reports.reserve(specs.size());
  for (const auto& spec : specs) {
    reports.push_back(cross_validate(dataset, spec, params, options));
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const EvaluationReport& a, const EvaluationReport& b) {
                     if (a.accuracy_percent != b.accuracy_percent) {
                       return a.accuracy_percent > b.accuracy_percent;
                     }
                     return a.classifier < b.classifier;
                   });
  return reports;
}

std::string render_comparison_table(const std::vector<EvaluationReport>& reports, int decimals) {
  const std::vector<std::string> headers = {"Classifier", "Correctly Classified Instances",
                                            "Incorrectly Classified Instances", "Accuracy (%)"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& report : reports) {
    rows.push_back({report.classifier, std::to_string(report.correct),
                    std::to_string(report.incorrect),
                    format_percent(report.accuracy_percent, decimals)});
  }
  std::vector<std::size_t> widths;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    std::size_t width = headers[c].size();
    for (const auto& row : rows) width = std::max(width, row[c].size());
    widths.push_back(width);
  }
  std::string out;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    if (c) out += "  ";
    out += pad(headers[c], widths[c], false);
  }
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += pad(row[c], widths[c], c != 0);
    }
    out += "\n";
  }
  return out;
}

std::string render_report(const EvaluationReport& report, int decimals) {
  const std::size_t total = report.correct + report.incorrect;
  std::string out = report.classifier + " (" + report.params_echo + ")\n";
  const std::string correct_count = std::to_string(report.correct);
  const std::string incorrect_count = std::to_string(report.incorrect);
  const std::size_t count_width = std::max(correct_count.size(), incorrect_count.size());
  const std::string correct_pct = format_percent(accuracy_from_counts(report.correct, total), decimals);
  const std::string incorrect_pct =
      format_percent(accuracy_from_counts(report.incorrect, total), decimals);
  const std::size_t pct_width = std::max(correct_pct.size(), incorrect_pct.size());
  out += "Correctly Classified Instances     " + pad(correct_count, count_width, true) + "    " +
         pad(correct_pct, pct_width, true) + " %\n";
  out += "Incorrectly Classified Instances   " + pad(incorrect_count, count_width, true) + "    " +
         pad(incorrect_pct, pct_width, true) + " %\n";

  if (!report.confusion.empty()) {
    out += "Confusion matrix (rows = actual)\n";
    std::size_t cell_width = 1;
    for (const auto& value : report.class_values) cell_width = std::max(cell_width, value.size());
    for (const auto& row : report.confusion) {
      for (std::size_t v : row) cell_width = std::max(cell_width, std::to_string(v).size());
    }
    out += pad("", cell_width, false);
    for (const auto& value : report.class_values) out += "  " + pad(value, cell_width, true);
    out += "\n";
    for (std::size_t r = 0; r < report.confusion.size(); ++r) {
      out += pad(r < report.class_values.size() ? report.class_values[r] : "?", cell_width, false);
      for (std::size_t v : report.confusion[r]) {
        out += "  " + pad(std::to_string(v), cell_width, true);
      }
      out += "\n";
    }
  }
  return out;
}

std::string render_reports_csv(const std::vector<EvaluationReport>& reports, int decimals) {
  std::string out = "classifier,correctly_classified,incorrectly_classified,accuracy_percent\n";
  for (const auto& report : reports) {
    out += report.classifier + "," + std::to_string(report.correct) + "," +
           std::to_string(report.incorrect) + "," +
           format_percent(report.accuracy_percent, decimals) + "\n";
  }
  return out;
}

std::string render_reports_json(const std::vector<EvaluationReport>& reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& report : reports) {
    rows.push_back({{"classifier", report.classifier},
                    {"correctly_classified", report.correct},
                    {"incorrectly_classified", report.incorrect},
                    {"accuracy_percent", report.accuracy_percent}});
  }
  return rows.dump(2) + "\n";
}

}  // namespace soilcast
