#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soilcast/error.hpp"
#include "soilcast/evaluation.hpp"
#include "soilcast/model_io.hpp"
#include "soilcast/pipeline.hpp"

namespace {

using namespace soilcast;

// Shared knobs for everything that trains or evaluates a pipeline.
struct CommonOptions {
  std::string data_path;
  std::string class_column = "last";
  std::uint64_t seed = 0;
  std::size_t cv = 10;
  int decimals = 4;
  std::string format = "table";
  std::string out_path;
  bool select_on_full = false;

  double min_leaf = 2.0;
  double confidence = 0.25;
  bool no_prune = false;
  std::size_t pruning_folds = 5;
  double min_node_size = 30.0;
  std::size_t utility_folds = 5;
  std::size_t iterations = 10;
  bool resample = false;
};

PipelineParams pipeline_params(const CommonOptions& opts) {
  PipelineParams params;
  params.c45.min_instances_per_leaf = opts.min_leaf;
  params.c45.confidence_factor = opts.confidence;
  params.c45.pruning = !opts.no_prune;
  params.cart.min_instances_per_leaf = opts.min_leaf;
  params.cart.pruning_folds = opts.pruning_folds;
  params.nbtree.min_node_size = opts.min_node_size;
  params.nbtree.utility_folds = opts.utility_folds;
  params.boost_iterations = opts.iterations;
  params.boost_resample = opts.resample;
  params.seed = opts.seed;
  return params;
}

std::string params_echo(const CommonOptions& opts) {
  return "seed=" + std::to_string(opts.seed) + " min-leaf=" + format_percent(opts.min_leaf, 0) +
         " cf=" + format_percent(opts.confidence, 2) +
         " iterations=" + std::to_string(opts.iterations) +
         (opts.resample ? " resample" : "");
}

Dataset load_data(const CommonOptions& opts) {
  return load_csv(opts.data_path, ColumnRef::parse(opts.class_column));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw IoError("cannot write output file '" + out_path + "'");
  file << text;
  if (!file) throw IoError("failed while writing output file '" + out_path + "'");
}

std::string shortest_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

// Registers --seed (with the SOILCAST_SEED fallback) plus whichever knob
// groups a subcommand needs.
void add_seed_option(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--seed", opts.seed, "Random seed (falls back to $SOILCAST_SEED)")
      ->envname("SOILCAST_SEED");
}

void add_data_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--data", opts.data_path, "Training data CSV")->required();
  cmd->add_option("--class-column", opts.class_column,
                  "Class column name, zero-based index, or 'last'");
}

void add_learner_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--min-leaf", opts.min_leaf, "Minimum instance weight per tree branch");
  cmd->add_option("--cf", opts.confidence, "Pruning confidence factor of the gain-ratio tree");
  cmd->add_flag("--no-prune", opts.no_prune, "Skip error-based pruning of the gain-ratio tree");
  cmd->add_option("--pruning-folds", opts.pruning_folds,
                  "Internal folds of the Gini tree's cost-complexity selection");
  cmd->add_option("--min-node-size", opts.min_node_size,
                  "Minimum node weight the hybrid tree will consider splitting");
  cmd->add_option("--utility-folds", opts.utility_folds,
                  "Internal folds of the hybrid tree's utility estimate");
  cmd->add_option("--iterations", opts.iterations, "Boosting rounds");
  cmd->add_flag("--resample", opts.resample,
                "Boost on weight-proportional bootstraps instead of passing weights");
}

void add_report_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--cv", opts.cv, "Cross-validation folds");
  cmd->add_option("--decimals", opts.decimals, "Decimal places for percentages")
      ->check(CLI::IsMember({2, 4}));
  cmd->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--out", opts.out_path, "Write the report here instead of stdout");
  cmd->add_flag("--select-on-full", opts.select_on_full,
                "Run a leading cfs wrapper once on the full dataset (leaks test folds "
                "into selection; for protocol comparison only)");
}

std::string pipeline_check(const std::string& name) {
  try {
    parse_pipeline(name);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::string render_by_format(const std::vector<EvaluationReport>& reports,
                             const CommonOptions& opts, bool comparison) {
  if (opts.format == "csv") return render_reports_csv(reports, opts.decimals);
  if (opts.format == "json") return render_reports_json(reports);
  if (comparison) return render_comparison_table(reports, opts.decimals);
  std::string out;
  for (const auto& report : reports) out += render_report(report, opts.decimals);
  return out;
}

void run_synth(const CommonOptions& opts, std::size_t n, double separation) {
  const Dataset data = synthesize_soil_dataset(n, opts.seed, separation);
  save_csv(data, opts.out_path);
  std::cout << "wrote " << data.instances.size() << " instances to " << opts.out_path << "\n";
}

void run_train(const CommonOptions& opts, const std::string& algo,
               const std::string& model_path) {
  const Dataset data = load_data(opts);
  const PipelineSpec spec = parse_pipeline(algo);
  const PipelineParams params = pipeline_params(opts);

  ModelFile file;
  file.pipeline = pipeline_name(spec);
  file.params_echo = params_echo(opts);
  file.schema = data.schema;
  file.class_index = data.class_index;
  file.model = train_pipeline(data, spec, params);
  save_model(file, model_path);

  std::cout << "trained " << pipeline_display_name(spec) << " on " << data.instances.size()
            << " instances; model written to " << model_path << "\n";
  if (const cfs::FeatureSubset* subset = selected_subset(file.model)) {
    std::cout << "selected attributes (" << subset->attributes.size() << "):";
    for (std::size_t a : subset->attributes) std::cout << " " << data.schema[a].name;
    std::cout << "\n";
  }
}

void run_eval(const CommonOptions& opts, const std::string& algo) {
  const Dataset data = load_data(opts);
  const PipelineSpec spec = parse_pipeline(algo);
  CvOptions cv;
  cv.folds = opts.cv;
  cv.seed = opts.seed;
  cv.selection_on_full_data = opts.select_on_full;
  const EvaluationReport report = cross_validate(data, spec, pipeline_params(opts), cv);
  emit(render_by_format({report}, opts, false), opts.out_path);
}

void run_compare(const CommonOptions& opts, const std::vector<std::string>& algos) {
  const Dataset data = load_data(opts);
  std::vector<PipelineSpec> specs;
  specs.reserve(algos.size());
  for (const auto& algo : algos) specs.push_back(parse_pipeline(algo));
  CvOptions cv;
  cv.folds = opts.cv;
  cv.seed = opts.seed;
  cv.selection_on_full_data = opts.select_on_full;
  const auto reports = compare(data, specs, pipeline_params(opts), cv);
  emit(render_by_format(reports, opts, true), opts.out_path);
}

void run_select(const CommonOptions& opts) {
  const Dataset data = load_data(opts);
  const cfs::CorrelationCache cache = cfs::build_correlations(data);
  const cfs::FeatureSubset subset = cfs::best_first_search(cache);
  std::string out = "selected attributes (" + std::to_string(subset.attributes.size()) + " of " +
                    std::to_string(data.num_attributes() - 1) + "):";
  for (std::size_t a : subset.attributes) out += " " + data.schema[a].name;
  out += "\nmerit: " + shortest_double(subset.merit) + "\n";
  emit(out, opts.out_path);
}

void run_boost(const CommonOptions& opts, const std::string& base, const std::string& select,
               bool nested) {
  std::string algo = "boost+" + base;
  if (select == "cfs") algo = nested ? "boost+cfs+" + base : "cfs+" + algo;
  run_eval(opts, algo);
}

void run_predict(const CommonOptions& opts, const std::string& model_path,
                 const std::string& input_path) {
  const ModelFile file = load_model(model_path);
  const std::vector<Instance> instances =
      load_instances_with_schema(input_path, file.schema, file.class_index, CsvOptions{});

  const std::vector<std::string>& labels = file.schema[file.class_index].nominal_values;
  std::string out = "predicted";
  for (const auto& label : labels) out += ",p(" + label + ")";
  out += "\n";
  for (const auto& inst : instances) {
    const ClassDistribution posterior = predict_dist(file.model, inst);
    out += labels[static_cast<std::size_t>(posterior.argmax())];
    for (std::size_t c = 0; c < labels.size(); ++c) {
      out += "," + shortest_double(c < posterior.size() ? posterior.weight(c) : 0.0);
    }
    out += "\n";
  }
  emit(out, opts.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soilcast: decision-tree toolkit for soil fertility prediction"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic soil dataset");
  std::size_t synth_n = 1988;
  double synth_sep = 1.0;
  synth->add_option("--n", synth_n, "Number of instances (minimum 60)");
  synth->add_option("--sep", synth_sep, "Class separation multiplier");
  synth->add_option("--out", opts.out_path, "Output CSV path")->required();
  add_seed_option(synth, opts);
  synth->callback([&] { run_synth(opts, synth_n, synth_sep); });

  auto* train = app.add_subcommand("train", "Train a pipeline and save the model");
  std::string train_algo = "j48";
  std::string train_out;
  train->add_option("--algo", train_algo,
                    "Pipeline: wrappers cfs/boost joined by '+', base j48|cart|nbtree")
      ->check(CLI::Validator(pipeline_check, "PIPELINE"));
  train->add_option("--out", train_out, "Model file path")->required();
  add_data_options(train, opts);
  add_seed_option(train, opts);
  add_learner_options(train, opts);
  train->callback([&] { run_train(opts, train_algo, train_out); });

  auto* eval = app.add_subcommand("eval", "Cross-validate one pipeline");
  std::string eval_algo = "j48";
  eval->add_option("--algo", eval_algo, "Pipeline to evaluate")
      ->check(CLI::Validator(pipeline_check, "PIPELINE"));
  add_data_options(eval, opts);
  add_seed_option(eval, opts);
  add_learner_options(eval, opts);
  add_report_options(eval, opts);
  eval->callback([&] { run_eval(opts, eval_algo); });

  auto* comp = app.add_subcommand("compare", "Cross-validate several pipelines side by side");
  std::vector<std::string> compare_algos;
  comp->add_option("--algos", compare_algos, "Comma-separated pipelines (at least two)")
      ->required()
      ->delimiter(',')
      ->check(CLI::Validator(pipeline_check, "PIPELINE"));
  add_data_options(comp, opts);
  add_seed_option(comp, opts);
  add_learner_options(comp, opts);
  add_report_options(comp, opts);
  comp->callback([&] { run_compare(opts, compare_algos); });

  auto* select = app.add_subcommand("select", "Report the correlation-selected feature subset");
  add_data_options(select, opts);
  select->add_option("--out", opts.out_path, "Write the report here instead of stdout");
  select->callback([&] { run_select(opts); });

  auto* boost = app.add_subcommand("boost", "Cross-validate a boosted pipeline");
  std::string boost_base = "j48";
  std::string boost_select;
  bool boost_nested = false;
  boost->add_option("--base", boost_base, "Base learner")
      ->check(CLI::IsMember({"j48", "cart", "nbtree"}));
  boost->add_option("--select", boost_select, "Attribute selection to apply (cfs)")
      ->check(CLI::IsMember({"cfs"}));
  boost->add_flag("--nested", boost_nested,
                  "Re-run selection inside every boosting round instead of once up front");
  add_data_options(boost, opts);
  add_seed_option(boost, opts);
  add_learner_options(boost, opts);
  add_report_options(boost, opts);
  boost->callback([&] { run_boost(opts, boost_base, boost_select, boost_nested); });

  auto* predict = app.add_subcommand("predict", "Predict labels with a saved model");
  std::string predict_model;
  std::string predict_input;
  predict->add_option("--model", predict_model, "Model file")->required();
  predict->add_option("--input", predict_input, "CSV of instances to classify")->required();
  predict->add_option("--out", opts.out_path, "Write predictions here instead of stdout");
  predict->callback([&] { run_predict(opts, predict_model, predict_input); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
