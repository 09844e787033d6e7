#include "soilcast/nbtree.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "soilcast/c45.hpp"
#include "soilcast/error.hpp"

namespace soilcast {

ClassDistribution nb_posterior(const NaiveBayesModel& model, const Instance& instance) {
  const std::size_t num_classes = model.class_priors.size();
  std::vector<double> log_score(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) log_score[c] = std::log(model.class_priors[c]);

  for (const auto& attr : model.attributes) {
    if (attr.attribute >= instance.cells.size()) {
      throw InvalidArgumentError("instance is narrower than the model's schema");
    }
    const double value = instance.cells[attr.attribute];
    if (is_missing(value)) continue;
    std::size_t column;
    if (attr.binned) {
      const CutPointSet cuts{attr.attribute, attr.cut_points};
      column = bin_index(cuts, value);
    } else {
      column = static_cast<std::size_t>(value);
      if (column >= attr.conditional.front().size()) {
        throw InvalidArgumentError("nominal value outside the model's table");
      }
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      log_score[c] += std::log(attr.conditional[c][column]);
    }
  }

  const double peak = *std::max_element(log_score.begin(), log_score.end());
  std::vector<double> posterior(num_classes);
  double total = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    posterior[c] = std::exp(log_score[c] - peak);
    total += posterior[c];
  }
  for (double& p : posterior) p /= total;
  return ClassDistribution::from_weights(std::move(posterior));
}

namespace nbtree {

namespace {

constexpr double kTieEpsilon = 1e-12;

int nb_predict(const NaiveBayesModel& model, const Instance& instance) {
  return nb_posterior(model, instance).argmax();
}

double resubstitution_accuracy(const WeightedView& view) {
  const NaiveBayesModel model = fit_naive_bayes(view);
  double correct = 0.0;
  for (const auto& row : view.rows()) {
    const auto& inst = view.data().instances[row.index];
    if (nb_predict(model, inst) == view.label(row)) correct += row.weight;
  }
  return correct / view.total_weight();
}

std::size_t branch_count(const SplitTest& test, const Dataset& data) {
  return test.kind == SplitTest::Kind::kNominalMultiway
             ? data.schema[test.attribute].nominal_values.size()
             : 2;
}

TreeNode build(const WeightedView& view, const NBTreeParams& params) {
  TreeNode node;
  node.dist = class_distribution(view);
  node.predicted = node.dist.argmax();
  if (view.total_weight() >= params.min_node_size) {
    const double u_node = node_utility(view, params);
    const auto candidates = c45::split_candidates(view, c45::C45Params{});

    double best_utility = 0.0;
    std::size_t best_index = candidates.size();
    std::vector<WeightedView> best_children;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t branches = branch_count(candidates[i].test, view.data());
      auto children = c45::partition_fractional(view, candidates[i].test, branches);
      double utility = 0.0;
      for (const auto& child : children) {
        utility += (child.total_weight() / view.total_weight()) * node_utility(child, params);
      }
      if (best_index == candidates.size() || utility > best_utility + kTieEpsilon) {
        best_utility = utility;
        best_index = i;
        best_children = std::move(children);
      }
    }

    const bool worthwhile =
        best_index < candidates.size() &&
        best_utility - u_node > params.min_relative_error_reduction * (1.0 - u_node);
    if (worthwhile) {
      node.test = candidates[best_index].test;
      node.children.reserve(best_children.size());
      for (const auto& child : best_children) {
        node.children.push_back(build(child, params));
      }
      return node;
    }
  }
  node.nb = std::make_shared<const NaiveBayesModel>(fit_naive_bayes(view));
  return node;
}

}  // namespace

NaiveBayesModel fit_naive_bayes(const WeightedView& view) {
  if (view.total_weight() <= 0.0) {
    throw InvalidArgumentError("fit_naive_bayes needs positive view weight");
  }
  const Dataset& data = view.data();
  const std::size_t num_classes = data.num_classes();

  NaiveBayesModel model;
  const ClassDistribution dist = class_distribution(view);
  model.class_priors.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    model.class_priors[c] =
        (dist.weight(c) + 1.0) / (dist.total() + static_cast<double>(num_classes));
  }

  for (std::size_t attr = 0; attr < data.schema.size(); ++attr) {
    if (attr == data.class_index) continue;
    NaiveBayesModel::AttributeModel am;
    am.attribute = attr;
    std::size_t columns;
    if (data.schema[attr].kind == AttributeKind::kNumeric) {
      am.binned = true;
      am.cut_points = discretize_mdl(view, attr).cut_points;
      columns = am.cut_points.size() + 1;
    } else {
      columns = data.schema[attr].nominal_values.size();
    }

    // counts[class][column] over non-missing cells.
    std::vector<std::vector<double>> counts(num_classes, std::vector<double>(columns, 0.0));
    const CutPointSet cuts{attr, am.cut_points};
    for (const auto& row : view.rows()) {
      const double value = view.cell(row, attr);
      if (is_missing(value)) continue;
      const std::size_t column =
          am.binned ? bin_index(cuts, value) : static_cast<std::size_t>(value);
      counts[static_cast<std::size_t>(view.label(row))][column] += row.weight;
    }
    am.conditional.assign(num_classes, std::vector<double>(columns, 0.0));
    for (std::size_t c = 0; c < num_classes; ++c) {
      double class_total = 0.0;
      for (double w : counts[c]) class_total += w;
      for (std::size_t b = 0; b < columns; ++b) {
        am.conditional[c][b] = (counts[c][b] + 1.0) / (class_total + static_cast<double>(columns));
      }
    }
    model.attributes.push_back(std::move(am));
  }
  return model;
}

double node_utility(const WeightedView& view, const NBTreeParams& params) {
  if (params.utility_folds < 2) {
    throw InvalidArgumentError("utility_folds must be at least 2");
  }
  const std::size_t k = params.utility_folds;
  if (view.size() < k || view.total_weight() < static_cast<double>(k)) {
    return resubstitution_accuracy(view);
  }

  std::vector<int> labels;
  labels.reserve(view.size());
  for (const auto& row : view.rows()) labels.push_back(view.label(row));
  const FoldAssignment folds = stratified_folds_by_class(labels, k, params.seed);

  double correct = 0.0;
  for (std::size_t f = 0; f < folds.num_folds; ++f) {
    std::vector<WeightedView::Row> train_rows;
    std::vector<const WeightedView::Row*> test_rows;
    for (std::size_t r = 0; r < view.size(); ++r) {
      if (folds.fold_of[r] == f) {
        test_rows.push_back(&view.rows()[r]);
      } else {
        train_rows.push_back(view.rows()[r]);
      }
    }
    if (test_rows.empty()) continue;
    const WeightedView train(view.data(), std::move(train_rows));
    const NaiveBayesModel model = fit_naive_bayes(train);
    for (const auto* row : test_rows) {
      const auto& inst = view.data().instances[row->index];
      if (nb_predict(model, inst) == view.label(*row)) correct += row->weight;
    }
  }
  return correct / view.total_weight();
}

TreeNode induce_nbtree(const Dataset& dataset, const NBTreeParams& params) {
  if (dataset.instances.empty()) {
    throw InvalidArgumentError("cannot induce a tree from no data");
  }
  const WeightedView view = WeightedView::whole(dataset);
  if (view.total_weight() <= 0.0) {
    throw InvalidArgumentError("cannot induce a tree from zero total weight");
  }
  return build(view, params);
}

ClassDistribution classify_nb(const TreeNode& root, const Instance& instance) {
  return classify(root, instance, MissingPolicy::kFractionalDescent);
}

}  // namespace nbtree
}  // namespace soilcast
