#include "soilcast/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soilcast/error.hpp"
#include "soilcast/measures.hpp"

namespace soilcast {
namespace cart {

namespace {

constexpr double kTieEpsilon = 1e-12;

double gini_decrease(const ClassDistribution& parent, const ClassDistribution& left,
                     const ClassDistribution& right) {
  return gini(parent) - (left.total() / parent.total()) * gini(left) -
         (right.total() / parent.total()) * gini(right);
}

struct BestSplit {
  SplitTest test;
  double decrease = 0.0;
  bool found = false;

  void offer(const SplitTest& candidate, double value) {
    if (!found || value > decrease + kTieEpsilon) {
      found = true;
      test = candidate;
      decrease = value;
    }
  }
};

// Routes the view's rows along a test; rows missing the tested value follow
// the branch with more non-missing weight (ties to branch 0).
std::pair<std::vector<WeightedView::Row>, std::vector<WeightedView::Row>> partition_rows(
    const WeightedView& view, const SplitTest& test) {
  double weight0 = 0.0, weight1 = 0.0;
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, test.attribute);
    if (is_missing(value)) continue;
    (test.branch_of(value) == 0 ? weight0 : weight1) += row.weight;
  }
  const std::size_t missing_branch = weight1 > weight0 ? 1 : 0;
  std::pair<std::vector<WeightedView::Row>, std::vector<WeightedView::Row>> out;
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, test.attribute);
    const std::size_t branch = is_missing(value) ? missing_branch : test.branch_of(value);
    (branch == 0 ? out.first : out.second).push_back(row);
  }
  return out;
}

TreeNode grow(const WeightedView& view, const CartParams& params) {
  TreeNode node;
  node.dist = class_distribution(view);
  node.predicted = node.dist.argmax();
  const auto best = best_binary_split(view, params);
  if (!best) return node;

  auto [rows0, rows1] = partition_rows(view, best->first);
  WeightedView left(view.data(), std::move(rows0));
  WeightedView right(view.data(), std::move(rows1));
  if (left.total_weight() <= 0.0 || right.total_weight() <= 0.0) return node;
  node.test = best->first;
  node.children.push_back(grow(left, params));
  node.children.push_back(grow(right, params));
  return node;
}

// Training misclassification weight of a subtree (sum over its leaves).
double subtree_error(const TreeNode& node) {
  if (node.is_leaf()) return node.dist.total() - node.dist.max_weight();
  double total = 0.0;
  for (const auto& child : node.children) total += subtree_error(child);
  return total;
}

double min_link_strength(const TreeNode& node, double root_weight) {
  double best = std::numeric_limits<double>::infinity();
  if (node.is_leaf()) return best;
  const double here = node.dist.total() - node.dist.max_weight();
  const double below = subtree_error(node);
  const double g = (here - below) / root_weight / (static_cast<double>(leaf_count(node)) - 1.0);
  best = g;
  for (const auto& child : node.children) {
    best = std::min(best, min_link_strength(child, root_weight));
  }
  return best;
}

// Collapses every internal node whose link strength reaches the minimum,
// top-down so a collapsed subtree takes its weak descendants with it.
void prune_weakest(TreeNode& node, double root_weight, double threshold) {
  if (node.is_leaf()) return;
  const double here = node.dist.total() - node.dist.max_weight();
  const double below = subtree_error(node);
  const double g = (here - below) / root_weight / (static_cast<double>(leaf_count(node)) - 1.0);
  if (g <= threshold + kTieEpsilon) {
    make_leaf(node);
    return;
  }
  for (auto& child : node.children) prune_weakest(child, root_weight, threshold);
}

struct FoldEvaluation {
  // Misclassified test weight per representative alpha.
  std::vector<double> wrong;
};

FoldEvaluation evaluate_fold(const Dataset& train, const Dataset& test,
                             const std::vector<double>& representative_alphas,
                             const CartParams& params) {
  const TreeNode root = grow_full(train, params);
  const PruneSequence seq = cost_complexity_sequence(root);
  FoldEvaluation eval;
  eval.wrong.assign(representative_alphas.size(), 0.0);
  for (std::size_t i = 0; i < representative_alphas.size(); ++i) {
    std::size_t pick = 0;
    while (pick + 1 < seq.alphas.size() && seq.alphas[pick + 1] <= representative_alphas[i]) {
      ++pick;
    }
    const TreeNode& tree = seq.trees[pick];
    for (const auto& inst : test.instances) {
      const int predicted = predict_class(tree, inst, MissingPolicy::kHeavierBranch);
      if (predicted != test.label_of(inst)) eval.wrong[i] += inst.weight;
    }
  }
  return eval;
}

}  // namespace

std::optional<std::pair<SplitTest, double>> best_binary_split(const WeightedView& view,
                                                              const CartParams& params) {
  if (view.total_weight() <= 0.0) {
    throw InvalidArgumentError("best_binary_split needs positive view weight");
  }
  const Dataset& data = view.data();
  const std::size_t num_classes = data.num_classes();
  if (class_distribution(view).pure()) return std::nullopt;

  BestSplit best;
  for (std::size_t attr = 0; attr < data.schema.size(); ++attr) {
    if (attr == data.class_index) continue;
    if (data.schema[attr].kind == AttributeKind::kNumeric) {
      // Distinct sorted values with their class weights; thresholds are the
      // midpoints between neighbours.
      std::vector<std::pair<double, const WeightedView::Row*>> present;
      for (const auto& row : view.rows()) {
        const double value = view.cell(row, attr);
        if (!is_missing(value)) present.emplace_back(value, &row);
      }
      std::stable_sort(present.begin(), present.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<double> values;
      std::vector<ClassDistribution> groups;
      for (const auto& [value, row] : present) {
        if (values.empty() || values.back() != value) {
          values.push_back(value);
          groups.emplace_back(num_classes);
        }
        groups.back().add(static_cast<std::size_t>(view.label(*row)), row->weight);
      }
      if (groups.size() < 2) continue;
      ClassDistribution parent(num_classes);
      for (const auto& group : groups) {
        for (std::size_t c = 0; c < num_classes; ++c) parent.add(c, group.weight(c));
      }
      ClassDistribution left(num_classes);
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        for (std::size_t c = 0; c < num_classes; ++c) left.add(c, groups[g].weight(c));
        ClassDistribution right(num_classes);
        for (std::size_t c = 0; c < num_classes; ++c) {
          right.add(c, parent.weight(c) - left.weight(c));
        }
        if (left.total() < params.min_instances_per_leaf ||
            right.total() < params.min_instances_per_leaf) {
          continue;
        }
        const double decrease = gini_decrease(parent, left, right);
        if (decrease < -kTieEpsilon) continue;
        best.offer({SplitTest::Kind::kNumericThreshold, attr,
                    (values[g] + values[g + 1]) / 2.0, 0},
                   std::max(decrease, 0.0));
      }
    } else {
      const std::size_t arity = data.schema[attr].nominal_values.size();
      std::vector<ClassDistribution> by_value(arity, ClassDistribution(num_classes));
      ClassDistribution parent(num_classes);
      for (const auto& row : view.rows()) {
        const double value = view.cell(row, attr);
        if (is_missing(value)) continue;
        const auto cls = static_cast<std::size_t>(view.label(row));
        by_value[static_cast<std::size_t>(value)].add(cls, row.weight);
        parent.add(cls, row.weight);
      }
      if (parent.total() <= 0.0) continue;
      for (std::size_t v = 0; v < arity; ++v) {
        const ClassDistribution& match = by_value[v];
        ClassDistribution rest(num_classes);
        for (std::size_t c = 0; c < num_classes; ++c) {
          rest.add(c, parent.weight(c) - match.weight(c));
        }
        if (match.total() < params.min_instances_per_leaf ||
            rest.total() < params.min_instances_per_leaf) {
          continue;
        }
        const double decrease = gini_decrease(parent, match, rest);
        if (decrease < -kTieEpsilon) continue;
        best.offer({SplitTest::Kind::kNominalOneVsRest, attr, 0.0, v},
                   std::max(decrease, 0.0));
      }
    }
  }
  if (!best.found) return std::nullopt;
  return std::make_pair(best.test, best.decrease);
}

TreeNode grow_full(const Dataset& dataset, const CartParams& params) {
  if (dataset.instances.empty()) throw InvalidArgumentError("cannot grow a tree from no data");
  const WeightedView view = WeightedView::whole(dataset);
  if (view.total_weight() <= 0.0) {
    throw InvalidArgumentError("cannot grow a tree from zero total weight");
  }
  return grow(view, params);
}

PruneSequence cost_complexity_sequence(const TreeNode& root) {
  PruneSequence seq;
  seq.alphas.push_back(0.0);
  seq.trees.push_back(root);
  const double root_weight = root.dist.total();
  TreeNode current = root;
  while (!current.is_leaf()) {
    const double g = min_link_strength(current, root_weight);
    prune_weakest(current, root_weight, g);
    seq.alphas.push_back(std::max(g, seq.alphas.back()));
    seq.trees.push_back(current);
  }
  return seq;
}

TreeNode select_pruned_tree(const Dataset& dataset, const CartParams& params) {
  TreeNode root = grow_full(dataset, params);
  PruneSequence seq = cost_complexity_sequence(root);
  if (seq.trees.size() == 1) return std::move(seq.trees.front());

  // Each sequence entry is probed at the geometric mean of its alpha and the
  // next one; the last entry absorbs everything beyond.
  std::vector<double> representative(seq.alphas.size());
  for (std::size_t i = 0; i + 1 < seq.alphas.size(); ++i) {
    representative[i] = std::sqrt(seq.alphas[i] * seq.alphas[i + 1]);
  }
  representative.back() = std::numeric_limits<double>::infinity();

  const FoldAssignment folds = stratified_k_folds(dataset, params.pruning_folds, params.seed);
  std::vector<double> wrong(representative.size(), 0.0);
  double total_weight = 0.0;
  for (std::size_t f = 0; f < folds.num_folds; ++f) {
    const auto [train, test] = split_by_fold(dataset, folds, f);
    const FoldEvaluation eval = evaluate_fold(train, test, representative, params);
    for (std::size_t i = 0; i < wrong.size(); ++i) wrong[i] += eval.wrong[i];
    for (const auto& inst : test.instances) total_weight += inst.weight;
  }

  std::vector<double> cv_error(wrong.size());
  for (std::size_t i = 0; i < wrong.size(); ++i) cv_error[i] = wrong[i] / total_weight;

  // Equal errors resolve toward the larger alpha (the smaller tree).
  std::size_t chosen = 0;
  for (std::size_t i = 1; i < cv_error.size(); ++i) {
    if (cv_error[i] <= cv_error[chosen]) chosen = i;
  }
  if (params.use_one_se_rule) {
    const double p = cv_error[chosen];
    const double se = std::sqrt(p * (1.0 - p) / total_weight);
    for (std::size_t i = cv_error.size(); i-- > 0;) {
      if (cv_error[i] <= p + se) {
        chosen = i;
        break;
      }
    }
  }
  return std::move(seq.trees[chosen]);
}

}  // namespace cart
}  // namespace soilcast
