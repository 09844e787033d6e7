#include "soilcast/tree.hpp"

#include <cmath>

#include "soilcast/error.hpp"
#include "soilcast/nbtree.hpp"

namespace soilcast {

std::size_t leaf_count(const TreeNode& node) {
  if (node.is_leaf()) return 1;
  std::size_t count = 0;
  for (const TreeNode& child : node.children) count += leaf_count(child);
  return count;
}

std::size_t node_count(const TreeNode& node) {
  std::size_t count = 1;
  for (const TreeNode& child : node.children) count += node_count(child);
  return count;
}

void make_leaf(TreeNode& node) {
  node.test.reset();
  node.children.clear();
  node.predicted = node.dist.argmax();
}

namespace {

void accumulate(const TreeNode& node, const Instance& instance, MissingPolicy policy,
                double weight, std::vector<double>& scores) {
  if (node.is_leaf()) {
    const std::vector<double> posterior =
        node.nb ? nb_posterior(*node.nb, instance).weights() : node.dist.normalized();
    for (std::size_t c = 0; c < scores.size() && c < posterior.size(); ++c) {
      scores[c] += weight * posterior[c];
    }
    return;
  }
  const SplitTest& test = *node.test;
  if (test.attribute >= instance.cells.size()) {
    throw InvalidArgumentError("instance is narrower than the tree's schema");
  }
  const double value = instance.cells[test.attribute];
  if (!is_missing(value)) {
    const std::size_t branch = test.branch_of(value);
    if (branch >= node.children.size()) {
      throw InvalidArgumentError("instance value does not match the tree's schema");
    }
    accumulate(node.children[branch], instance, policy, weight, scores);
    return;
  }
  if (policy == MissingPolicy::kHeavierBranch) {
    std::size_t heavier = 0;
    for (std::size_t b = 1; b < node.children.size(); ++b) {
      if (node.children[b].dist.total() > node.children[heavier].dist.total()) heavier = b;
    }
    accumulate(node.children[heavier], instance, policy, weight, scores);
    return;
  }
  double total = 0.0;
  for (const TreeNode& child : node.children) total += child.dist.total();
  for (const TreeNode& child : node.children) {
    accumulate(child, instance, policy, weight * child.dist.total() / total, scores);
  }
}

}  // namespace

ClassDistribution classify(const TreeNode& root, const Instance& instance, MissingPolicy policy) {
  std::vector<double> scores(root.dist.size(), 0.0);
  accumulate(root, instance, policy, 1.0, scores);
  double total = 0.0;
  for (double s : scores) total += s;
  if (total <= 0.0) throw InvalidStateError("classification produced an empty posterior");
  for (double& s : scores) s /= total;
  return ClassDistribution::from_weights(std::move(scores));
}

int predict_class(const TreeNode& root, const Instance& instance, MissingPolicy policy) {
  return classify(root, instance, policy).argmax();
}

}  // namespace soilcast
