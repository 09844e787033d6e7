#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/tree.hpp"

namespace soilcast {
namespace cart {

struct CartParams {
  double min_instances_per_leaf = 2.0;
  // Internal cross-validation used to pick the pruning strength.
  std::size_t pruning_folds = 5;
  bool use_one_se_rule = true;
  std::uint64_t seed = 0;
};

// Best binary test by weighted Gini decrease over the non-missing rows.
// Numeric attributes offer midpoint thresholds; nominal attributes offer one
// candidate per value (that value against the rest). Tests leaving either
// branch below min_instances_per_leaf are discarded, as are negative
// decreases; a zero decrease on an impure view stays admissible so symmetric
// concepts remain splittable. Ties fall to the lowest attribute index, then
// the lowest threshold or value index. Empty for a pure view.
std::optional<std::pair<SplitTest, double>> best_binary_split(const WeightedView& view,
                                                              const CartParams& params);

// Grows an unpruned binary Gini tree to purity or candidate exhaustion.
// Rows missing the tested value follow the branch that received more
// non-missing training weight.
TreeNode grow_full(const Dataset& dataset, const CartParams& params);

// Weakest-link pruning trace: trees[0] is the input tree at alpha 0, each
// later entry collapses every internal node of minimal link strength
//   g(t) = [R(t) - R(subtree at t)] / (leaves(subtree at t) - 1)
// with R the training misclassification weight over the root total. Alphas
// are nondecreasing, leaf counts strictly decreasing, and the last tree is a
// single leaf.
struct PruneSequence {
  std::vector<double> alphas;
  std::vector<TreeNode> trees;
};

PruneSequence cost_complexity_sequence(const TreeNode& root);

// Grows the full tree, builds its pruning sequence, and picks the alpha whose
// pruning_folds-fold cross-validated error is smallest; with the one-SE rule
// the largest alpha within one standard error of that minimum wins. Fold
// sequences are matched to the main sequence at the geometric means of
// adjacent alphas.
TreeNode select_pruned_tree(const Dataset& dataset, const CartParams& params);

}  // namespace cart
}  // namespace soilcast
