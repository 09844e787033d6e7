#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/measures.hpp"
#include "soilcast/tree.hpp"

namespace soilcast {
namespace c45 {

struct C45Params {
  // One-sided confidence level of the pessimistic error estimate.
  double confidence_factor = 0.25;
  double min_instances_per_leaf = 2.0;
  bool pruning = true;
  // Charge numeric attributes log2(m-1)/W for choosing among m thresholds.
  bool use_mdl_numeric_penalty = true;
};

// One admissible split: per attribute, the multiway test for a nominal
// attribute or the best-gain midpoint threshold for a numeric one. Gains are
// computed over the non-missing rows; for numeric attributes the MDL penalty
// (when enabled) has already been subtracted, and the gain ratio uses the
// penalized gain.
struct SplitCandidate {
  SplitTest test;
  double gain = 0.0;
  double ratio = 0.0;
};

// Enumerates candidates of an impure view. A candidate is kept only when
// every branch carries positive weight (nodes never end up empty), at least
// one branch reaches min_instances_per_leaf, and the gain is not negative.
// Zero-gain candidates stay admissible: symmetric concepts such as XOR show
// no first-level gain yet still need the split to be learnable.
std::vector<SplitCandidate> split_candidates(const WeightedView& view, const C45Params& params);

// Quinlan's selection rule: among candidates whose gain reaches the mean gain
// of all candidates, pick the best gain ratio. Ties fall to the lowest
// attribute index (and the threshold search already prefers the lowest cut).
// Returns the chosen test with its gain ratio, or nothing for a pure view or
// when no candidate survives.
std::optional<std::pair<SplitTest, double>> best_split(const WeightedView& view,
                                                       const C45Params& params);

// Partitions a view along a test. Rows missing the tested value descend into
// every branch with their weight scaled by the branch's share of the
// non-missing weight.
std::vector<WeightedView> partition_fractional(const WeightedView& view, const SplitTest& test,
                                               std::size_t num_branches);

// Upper confidence bound on the true error rate after observing `errors`
// mistakes in `n` weighted trials, using the normal approximation to the
// binomial at one-sided confidence 1 - cf. Clamped to [0, 1].
double pessimistic_error(double errors, double n, double cf);

// Bottom-up error-based pruning: an internal node becomes a leaf whenever its
// pessimistic error estimate as a leaf does not exceed the sum over its
// subtree's leaves. Subtree replacement only; never grows the tree.
TreeNode prune_ebp(TreeNode root, const C45Params& params);

// Grows a gain-ratio decision tree, then applies prune_ebp when
// params.pruning is set. A node becomes a leaf when its weight falls below
// twice min_instances_per_leaf or no admissible split remains.
TreeNode induce(const Dataset& dataset, const C45Params& params = {});

}  // namespace c45
}  // namespace soilcast
