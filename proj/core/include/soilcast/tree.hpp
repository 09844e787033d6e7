#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/measures.hpp"

namespace soilcast {

struct NaiveBayesModel;

// A node's routing test. Nominal multiway tests fan out one branch per value;
// the other kinds are binary (branch 0 = matched / below threshold).
struct SplitTest {
  enum class Kind { kNominalMultiway, kNumericThreshold, kNominalOneVsRest };

  Kind kind = Kind::kNumericThreshold;
  std::size_t attribute = 0;
  double threshold = 0.0;        // numeric-threshold only
  std::size_t match_value = 0;   // one-vs-rest only

  // Branch of a non-missing cell value.
  std::size_t branch_of(double value) const {
    switch (kind) {
      case Kind::kNominalMultiway:
        return static_cast<std::size_t>(value);
      case Kind::kNumericThreshold:
        return value <= threshold ? 0 : 1;
      case Kind::kNominalOneVsRest:
        return static_cast<std::size_t>(value) == match_value ? 0 : 1;
    }
    return 0;
  }
};

// Decision-tree node with value semantics; copying deep-copies the subtree.
// Leaves of a naive-Bayes tree additionally carry a shared leaf model. The
// training distribution is kept on every node: classification uses the child
// totals as routing fractions, pruning uses them as error counts.
struct TreeNode {
  ClassDistribution dist;
  int predicted = 0;
  std::optional<SplitTest> test;
  std::vector<TreeNode> children;
  std::shared_ptr<const NaiveBayesModel> nb;

  bool is_leaf() const { return !test.has_value(); }
};

std::size_t leaf_count(const TreeNode& node);
std::size_t node_count(const TreeNode& node);

// Collapses a node into a leaf predicting its majority class.
void make_leaf(TreeNode& node);

// How an internal node treats a missing test value.
enum class MissingPolicy {
  kFractionalDescent,  // all branches, weighted by training fractions
  kHeavierBranch,      // the branch that saw more training weight
};

// Routes an instance to a posterior distribution (sums to 1). Plain leaves
// answer with their normalized training distribution, naive-Bayes leaves with
// the leaf model's posterior.
ClassDistribution classify(const TreeNode& root, const Instance& instance, MissingPolicy policy);

// argmax of classify(); ties resolve to the lowest class index.
int predict_class(const TreeNode& root, const Instance& instance, MissingPolicy policy);

}  // namespace soilcast
