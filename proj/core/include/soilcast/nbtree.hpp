#pragma once

#include <cstdint>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/measures.hpp"
#include "soilcast/tree.hpp"

namespace soilcast {

// Leaf classifier of a naive-Bayes tree. Numeric attributes are discretized
// with the cut points recorded here (empty = one bin, no discrimination);
// nominal attributes keep one conditional column per value. All counts are
// Laplace-smoothed by 1, so no probability is ever zero.
struct NaiveBayesModel {
  struct AttributeModel {
    std::size_t attribute = 0;
    bool binned = false;                 // true for discretized numeric attributes
    std::vector<double> cut_points;      // ascending; values <= cut fall left
    // conditional[class][bin or value] = P(bin | class); rows sum to 1.
    std::vector<std::vector<double>> conditional;
  };

  std::vector<double> class_priors;      // Laplace-smoothed, sums to 1
  std::vector<AttributeModel> attributes;
};

// Posterior over classes for one instance: log-space sum of prior and
// per-attribute conditionals, missing cells contributing nothing, then
// renormalized. An instance missing every cell gets the priors back.
ClassDistribution nb_posterior(const NaiveBayesModel& model, const Instance& instance);

namespace nbtree {

struct NBTreeParams {
  std::size_t utility_folds = 5;
  // Nodes lighter than this become leaves without a utility contest.
  double min_node_size = 30.0;
  // A split must cut the node's CV error by more than this fraction.
  double min_relative_error_reduction = 0.05;
  std::uint64_t seed = 0;
};

// Fits the leaf model on a view: per-attribute MDL discretization computed
// locally, then smoothed conditional tables. Missing cells are skipped.
NaiveBayesModel fit_naive_bayes(const WeightedView& view);

// Stratified utility_folds-fold CV accuracy of fit_naive_bayes on the view.
// Views too small to stratify (fewer rows or less weight than folds) fall
// back to resubstitution accuracy.
double node_utility(const WeightedView& view, const NBTreeParams& params);

// Grows the hybrid tree: a node splits only when the best candidate's
// weighted child utility beats the node's own utility by more than
// min_relative_error_reduction of the node's error; otherwise it becomes a
// naive-Bayes leaf. Candidate tests and fractional missing-value descent are
// shared with the gain-ratio learner.
TreeNode induce_nbtree(const Dataset& dataset, const NBTreeParams& params = {});

// classify() with fractional descent; leaves answer with their NB posterior.
ClassDistribution classify_nb(const TreeNode& root, const Instance& instance);

}  // namespace nbtree
}  // namespace soilcast
