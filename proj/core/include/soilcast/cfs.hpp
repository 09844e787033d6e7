#pragma once

#include <cstddef>
#include <vector>

#include "soilcast/dataset.hpp"

namespace soilcast {
namespace cfs {

// A candidate feature set with its merit score. Attribute indices are
// ascending and never include the class column.
struct FeatureSubset {
  std::vector<std::size_t> attributes;
  double merit = 0.0;
};

// Symmetric-uncertainty correlations between every feature and the class and
// between every unordered feature pair, computed once and shared by the
// search. Numeric attributes are discretized on the full dataset first;
// missing cells form a category of their own.
class CorrelationCache {
 public:
  double feature_class(std::size_t attribute) const;
  double feature_feature(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& features() const { return features_; }

  // Assembles a cache from precomputed correlations instead of a dataset:
  // class_su[i] is attribute i's correlation with the class, pair_su[i][j]
  // the symmetric feature-feature matrix (diagonal and class slots ignored).
  // Lets the search run over synthetic correlation structures.
  static CorrelationCache from_values(std::size_t num_attributes, std::size_t class_index,
                                      const std::vector<double>& class_su,
                                      const std::vector<std::vector<double>>& pair_su);

 private:
  friend CorrelationCache build_correlations(const Dataset& dataset);

  std::size_t pair_slot(std::size_t a, std::size_t b) const;

  std::size_t width_ = 0;
  std::vector<std::size_t> features_;
  std::vector<double> class_su_;  // indexed by attribute, class slot unused
  std::vector<double> pair_su_;   // upper triangle, canonical (low, high) order
};

// Requires at least two non-class attributes.
CorrelationCache build_correlations(const Dataset& dataset);

// Subset quality k*mean(r_cf) / sqrt(k + k(k-1)*mean(r_ff)); the empty subset
// scores 0 (the search's start state), a singleton scores its own r_cf.
double merit(const std::vector<std::size_t>& subset, const CorrelationCache& cache);

// Forward best-first search from the empty set, expanding the open subset of
// highest merit (ties to the lexicographically smaller index set) by one
// unused attribute at a time. Stops after max_stale consecutive expansions
// that fail to improve the best merit. When `visited` is given, every scored
// subset is appended to it.
FeatureSubset best_first_search(const CorrelationCache& cache, std::size_t max_stale = 5,
                                std::vector<FeatureSubset>* visited = nullptr);

// Dataset reduced to the subset's attributes (in ascending order) plus the
// class column, which always lands last. Instance order and weights survive.
Dataset filter_dataset(const Dataset& dataset, const FeatureSubset& subset);

// The matching projection for a single full-width instance.
Instance project_instance(const Instance& instance, const FeatureSubset& subset,
                          std::size_t class_index);

}  // namespace cfs
}  // namespace soilcast
