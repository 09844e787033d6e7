#pragma once

#include <cstddef>
#include <vector>

#include "soilcast/dataset.hpp"

namespace soilcast {

// Weighted class counts. Weights are reals so fractional instances (from
// missing-value descent or boosting) count exactly; the cached total stays
// within 1e-9 of the sum of the parts.
class ClassDistribution {
 public:
  ClassDistribution() = default;
  explicit ClassDistribution(std::size_t num_classes) : weights_(num_classes, 0.0) {}
  static ClassDistribution from_weights(std::vector<double> weights);

  void add(std::size_t cls, double weight);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t cls) const { return weights_[cls]; }
  const std::vector<double>& weights() const { return weights_; }
  double total() const { return total_; }

  double max_weight() const;
  // Index of the heaviest class; ties resolve to the lowest index.
  int argmax() const;
  // True when at most one class carries weight.
  bool pure() const;
  // Weights divided by the total. Total must be positive.
  std::vector<double> normalized() const;

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

ClassDistribution class_distribution(const WeightedView& view);

// Shannon entropy in bits: -sum p*log2(p), zero-weight classes contributing
// nothing. Throws InvalidArgumentError when the total is not positive.
double entropy(const ClassDistribution& dist);

// entropy(parent) - weighted mean of the child entropies. The children must
// partition the parent: totals agree within 1e-6 relative.
double information_gain(const ClassDistribution& parent,
                        const std::vector<ClassDistribution>& children);

// Entropy of the child sizes (how evenly the split carves up the weight).
double split_information(const std::vector<ClassDistribution>& children);

// information_gain divided by the entropy of the child sizes; returns 0 when
// the split information falls below 1e-10 (one branch holding everything).
double gain_ratio(const ClassDistribution& parent, const std::vector<ClassDistribution>& children);

// Gini impurity 1 - sum p^2, computed as (total^2 - sum w^2) / total^2 so
// integer-weighted inputs give the exact rational.
double gini(const ClassDistribution& dist);

// Symmetric uncertainty between two discrete columns:
//   SU = 2 * [H(X) + H(Y) - H(X,Y)] / [H(X) + H(Y)]
// Codes are category indices; -1 marks a missing entry, which is treated as a
// category of its own so no weight is dropped. Result is clamped to [0, 1];
// two constant columns yield 0. Symmetric by construction: the argument pair
// is canonicalized before any floating arithmetic.
double symmetric_uncertainty(const std::vector<int>& x, const std::vector<int>& y,
                             const std::vector<double>& weights);

// Ascending cut points of one numeric attribute; empty means the attribute
// stays undiscretized (a single bin).
struct CutPointSet {
  std::size_t attribute = 0;
  std::vector<double> cut_points;
};

// Bin index of a value under a cut-point set: values <= cut fall left.
std::size_t bin_index(const CutPointSet& cuts, double value);

// Recursive minimum-description-length discretization. Candidate cuts are
// midpoints between adjacent distinct values whose class make-up differs
// (class-boundary points); the best-gain cut is kept only when
//   gain > [log2(N-1) + log2(3^k - 2) - k*E(S) + k1*E(S1) + k2*E(S2)] / N
// with N the weight of the segment, k/k1/k2 the class counts present and E
// the entropies, then both sides are discretized recursively. Constant or
// all-missing attributes produce an empty set.
CutPointSet discretize_mdl(const WeightedView& view, std::size_t attribute);
CutPointSet discretize_mdl(const Dataset& dataset, std::size_t attribute);

}  // namespace soilcast
