#include "soilcast/cfs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "soilcast/error.hpp"
#include "soilcast/measures.hpp"

namespace soilcast {
namespace cfs {

namespace {

// Category codes of one column: nominal values and discretized-bin indices
// share the representation, -1 marking a missing cell.
std::vector<int> column_codes(const Dataset& dataset, std::size_t attribute) {
  std::vector<int> codes;
  codes.reserve(dataset.instances.size());
  if (attribute == dataset.class_index) {
    for (const auto& inst : dataset.instances) codes.push_back(dataset.label_of(inst));
    return codes;
  }
  if (dataset.schema[attribute].kind == AttributeKind::kNominal) {
    for (const auto& inst : dataset.instances) {
      const double value = inst.cells[attribute];
      codes.push_back(is_missing(value) ? -1 : static_cast<int>(value));
    }
    return codes;
  }
  const CutPointSet cuts = discretize_mdl(dataset, attribute);
  for (const auto& inst : dataset.instances) {
    const double value = inst.cells[attribute];
    codes.push_back(is_missing(value) ? -1 : static_cast<int>(bin_index(cuts, value)));
  }
  return codes;
}

}  // namespace

std::size_t CorrelationCache::pair_slot(std::size_t a, std::size_t b) const {
  const std::size_t low = std::min(a, b);
  const std::size_t high = std::max(a, b);
  return low * width_ - low * (low + 1) / 2 + (high - low - 1);
}

double CorrelationCache::feature_class(std::size_t attribute) const {
  return class_su_[attribute];
}

double CorrelationCache::feature_feature(std::size_t a, std::size_t b) const {
  return pair_su_[pair_slot(a, b)];
}

CorrelationCache CorrelationCache::from_values(std::size_t num_attributes,
                                               std::size_t class_index,
                                               const std::vector<double>& class_su,
                                               const std::vector<std::vector<double>>& pair_su) {
  if (class_index >= num_attributes || class_su.size() != num_attributes ||
      pair_su.size() != num_attributes) {
    throw InvalidArgumentError("correlation table shapes must match the attribute count");
  }
  CorrelationCache cache;
  cache.width_ = num_attributes;
  for (std::size_t a = 0; a < num_attributes; ++a) {
    if (a != class_index) cache.features_.push_back(a);
  }
  if (cache.features_.size() < 2) {
    throw InvalidArgumentError("correlation cache needs at least two non-class attributes");
  }
  cache.class_su_ = class_su;
  cache.pair_su_.assign(num_attributes * (num_attributes - 1) / 2, 0.0);
  for (std::size_t i = 0; i < cache.features_.size(); ++i) {
    for (std::size_t j = i + 1; j < cache.features_.size(); ++j) {
      const std::size_t a = cache.features_[i], b = cache.features_[j];
      if (pair_su[a].size() != num_attributes || pair_su[b].size() != num_attributes ||
          pair_su[a][b] != pair_su[b][a]) {
        throw InvalidArgumentError("pair correlations must form a symmetric matrix");
      }
      cache.pair_su_[cache.pair_slot(a, b)] = pair_su[a][b];
    }
  }
  return cache;
}

CorrelationCache build_correlations(const Dataset& dataset) {
  CorrelationCache cache;
  cache.width_ = dataset.num_attributes();
  for (std::size_t a = 0; a < cache.width_; ++a) {
    if (a != dataset.class_index) cache.features_.push_back(a);
  }
  if (cache.features_.size() < 2) {
    throw InvalidArgumentError("correlation cache needs at least two non-class attributes");
  }

  std::vector<double> weights;
  weights.reserve(dataset.instances.size());
  for (const auto& inst : dataset.instances) weights.push_back(inst.weight);

  std::vector<std::vector<int>> codes(cache.width_);
  for (std::size_t a : cache.features_) codes[a] = column_codes(dataset, a);
  const std::vector<int> class_codes = column_codes(dataset, dataset.class_index);

  cache.class_su_.assign(cache.width_, 0.0);
  for (std::size_t a : cache.features_) {
    cache.class_su_[a] = symmetric_uncertainty(codes[a], class_codes, weights);
  }
  cache.pair_su_.assign(cache.width_ * (cache.width_ - 1) / 2, 0.0);
  for (std::size_t i = 0; i < cache.features_.size(); ++i) {
    for (std::size_t j = i + 1; j < cache.features_.size(); ++j) {
      const std::size_t a = cache.features_[i], b = cache.features_[j];
      cache.pair_su_[cache.pair_slot(a, b)] = symmetric_uncertainty(codes[a], codes[b], weights);
    }
  }
  return cache;
}

double merit(const std::vector<std::size_t>& subset, const CorrelationCache& cache) {
  const double k = static_cast<double>(subset.size());
  if (subset.empty()) return 0.0;
  double class_sum = 0.0;
  for (std::size_t a : subset) class_sum += cache.feature_class(a);
  const double mean_cf = class_sum / k;
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      pair_sum += cache.feature_feature(subset[i], subset[j]);
    }
  }
  const double mean_ff = subset.size() > 1 ? pair_sum / (k * (k - 1.0) / 2.0) : 0.0;
  return k * mean_cf / std::sqrt(k + k * (k - 1.0) * mean_ff);
}

FeatureSubset best_first_search(const CorrelationCache& cache, std::size_t max_stale,
                                std::vector<FeatureSubset>* visited) {
  struct OpenOrder {
    bool operator()(const FeatureSubset& a, const FeatureSubset& b) const {
      if (a.merit != b.merit) return a.merit > b.merit;
      return a.attributes < b.attributes;
    }
  };

  FeatureSubset best;  // empty set, merit 0
  std::set<FeatureSubset, OpenOrder> open;
  std::set<std::vector<std::size_t>> seen;
  open.insert(best);
  seen.insert(best.attributes);
  if (visited) visited->push_back(best);

  std::size_t stale = 0;
  while (!open.empty() && stale < max_stale) {
    const FeatureSubset current = *open.begin();
    open.erase(open.begin());

    bool improved = false;
    for (std::size_t a : cache.features()) {
      if (std::binary_search(current.attributes.begin(), current.attributes.end(), a)) continue;
      FeatureSubset successor;
      successor.attributes = current.attributes;
      successor.attributes.insert(
          std::upper_bound(successor.attributes.begin(), successor.attributes.end(), a), a);
      if (!seen.insert(successor.attributes).second) continue;
      successor.merit = merit(successor.attributes, cache);
      if (visited) visited->push_back(successor);
      if (successor.merit > best.merit) {
        best = successor;
        improved = true;
      }
      open.insert(std::move(successor));
    }
    stale = improved ? 0 : stale + 1;
  }
  return best;
}

Dataset filter_dataset(const Dataset& dataset, const FeatureSubset& subset) {
  for (std::size_t a : subset.attributes) {
    if (a >= dataset.num_attributes() || a == dataset.class_index) {
      throw InvalidArgumentError("feature subset holds an invalid attribute index");
    }
  }
  Dataset reduced;
  for (std::size_t a : subset.attributes) reduced.schema.push_back(dataset.schema[a]);
  reduced.schema.push_back(dataset.schema[dataset.class_index]);
  reduced.class_index = reduced.schema.size() - 1;
  reduced.instances.reserve(dataset.instances.size());
  for (const auto& inst : dataset.instances) {
    reduced.instances.push_back(project_instance(inst, subset, dataset.class_index));
  }
  return reduced;
}

Instance project_instance(const Instance& instance, const FeatureSubset& subset,
                          std::size_t class_index) {
  Instance projected;
  projected.weight = instance.weight;
  projected.cells.reserve(subset.attributes.size() + 1);
  for (std::size_t a : subset.attributes) projected.cells.push_back(instance.cells[a]);
  projected.cells.push_back(instance.cells[class_index]);
  return projected;
}

}  // namespace cfs
}  // namespace soilcast
