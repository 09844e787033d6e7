#pragma once

// Shared helpers for the test suites: compact dataset builders, structural
// tree comparisons, and independent brute-force oracles the learners are
// checked against. The oracles recompute everything from scratch with plain
// loops so they share no code path with the library.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/rng.hpp"
#include "soilcast/tree.hpp"

namespace test_util {

// Self-cleaning scratch directory for file-based cases.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("soilcast_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }

  std::string path_to(const std::string& name) const { return (path / name).string(); }
};

using soilcast::AttributeKind;
using soilcast::AttributeSpec;
using soilcast::Dataset;
using soilcast::Instance;
using soilcast::SplitTest;
using soilcast::TreeNode;
using soilcast::WeightedView;

inline AttributeSpec numeric_attr(std::string name) {
  return {std::move(name), AttributeKind::kNumeric, {}};
}

inline AttributeSpec nominal_attr(std::string name, std::vector<std::string> values) {
  return {std::move(name), AttributeKind::kNominal, std::move(values)};
}

// Dataset whose last column is the class. Every row is (feature cells...,
// class value index); missing cells are NaN.
inline Dataset make_dataset(std::vector<AttributeSpec> features,
                            std::vector<std::string> class_values,
                            const std::vector<std::vector<double>>& rows) {
  Dataset d;
  d.schema = std::move(features);
  d.schema.push_back(nominal_attr("class", std::move(class_values)));
  d.class_index = d.schema.size() - 1;
  for (const auto& row : rows) {
    Instance inst;
    inst.cells = row;
    d.instances.push_back(std::move(inst));
  }
  return d;
}

// Two-class dataset over one feature column, built from parallel value and
// label vectors.
inline Dataset one_feature_dataset(AttributeSpec feature, const std::vector<double>& values,
                                   const std::vector<int>& labels) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back({values[i], static_cast<double>(labels[i])});
  }
  return make_dataset({std::move(feature)}, {"A", "B"}, rows);
}

inline double resubstitution_accuracy(const TreeNode& root, const Dataset& d,
                                      soilcast::MissingPolicy policy) {
  double correct = 0.0, total = 0.0;
  for (const auto& inst : d.instances) {
    if (soilcast::predict_class(root, inst, policy) == d.label_of(inst)) correct += inst.weight;
    total += inst.weight;
  }
  return correct / total;
}

inline bool tests_equal(const SplitTest& a, const SplitTest& b) {
  if (a.kind != b.kind || a.attribute != b.attribute) return false;
  switch (a.kind) {
    case SplitTest::Kind::kNumericThreshold:
      return a.threshold == b.threshold;
    case SplitTest::Kind::kNominalOneVsRest:
      return a.match_value == b.match_value;
    case SplitTest::Kind::kNominalMultiway:
      return true;
  }
  return false;
}

inline bool trees_identical(const TreeNode& a, const TreeNode& b) {
  if (a.is_leaf() != b.is_leaf() || a.predicted != b.predicted) return false;
  if (a.dist.weights() != b.dist.weights()) return false;
  if (a.is_leaf()) return true;
  if (!tests_equal(*a.test, *b.test) || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!trees_identical(a.children[i], b.children[i])) return false;
  }
  return true;
}

// True when `pruned` arises from `full` by collapsing internal nodes into
// leaves (the nestedness a pruning sequence promises).
inline bool is_pruned_subtree(const TreeNode& full, const TreeNode& pruned) {
  if (pruned.is_leaf()) return true;
  if (full.is_leaf()) return false;
  if (!tests_equal(*full.test, *pruned.test)) return false;
  if (full.children.size() != pruned.children.size()) return false;
  for (std::size_t i = 0; i < full.children.size(); ++i) {
    if (!is_pruned_subtree(full.children[i], pruned.children[i])) return false;
  }
  return true;
}

inline bool all_leaves_pure(const TreeNode& node) {
  if (node.is_leaf()) return node.dist.pure();
  for (const auto& child : node.children) {
    if (!all_leaves_pure(child)) return false;
  }
  return true;
}

inline std::size_t tree_depth(const TreeNode& node) {
  if (node.is_leaf()) return 0;
  std::size_t deepest = 0;
  for (const auto& child : node.children) deepest = std::max(deepest, tree_depth(child));
  return deepest + 1;
}

inline void collect_tested_attributes(const TreeNode& node, std::vector<std::size_t>& out) {
  if (node.is_leaf()) return;
  out.push_back(node.test->attribute);
  for (const auto& child : node.children) collect_tested_attributes(child, out);
}

// ---------------------------------------------------------------------------
// Random datasets with labels that are a deterministic function of the
// feature cells, so duplicated feature vectors never conflict.

inline Dataset random_consistent_dataset(soilcast::Rng& rng, std::size_t rows,
                                         std::size_t numeric_count, std::size_t nominal_count,
                                         std::size_t num_classes) {
  std::vector<AttributeSpec> features;
  for (std::size_t i = 0; i < numeric_count; ++i) {
    features.push_back(numeric_attr("n" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < nominal_count; ++i) {
    features.push_back(nominal_attr("m" + std::to_string(i), {"u", "v", "w"}));
  }
  std::vector<std::string> class_values;
  for (std::size_t c = 0; c < num_classes; ++c) class_values.push_back("c" + std::to_string(c));

  std::vector<std::vector<double>> data_rows;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row;
    std::uint64_t hash = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < numeric_count; ++i) {
      const double v = static_cast<double>(rng.bounded(6));
      row.push_back(v);
      hash = soilcast::mix_seed(hash, static_cast<std::uint64_t>(v));
    }
    for (std::size_t i = 0; i < nominal_count; ++i) {
      const double v = static_cast<double>(rng.bounded(3));
      row.push_back(v);
      hash = soilcast::mix_seed(hash, static_cast<std::uint64_t>(v) + 17);
    }
    row.push_back(static_cast<double>(hash % num_classes));
    data_rows.push_back(std::move(row));
  }
  return make_dataset(std::move(features), std::move(class_values), data_rows);
}

// Random dataset with noisy labels and optional missing feature cells.
inline Dataset random_noisy_dataset(soilcast::Rng& rng, std::size_t rows,
                                    std::size_t numeric_count, std::size_t num_classes,
                                    double missing_prob) {
  std::vector<AttributeSpec> features;
  for (std::size_t i = 0; i < numeric_count; ++i) {
    features.push_back(numeric_attr("n" + std::to_string(i)));
  }
  std::vector<std::string> class_values;
  for (std::size_t c = 0; c < num_classes; ++c) class_values.push_back("c" + std::to_string(c));

  std::vector<std::vector<double>> data_rows;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto cls = rng.bounded(num_classes);
    std::vector<double> row;
    for (std::size_t i = 0; i < numeric_count; ++i) {
      if (rng.uniform01() < missing_prob) {
        row.push_back(soilcast::missing_cell());
      } else {
        row.push_back(static_cast<double>(cls) + rng.gaussian());
      }
    }
    row.push_back(static_cast<double>(cls));
    data_rows.push_back(std::move(row));
  }
  return make_dataset(std::move(features), std::move(class_values), data_rows);
}

// ---------------------------------------------------------------------------
// Brute-force split oracles. Both mirror the documented selection contracts
// (admissibility rules, tie epsilon 1e-12, lowest attribute / threshold /
// value winning ties) while recomputing every quantity from plain per-branch
// class-count loops. No missing values are expected.

struct OracleSplit {
  SplitTest test;
  double score = 0.0;
};

namespace detail {

inline double entropy_bits(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log2(c / total);
  }
  return h;
}

inline double gini_impurity(const std::vector<double>& counts) {
  double total = 0.0, sq = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  for (double c : counts) sq += (c / total) * (c / total);
  return 1.0 - sq;
}

inline bool is_pure(const std::vector<double>& counts) {
  int present = 0;
  for (double c : counts) {
    if (c > 0.0) ++present;
  }
  return present <= 1;
}

struct Columns {
  std::vector<std::vector<double>> cells;  // [attribute][row]
  std::vector<double> weights;
  std::vector<int> labels;
  std::vector<double> parent;  // class counts
};

inline Columns explode(const WeightedView& view) {
  Columns c;
  const Dataset& d = view.data();
  c.cells.resize(d.schema.size());
  c.parent.assign(d.num_classes(), 0.0);
  for (const auto& row : view.rows()) {
    for (std::size_t a = 0; a < d.schema.size(); ++a) c.cells[a].push_back(view.cell(row, a));
    c.weights.push_back(row.weight);
    c.labels.push_back(view.label(row));
    c.parent[static_cast<std::size_t>(view.label(row))] += row.weight;
  }
  return c;
}

}  // namespace detail

struct OracleCandidate {
  SplitTest test;
  double gain = 0.0;
  double ratio = 0.0;
};

// Gain-ratio contract mirror: per attribute one candidate (multiway for
// nominal, best-raw-gain midpoint for numeric, an MDL charge of
// log2(m-1)/W subtracted afterwards when m >= 2 thresholds exist); nominal
// candidates need every branch occupied and the largest branch at the
// minimum, numeric thresholds are skipped only when both sides fall below
// it; negative gains beyond -1e-12 are dropped, the rest clamped to zero.
// Selection keeps candidates whose gain reaches the mean gain and picks the
// best ratio, first (lowest attribute) winning ties.
inline std::optional<OracleSplit> oracle_c45_best(const WeightedView& view, double min_weight,
                                                  bool mdl_penalty) {
  const Dataset& d = view.data();
  const std::size_t num_classes = d.num_classes();
  const auto col = detail::explode(view);
  if (detail::is_pure(col.parent)) return std::nullopt;

  std::vector<OracleCandidate> candidates;
  for (std::size_t attr = 0; attr < d.schema.size(); ++attr) {
    if (attr == d.class_index) continue;
    if (d.schema[attr].kind == AttributeKind::kNominal) {
      const std::size_t arity = d.schema[attr].nominal_values.size();
      std::vector<std::vector<double>> children(arity, std::vector<double>(num_classes, 0.0));
      std::vector<double> sizes(arity, 0.0);
      for (std::size_t r = 0; r < col.weights.size(); ++r) {
        const auto v = static_cast<std::size_t>(col.cells[attr][r]);
        children[v][static_cast<std::size_t>(col.labels[r])] += col.weights[r];
        sizes[v] += col.weights[r];
      }
      bool every_branch = true;
      double max_branch = 0.0;
      for (double s : sizes) {
        if (s <= 0.0) every_branch = false;
        max_branch = std::max(max_branch, s);
      }
      if (!every_branch || max_branch < min_weight) continue;
      double total = 0.0;
      for (double s : sizes) total += s;
      double remainder = 0.0;
      for (std::size_t v = 0; v < arity; ++v) {
        remainder += (sizes[v] / total) * detail::entropy_bits(children[v]);
      }
      double gain = detail::entropy_bits(col.parent) - remainder;
      if (gain < -1e-12) continue;
      gain = std::max(gain, 0.0);
      const double split_info = detail::entropy_bits(sizes);
      const double raw_gain = detail::entropy_bits(col.parent) - remainder;
      const double ratio = split_info < 1e-10 ? 0.0 : raw_gain / split_info;
      candidates.push_back({{SplitTest::Kind::kNominalMultiway, attr, 0.0, 0}, gain, ratio});
    } else {
      std::vector<double> distinct = col.cells[attr];
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      if (distinct.size() < 2) continue;
      double total = 0.0;
      for (double w : col.weights) total += w;
      const double parent_entropy = detail::entropy_bits(col.parent);

      bool found = false;
      double best_gain = 0.0, best_threshold = 0.0;
      std::vector<double> best_sizes;
      for (std::size_t t = 0; t + 1 < distinct.size(); ++t) {
        const double threshold = (distinct[t] + distinct[t + 1]) / 2.0;
        std::vector<double> left(num_classes, 0.0), right(num_classes, 0.0);
        double left_size = 0.0, right_size = 0.0;
        for (std::size_t r = 0; r < col.weights.size(); ++r) {
          if (col.cells[attr][r] <= threshold) {
            left[static_cast<std::size_t>(col.labels[r])] += col.weights[r];
            left_size += col.weights[r];
          } else {
            right[static_cast<std::size_t>(col.labels[r])] += col.weights[r];
            right_size += col.weights[r];
          }
        }
        if (left_size < min_weight && right_size < min_weight) continue;
        const double remainder = (left_size / total) * detail::entropy_bits(left) +
                                 (right_size / total) * detail::entropy_bits(right);
        const double gain = parent_entropy - remainder;
        if (!found || gain > best_gain + 1e-12) {
          found = true;
          best_gain = gain;
          best_threshold = threshold;
          best_sizes = {left_size, right_size};
        }
      }
      if (!found) continue;
      double gain = best_gain;
      if (mdl_penalty && distinct.size() >= 3) {
        gain -= std::log2(static_cast<double>(distinct.size()) - 2.0) / total;
      }
      if (gain < -1e-12) continue;
      gain = std::max(gain, 0.0);
      const double split_info = detail::entropy_bits(best_sizes);
      const double ratio = split_info < 1e-10 ? 0.0 : gain / split_info;
      candidates.push_back(
          {{SplitTest::Kind::kNumericThreshold, attr, best_threshold, 0}, gain, ratio});
    }
  }
  if (candidates.empty()) return std::nullopt;

  double mean_gain = 0.0;
  for (const auto& cand : candidates) mean_gain += cand.gain;
  mean_gain /= static_cast<double>(candidates.size());
  const OracleCandidate* best = nullptr;
  for (const auto& cand : candidates) {
    if (cand.gain + 1e-12 < mean_gain) continue;
    if (!best || cand.ratio > best->ratio + 1e-12) best = &cand;
  }
  if (!best) return std::nullopt;
  return OracleSplit{best->test, best->ratio};
}

// Gini-decrease contract mirror: every midpoint threshold and every
// one-value-vs-rest partition, both branches at the minimum weight, negative
// decreases beyond -1e-12 dropped and the rest clamped; the scan keeps the
// first candidate within 1e-12 of the best, so the lowest attribute, then
// threshold or value index, wins.
inline std::optional<OracleSplit> oracle_cart_best(const WeightedView& view, double min_weight) {
  const Dataset& d = view.data();
  const std::size_t num_classes = d.num_classes();
  const auto col = detail::explode(view);
  if (detail::is_pure(col.parent)) return std::nullopt;

  double total = 0.0;
  for (double w : col.weights) total += w;
  const double parent_gini = detail::gini_impurity(col.parent);

  bool found = false;
  OracleSplit best;
  auto offer = [&](const SplitTest& test, const std::vector<double>& left,
                   const std::vector<double>& right, double left_size, double right_size) {
    if (left_size < min_weight || right_size < min_weight) return;
    const double decrease = parent_gini -
                            (left_size / total) * detail::gini_impurity(left) -
                            (right_size / total) * detail::gini_impurity(right);
    if (decrease < -1e-12) return;
    const double clamped = std::max(decrease, 0.0);
    if (!found || clamped > best.score + 1e-12) {
      found = true;
      best = {test, clamped};
    }
  };

  for (std::size_t attr = 0; attr < d.schema.size(); ++attr) {
    if (attr == d.class_index) continue;
    if (d.schema[attr].kind == AttributeKind::kNumeric) {
      std::vector<double> distinct = col.cells[attr];
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (std::size_t t = 0; t + 1 < distinct.size(); ++t) {
        const double threshold = (distinct[t] + distinct[t + 1]) / 2.0;
        std::vector<double> left(num_classes, 0.0), right(num_classes, 0.0);
        double left_size = 0.0, right_size = 0.0;
        for (std::size_t r = 0; r < col.weights.size(); ++r) {
          if (col.cells[attr][r] <= threshold) {
            left[static_cast<std::size_t>(col.labels[r])] += col.weights[r];
            left_size += col.weights[r];
          } else {
            right[static_cast<std::size_t>(col.labels[r])] += col.weights[r];
            right_size += col.weights[r];
          }
        }
        offer({SplitTest::Kind::kNumericThreshold, attr, threshold, 0}, left, right, left_size,
              right_size);
      }
    } else {
      const std::size_t arity = d.schema[attr].nominal_values.size();
      for (std::size_t v = 0; v < arity; ++v) {
        std::vector<double> match(num_classes, 0.0), rest(num_classes, 0.0);
        double match_size = 0.0, rest_size = 0.0;
        for (std::size_t r = 0; r < col.weights.size(); ++r) {
          if (static_cast<std::size_t>(col.cells[attr][r]) == v) {
            match[static_cast<std::size_t>(col.labels[r])] += col.weights[r];
            match_size += col.weights[r];
          } else {
            rest[static_cast<std::size_t>(col.labels[r])] += col.weights[r];
            rest_size += col.weights[r];
          }
        }
        offer({SplitTest::Kind::kNominalOneVsRest, attr, 0.0, v}, match, rest, match_size,
              rest_size);
      }
    }
  }
  if (!found) return std::nullopt;
  return best;
}

// ---------------------------------------------------------------------------
// Exact binomial inversion: the smallest p with P[Bin(n, p) <= errors] <= cf,
// found by bisection on a directly summed CDF. Reference point for the
// normal-approximation error bound.

inline double binomial_upper_error(int errors, int n, double cf) {
  auto cdf = [&](double p) {
    double sum = 0.0;
    for (int k = 0; k <= errors; ++k) {
      double log_term = 0.0;
      for (int i = 0; i < k; ++i) {
        log_term += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(k - i));
      }
      log_term += k * std::log(p) + (n - k) * std::log1p(-p);
      sum += std::exp(log_term);
    }
    return sum;
  };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = (lo + hi) / 2.0;
    if (cdf(mid) <= cf) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (lo + hi) / 2.0;
}

}  // namespace test_util
