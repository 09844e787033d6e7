#include "soilcast/c45.hpp"

#include <algorithm>
#include <cmath>

#include "soilcast/error.hpp"

namespace soilcast {
namespace c45 {

namespace {

constexpr double kTieEpsilon = 1e-12;

// Inverse of the standard normal CDF (Wichura's algorithm AS 241, double
// precision variant). Needed for the one-sided confidence bound; <cmath> has
// no quantile function.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgumentError("normal quantile needs p in (0, 1)");
  }
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) *
                    r +
                4.5921953931549871457e+4) *
                   r +
               1.3731693765509461125e+4) *
                  r +
              1.9715909503065514427e+3) *
                 r +
             1.3314166789178437745e+2) *
                r +
            3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) *
                    r +
                2.1213794301586595867e+4) *
                   r +
               5.3941960214247511077e+3) *
                  r +
              6.8718700749205790830e+2) *
                 r +
             4.2313330701600911252e+1) *
                r +
            1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) *
                     r +
                 1.27045825245236838258e+0) *
                    r +
                3.64784832476320460504e+0) *
                   r +
               5.76949722146069140550e+0) *
                  r +
              4.63033784615654529590e+0) *
                 r +
             1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) *
                     r +
                 1.48103976427480074590e-1) *
                    r +
                6.89767334985100004550e-1) *
                   r +
               1.67638483018380384940e+0) *
                  r +
              2.05319162663775882187e+0) *
                 r +
             1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) *
                     r +
                 2.65321895265761230930e-2) *
                    r +
                2.96560571828504891230e-1) *
                   r +
               1.78482653991729133580e+0) *
                  r +
              5.46378491116411436990e+0) *
                 r +
             6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) *
                     r +
                 7.86869131145613259100e-4) *
                    r +
                1.48753612908506148525e-2) *
                   r +
               1.36929880922735805310e-1) *
                  r +
              5.99832206555887937690e-1) *
                 r +
             1.0);
  }
  return q < 0.0 ? -value : value;
}

struct NominalScan {
  std::vector<ClassDistribution> children;
  ClassDistribution parent;  // non-missing rows only
  bool valid = false;
};

NominalScan scan_nominal(const WeightedView& view, std::size_t attribute) {
  const std::size_t arity = view.data().schema[attribute].nominal_values.size();
  const std::size_t num_classes = view.data().num_classes();
  NominalScan scan;
  scan.children.assign(arity, ClassDistribution(num_classes));
  scan.parent = ClassDistribution(num_classes);
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, attribute);
    if (is_missing(value)) continue;
    const auto cls = static_cast<std::size_t>(view.label(row));
    scan.children[static_cast<std::size_t>(value)].add(cls, row.weight);
    scan.parent.add(cls, row.weight);
  }
  // Every branch must end up with weight: a node's distribution total is
  // always positive, so a split may not manufacture empty children.
  scan.valid = scan.parent.total() > 0.0;
  for (const auto& child : scan.children) {
    if (child.total() <= 0.0) scan.valid = false;
  }
  return scan;
}

struct ValueGroup {
  double value;
  ClassDistribution dist;
};

std::vector<ValueGroup> sorted_groups(const WeightedView& view, std::size_t attribute,
                                      std::size_t num_classes) {
  std::vector<std::pair<double, const WeightedView::Row*>> present;
  present.reserve(view.size());
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, attribute);
    if (!is_missing(value)) present.emplace_back(value, &row);
  }
  std::stable_sort(present.begin(), present.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ValueGroup> groups;
  for (const auto& [value, row] : present) {
    if (groups.empty() || groups.back().value != value) {
      groups.push_back({value, ClassDistribution(num_classes)});
    }
    groups.back().dist.add(static_cast<std::size_t>(view.label(*row)), row->weight);
  }
  return groups;
}

struct NumericScan {
  double threshold = 0.0;
  double gain = 0.0;
  ClassDistribution left, right;
  std::size_t num_thresholds = 0;  // all distinct midpoints, valid or not
  double non_missing_weight = 0.0;
  bool found = false;
};

// Best midpoint threshold by information gain over the non-missing rows.
// Thresholds where every branch stays below min_weight are skipped; ties
// resolve to the lowest threshold.
NumericScan scan_numeric(const WeightedView& view, std::size_t attribute, double min_weight) {
  const std::size_t num_classes = view.data().num_classes();
  NumericScan scan;
  const auto groups = sorted_groups(view, attribute, num_classes);
  if (groups.size() < 2) return scan;
  scan.num_thresholds = groups.size() - 1;

  ClassDistribution parent(num_classes);
  for (const auto& group : groups) {
    for (std::size_t c = 0; c < num_classes; ++c) parent.add(c, group.dist.weight(c));
  }
  scan.non_missing_weight = parent.total();
  const double parent_entropy = entropy(parent);

  ClassDistribution left(num_classes);
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    for (std::size_t c = 0; c < num_classes; ++c) left.add(c, groups[g].dist.weight(c));
    ClassDistribution right(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      right.add(c, parent.weight(c) - left.weight(c));
    }
    if (left.total() < min_weight && right.total() < min_weight) continue;
    const double remainder = (left.total() / parent.total()) * entropy(left) +
                             (right.total() / parent.total()) * entropy(right);
    const double gain = parent_entropy - remainder;
    if (!scan.found || gain > scan.gain + kTieEpsilon) {
      scan.found = true;
      scan.gain = gain;
      scan.threshold = (groups[g].value + groups[g + 1].value) / 2.0;
      scan.left = left;
      scan.right = right;
    }
  }
  return scan;
}

}  // namespace

std::vector<SplitCandidate> split_candidates(const WeightedView& view, const C45Params& params) {
  std::vector<SplitCandidate> candidates;
  const Dataset& data = view.data();
  if (class_distribution(view).pure()) return candidates;

  for (std::size_t attr = 0; attr < data.schema.size(); ++attr) {
    if (attr == data.class_index) continue;
    if (data.schema[attr].kind == AttributeKind::kNominal) {
      NominalScan scan = scan_nominal(view, attr);
      if (!scan.valid) continue;
      double max_branch = 0.0;
      for (const auto& child : scan.children) max_branch = std::max(max_branch, child.total());
      if (max_branch < params.min_instances_per_leaf) continue;
      double gain = information_gain(scan.parent, scan.children);
      if (gain < -kTieEpsilon) continue;
      gain = std::max(gain, 0.0);
      SplitCandidate cand;
      cand.test = {SplitTest::Kind::kNominalMultiway, attr, 0.0, 0};
      cand.gain = gain;
      cand.ratio = gain_ratio(scan.parent, scan.children);
      candidates.push_back(std::move(cand));
    } else {
      NumericScan scan = scan_numeric(view, attr, params.min_instances_per_leaf);
      if (!scan.found) continue;
      double gain = scan.gain;
      if (params.use_mdl_numeric_penalty && scan.num_thresholds >= 2) {
        gain -= std::log2(static_cast<double>(scan.num_thresholds) - 1.0) /
                scan.non_missing_weight;
      }
      if (gain < -kTieEpsilon) continue;
      gain = std::max(gain, 0.0);
      SplitCandidate cand;
      cand.test = {SplitTest::Kind::kNumericThreshold, attr, scan.threshold, 0};
      cand.gain = gain;
      // The ratio follows the penalized gain; split information is unchanged.
      const double split_info = split_information({scan.left, scan.right});
      cand.ratio = split_info < 1e-10 ? 0.0 : gain / split_info;
      candidates.push_back(std::move(cand));
    }
  }
  return candidates;
}

std::optional<std::pair<SplitTest, double>> best_split(const WeightedView& view,
                                                       const C45Params& params) {
  const auto candidates = split_candidates(view, params);
  if (candidates.empty()) return std::nullopt;
  double mean_gain = 0.0;
  for (const auto& cand : candidates) mean_gain += cand.gain;
  mean_gain /= static_cast<double>(candidates.size());

  const SplitCandidate* best = nullptr;
  for (const auto& cand : candidates) {
    if (cand.gain + kTieEpsilon < mean_gain) continue;
    if (!best || cand.ratio > best->ratio + kTieEpsilon) best = &cand;
  }
  if (!best) return std::nullopt;
  return std::make_pair(best->test, best->ratio);
}

std::vector<WeightedView> partition_fractional(const WeightedView& view, const SplitTest& test,
                                               std::size_t num_branches) {
  std::vector<double> branch_weight(num_branches, 0.0);
  double non_missing = 0.0;
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, test.attribute);
    if (is_missing(value)) continue;
    branch_weight[test.branch_of(value)] += row.weight;
    non_missing += row.weight;
  }

  std::vector<std::vector<WeightedView::Row>> rows(num_branches);
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, test.attribute);
    if (!is_missing(value)) {
      rows[test.branch_of(value)].push_back(row);
    } else if (non_missing > 0.0) {
      for (std::size_t b = 0; b < num_branches; ++b) {
        const double fraction = branch_weight[b] / non_missing;
        if (fraction > 0.0) rows[b].push_back({row.index, row.weight * fraction});
      }
    }
  }
  std::vector<WeightedView> views;
  views.reserve(num_branches);
  for (auto& branch_rows : rows) {
    views.emplace_back(view.data(), std::move(branch_rows));
  }
  return views;
}

namespace {

std::size_t branch_count(const SplitTest& test, const Dataset& data) {
  return test.kind == SplitTest::Kind::kNominalMultiway
             ? data.schema[test.attribute].nominal_values.size()
             : 2;
}

TreeNode grow(const WeightedView& view, const C45Params& params) {
  TreeNode node;
  node.dist = class_distribution(view);
  node.predicted = node.dist.argmax();
  if (view.total_weight() < 2.0 * params.min_instances_per_leaf) return node;

  const auto best = best_split(view, params);
  if (!best) return node;

  const std::size_t branches = branch_count(best->first, view.data());
  auto child_views = partition_fractional(view, best->first, branches);
  for (const auto& child : child_views) {
    if (child.total_weight() <= 0.0) return node;  // defensive; candidates forbid this
  }
  node.test = best->first;
  node.children.reserve(branches);
  for (const auto& child : child_views) {
    node.children.push_back(grow(child, params));
  }
  return node;
}

// Returns the subtree's pessimistic error estimate on the count scale,
// collapsing any internal node that would do no worse as a leaf.
double prune_rec(TreeNode& node, double cf) {
  const double n = node.dist.total();
  const double errors = n - node.dist.max_weight();
  const double as_leaf = n * pessimistic_error(errors, n, cf);
  if (node.is_leaf()) return as_leaf;
  double as_subtree = 0.0;
  for (TreeNode& child : node.children) as_subtree += prune_rec(child, cf);
  if (as_leaf <= as_subtree) {
    make_leaf(node);
    return as_leaf;
  }
  return as_subtree;
}

}  // namespace

double pessimistic_error(double errors, double n, double cf) {
  if (!(n > 0.0)) throw InvalidArgumentError("pessimistic_error needs n > 0");
  if (errors < 0.0 || errors > n + 1e-9) {
    throw InvalidArgumentError("pessimistic_error needs 0 <= errors <= n");
  }
  if (!(cf > 0.0 && cf <= 0.5)) {
    throw InvalidArgumentError("confidence factor must lie in (0, 0.5]");
  }
  const double z = cf == 0.5 ? 0.0 : inverse_normal_cdf(1.0 - cf);
  const double f = std::min(errors / n, 1.0);
  const double z2 = z * z;
  const double numerator =
      f + z2 / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z2 / (4.0 * n * n));
  const double bound = numerator / (1.0 + z2 / n);
  return std::clamp(bound, 0.0, 1.0);
}

TreeNode prune_ebp(TreeNode root, const C45Params& params) {
  prune_rec(root, params.confidence_factor);
  return root;
}

TreeNode induce(const Dataset& dataset, const C45Params& params) {
  if (dataset.instances.empty()) throw InvalidArgumentError("cannot induce a tree from no data");
  const WeightedView view = WeightedView::whole(dataset);
  if (view.total_weight() <= 0.0) {
    throw InvalidArgumentError("cannot induce a tree from zero total weight");
  }
  TreeNode root = grow(view, params);
  if (params.pruning) root = prune_ebp(std::move(root), params);
  return root;
}

}  // namespace c45
}  // namespace soilcast
