#include "soilcast/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "soilcast/error.hpp"

namespace soilcast {

namespace {

constexpr double kSplitInfoFloor = 1e-10;

double plog2p(double w, double total) {
  if (w <= 0.0) return 0.0;
  const double p = w / total;
  return p * std::log2(p);
}

double entropy_of_weights(const std::vector<double>& weights, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : weights) h -= plog2p(w, total);
  return h;
}

}  // namespace

ClassDistribution ClassDistribution::from_weights(std::vector<double> weights) {
  ClassDistribution dist;
  dist.weights_ = std::move(weights);
  for (double w : dist.weights_) dist.total_ += w;
  return dist;
}

void ClassDistribution::add(std::size_t cls, double weight) {
  if (cls >= weights_.size()) weights_.resize(cls + 1, 0.0);
  weights_[cls] += weight;
  total_ += weight;
}

double ClassDistribution::max_weight() const {
  double best = 0.0;
  for (double w : weights_) best = std::max(best, w);
  return best;
}

int ClassDistribution::argmax() const {
  int best = 0;
  for (std::size_t i = 1; i < weights_.size(); ++i) {
    if (weights_[i] > weights_[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

bool ClassDistribution::pure() const {
  bool seen = false;
  for (double w : weights_) {
    if (w > 0.0) {
      if (seen) return false;
      seen = true;
    }
  }
  return true;
}

std::vector<double> ClassDistribution::normalized() const {
  if (total_ <= 0.0) throw InvalidArgumentError("cannot normalize an empty distribution");
  std::vector<double> p(weights_);
  for (double& w : p) w /= total_;
  return p;
}

ClassDistribution class_distribution(const WeightedView& view) {
  ClassDistribution dist(view.data().num_classes());
  for (const auto& row : view.rows()) {
    dist.add(static_cast<std::size_t>(view.label(row)), row.weight);
  }
  return dist;
}

double entropy(const ClassDistribution& dist) {
  if (dist.total() <= 0.0) {
    throw InvalidArgumentError("entropy needs a distribution with positive total weight");
  }
  return entropy_of_weights(dist.weights(), dist.total());
}

double information_gain(const ClassDistribution& parent,
                        const std::vector<ClassDistribution>& children) {
  double child_total = 0.0;
  for (const auto& child : children) child_total += child.total();
  const double scale = std::max(parent.total(), 1.0);
  if (std::abs(child_total - parent.total()) > 1e-6 * scale) {
    throw InvalidArgumentError("children do not partition the parent distribution");
  }
  double remainder = 0.0;
  for (const auto& child : children) {
    if (child.total() <= 0.0) continue;
    remainder += (child.total() / parent.total()) * entropy(child);
  }
  return entropy(parent) - remainder;
}

double split_information(const std::vector<ClassDistribution>& children) {
  std::vector<double> sizes;
  sizes.reserve(children.size());
  double total = 0.0;
  for (const auto& child : children) {
    sizes.push_back(child.total());
    total += child.total();
  }
  return entropy_of_weights(sizes, total);
}

double gain_ratio(const ClassDistribution& parent,
                  const std::vector<ClassDistribution>& children) {
  const double gain = information_gain(parent, children);
  const double split_info = split_information(children);
  if (split_info < kSplitInfoFloor) return 0.0;
  return gain / split_info;
}

double gini(const ClassDistribution& dist) {
  if (dist.total() <= 0.0) {
    throw InvalidArgumentError("gini needs a distribution with positive total weight");
  }
  const double total = dist.total();
  double sum_sq = 0.0;
  for (double w : dist.weights()) sum_sq += w * w;
  return (total * total - sum_sq) / (total * total);
}

double symmetric_uncertainty(const std::vector<int>& x, const std::vector<int>& y,
                             const std::vector<double>& weights) {
  if (x.size() != y.size() || x.size() != weights.size()) {
    throw InvalidArgumentError("symmetric_uncertainty: column lengths differ");
  }
  // Canonical argument order makes SU(x, y) and SU(y, x) run the identical
  // floating-point sequence, so symmetry holds exactly.
  const bool swap_args = std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
  const std::vector<int>& a = swap_args ? y : x;
  const std::vector<int>& b = swap_args ? x : y;

  std::map<int, double> wa, wb;
  std::map<std::pair<int, int>, double> wab;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    wa[a[i]] += weights[i];
    wb[b[i]] += weights[i];
    wab[{a[i], b[i]}] += weights[i];
    total += weights[i];
  }
  if (total <= 0.0) return 0.0;

  auto map_entropy = [&](const auto& counts) {
    double h = 0.0;
    for (const auto& [key, w] : counts) h -= plog2p(w, total);
    return h;
  };
  const double ha = map_entropy(wa);
  const double hb = map_entropy(wb);
  const double hab = map_entropy(wab);
  const double denom = ha + hb;
  if (denom < 1e-12) return 0.0;
  const double su = 2.0 * (ha + hb - hab) / denom;
  return std::clamp(su, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// MDL discretization

std::size_t bin_index(const CutPointSet& cuts, double value) {
  std::size_t lo = 0, hi = cuts.cut_points.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (value <= cuts.cut_points[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

namespace {

struct ValueGroup {
  double value;
  std::vector<double> class_weights;
  double total = 0.0;
};

struct Segment {
  std::vector<double> class_weights;
  double total = 0.0;
  double entropy = 0.0;
  int classes_present = 0;

  static Segment over(const std::vector<ValueGroup>& groups, std::size_t lo, std::size_t hi,
                      std::size_t num_classes) {
    Segment seg;
    seg.class_weights.assign(num_classes, 0.0);
    for (std::size_t g = lo; g < hi; ++g) {
      for (std::size_t c = 0; c < num_classes; ++c) seg.class_weights[c] += groups[g].class_weights[c];
      seg.total += groups[g].total;
    }
    seg.entropy = entropy_of_weights(seg.class_weights, seg.total);
    for (double w : seg.class_weights) {
      if (w > 0.0) ++seg.classes_present;
    }
    return seg;
  }
};

// True when the boundary between two adjacent value groups can carry an
// optimal cut: only midpoints where the class make-up changes qualify, i.e.
// the two groups are not both pure in the same single class.
bool is_class_boundary(const ValueGroup& left, const ValueGroup& right) {
  int left_class = -1, right_class = -1;
  for (std::size_t c = 0; c < left.class_weights.size(); ++c) {
    if (left.class_weights[c] > 0.0) {
      if (left_class >= 0) return true;  // left group is mixed
      left_class = static_cast<int>(c);
    }
  }
  for (std::size_t c = 0; c < right.class_weights.size(); ++c) {
    if (right.class_weights[c] > 0.0) {
      if (right_class >= 0) return true;
      right_class = static_cast<int>(c);
    }
  }
  return left_class != right_class;
}

void discretize_range(const std::vector<ValueGroup>& groups, std::size_t lo, std::size_t hi,
                      std::size_t num_classes, std::vector<double>* cuts) {
  if (hi - lo < 2) return;
  const Segment parent = Segment::over(groups, lo, hi, num_classes);
  if (parent.total <= 1.0 || parent.classes_present < 2) return;

  // Scan boundaries left to right, tracking the best-gain cut (first wins on
  // ties, i.e. the lowest cut value).
  std::vector<double> left_weights(num_classes, 0.0);
  double left_total = 0.0;
  double best_gain = -1.0;
  std::size_t best_split = 0;  // groups [lo, best_split) go left
  Segment best_left, best_right;

  for (std::size_t g = lo; g + 1 < hi; ++g) {
    for (std::size_t c = 0; c < num_classes; ++c) left_weights[c] += groups[g].class_weights[c];
    left_total += groups[g].total;
    if (!is_class_boundary(groups[g], groups[g + 1])) continue;

    Segment left;
    left.class_weights = left_weights;
    left.total = left_total;
    left.entropy = entropy_of_weights(left_weights, left_total);
    Segment right;
    right.class_weights.resize(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      right.class_weights[c] = parent.class_weights[c] - left_weights[c];
    }
    right.total = parent.total - left_total;
    right.entropy = entropy_of_weights(right.class_weights, right.total);
    const double gain = parent.entropy - (left.total / parent.total) * left.entropy -
                        (right.total / parent.total) * right.entropy;
    if (gain > best_gain) {
      best_gain = gain;
      best_split = g + 1;
      for (Segment* seg : {&left, &right}) {
        seg->classes_present = 0;
        for (double w : seg->class_weights) {
          if (w > 0.0) ++seg->classes_present;
        }
      }
      best_left = std::move(left);
      best_right = std::move(right);
    }
  }
  if (best_gain < 0.0) return;  // no class boundary in this range

  const double n = parent.total;
  const double k = static_cast<double>(parent.classes_present);
  const double threshold = (std::log2(n - 1.0) + std::log2(std::pow(3.0, k) - 2.0) -
                            k * parent.entropy + best_left.classes_present * best_left.entropy +
                            best_right.classes_present * best_right.entropy) /
                           n;
  if (!(best_gain > threshold)) return;

  const double cut = (groups[best_split - 1].value + groups[best_split].value) / 2.0;
  discretize_range(groups, lo, best_split, num_classes, cuts);
  cuts->push_back(cut);
  discretize_range(groups, best_split, hi, num_classes, cuts);
}

}  // namespace

CutPointSet discretize_mdl(const WeightedView& view, std::size_t attribute) {
  const Dataset& data = view.data();
  if (attribute >= data.schema.size() || attribute == data.class_index ||
      data.schema[attribute].kind != AttributeKind::kNumeric) {
    throw InvalidArgumentError("discretize_mdl needs a numeric non-class attribute");
  }

  std::vector<std::pair<double, const WeightedView::Row*>> present;
  present.reserve(view.size());
  for (const auto& row : view.rows()) {
    const double value = view.cell(row, attribute);
    if (!is_missing(value)) present.emplace_back(value, &row);
  }
  CutPointSet cuts;
  cuts.attribute = attribute;
  if (present.size() < 2) return cuts;

  std::stable_sort(present.begin(), present.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const std::size_t num_classes = data.num_classes();
  std::vector<ValueGroup> groups;
  for (const auto& [value, row] : present) {
    if (groups.empty() || groups.back().value != value) {
      groups.push_back({value, std::vector<double>(num_classes, 0.0), 0.0});
    }
    groups.back().class_weights[static_cast<std::size_t>(view.label(*row))] += row->weight;
    groups.back().total += row->weight;
  }
  if (groups.size() < 2) return cuts;

  discretize_range(groups, 0, groups.size(), num_classes, &cuts.cut_points);
  return cuts;
}

CutPointSet discretize_mdl(const Dataset& dataset, std::size_t attribute) {
  return discretize_mdl(WeightedView::whole(dataset), attribute);
}

}  // namespace soilcast
