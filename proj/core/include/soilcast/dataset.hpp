#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace soilcast {

enum class AttributeKind { kNumeric, kNominal };

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  // Populated for nominal attributes only, in order of first appearance.
  std::vector<std::string> nominal_values;

  bool operator==(const AttributeSpec&) const = default;
};

// A cell is a double: the value itself for numeric attributes, the value
// index for nominal ones, NaN for missing.
inline double missing_cell() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double cell) { return cell != cell; }

struct Instance {
  std::vector<double> cells;
  double weight = 1.0;
};

// Compares cells treating two missing values as equal.
bool cells_equal(const std::vector<double>& a, const std::vector<double>& b);

struct Dataset {
  std::vector<AttributeSpec> schema;
  std::size_t class_index = 0;
  std::vector<Instance> instances;

  std::size_t num_attributes() const { return schema.size(); }
  std::size_t num_classes() const { return schema[class_index].nominal_values.size(); }
  const AttributeSpec& class_attribute() const { return schema[class_index]; }

  // Class value index of an instance; throws InvalidArgumentError if the
  // class cell is missing.
  int label_of(const Instance& inst) const;
};

bool datasets_equal(const Dataset& a, const Dataset& b);

// A weighted, read-only selection of rows from a dataset. Learners recurse on
// views instead of copying data; missing-value handling may assign a row to
// several children with fractional weights. Rows with non-positive weight are
// dropped on construction since they cannot influence any weighted count.
class WeightedView {
 public:
  struct Row {
    std::uint32_t index;
    double weight;
  };

  WeightedView(const Dataset& data, std::vector<Row> rows);
  static WeightedView whole(const Dataset& data);

  const Dataset& data() const { return *data_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  double total_weight() const { return total_weight_; }

  double cell(const Row& row, std::size_t attribute) const {
    return data_->instances[row.index].cells[attribute];
  }
  int label(const Row& row) const { return data_->label_of(data_->instances[row.index]); }

 private:
  const Dataset* data_;
  std::vector<Row> rows_;
  double total_weight_ = 0.0;
};

// ---------------------------------------------------------------------------
// CSV input / output

struct CsvOptions {
  bool header = true;
  std::string missing_token = "?";
};

// Designates a column either by header name or by zero-based position.
class ColumnRef {
 public:
  static ColumnRef by_name(std::string name);
  static ColumnRef by_index(std::size_t index);
  static ColumnRef last();
  // An all-digit string is read as an index, anything else as a name.
  static ColumnRef parse(const std::string& text);

  std::size_t resolve(const std::vector<std::string>& column_names) const;

 private:
  ColumnRef() = default;
  enum class Mode { kName, kIndex, kLast } mode_ = Mode::kLast;
  std::string name_;
  std::size_t index_ = 0;
};

struct CsvLoadStats {
  std::size_t rows_loaded = 0;
  std::size_t rows_rejected_missing_class = 0;
};

// Loads a CSV file, inferring column types: a column where every non-missing
// token parses as a real becomes numeric, anything else nominal. The class
// column is always nominal, its values ordered by first appearance. Rows with
// a missing class value are rejected (counted in `stats`), all weights are 1.
Dataset load_csv(const std::string& path, const ColumnRef& class_column = ColumnRef::last(),
                 const CsvOptions& options = {}, CsvLoadStats* stats = nullptr);

// Parses rows against a known schema, for scoring fresh data with a stored
// model. With a header, columns are matched by name and the class column may
// be absent; without one, rows must carry either every column or every column
// but the class. Schema violations name the offending column and line.
std::vector<Instance> load_instances_with_schema(const std::string& path,
                                                 const std::vector<AttributeSpec>& schema,
                                                 std::size_t class_index,
                                                 const CsvOptions& options = {});

// Writes a dataset as CSV with a header row. Numeric cells use the shortest
// representation that parses back to the identical double, so save + load
// round-trips exactly (weights are not stored; they reload as 1).
void save_csv(const Dataset& dataset, const std::string& path,
              const std::string& missing_token = "?");

// ---------------------------------------------------------------------------
// Folds

struct FoldAssignment {
  int num_folds = 0;
  std::vector<int> fold_of;  // one entry per instance

  std::vector<std::size_t> fold_sizes() const;
};

// Deterministic stratified k-fold split: instances are grouped by class, each
// group is shuffled with the seed, and the groups are dealt round-robin onto
// a single rotating fold cursor. Fold sizes differ by at most one, and so do
// per-class counts across folds.
FoldAssignment stratified_k_folds(const Dataset& dataset, int k, std::uint64_t seed);

// Same dealing scheme for bare label rows; used wherever a learner needs an
// internal cross-validation split of a working view.
FoldAssignment stratified_folds_by_class(const std::vector<int>& class_of_row, int k,
                                         std::uint64_t seed);

// Copies a dataset into (train, test) halves for one fold.
std::pair<Dataset, Dataset> split_by_fold(const Dataset& dataset, const FoldAssignment& folds,
                                          int test_fold);

// ---------------------------------------------------------------------------
// Synthetic soil-fertility data

// Schema of the generated data: nine numeric soil measurements plus a
// six-level fertility label.
const std::vector<AttributeSpec>& soil_schema();

// Per-class Gaussian parameters of the generator. Centres of OC, P and K rise
// strictly with the fertility level; separation scales the step between
// neighbouring levels, so class overlap shrinks as it grows.
double synth_attribute_mean(std::size_t attribute, int level, double separation);
double synth_attribute_stddev(std::size_t attribute);

// Draws `n` instances (n >= 60) over soil_schema(). Class counts are balanced
// to within one instance and the output is byte-identical for identical
// (n, seed, separation).
Dataset synthesize_soil_dataset(std::size_t n, std::uint64_t seed, double separation);

}  // namespace soilcast
