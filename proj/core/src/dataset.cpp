#include "soilcast/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "soilcast/error.hpp"
#include "soilcast/rng.hpp"

namespace soilcast {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

// Splits one CSV record. Double-quoted fields may contain commas; a doubled
// quote inside a quoted field is an escaped quote. Newlines inside fields are
// not supported.
std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  bool field_was_quoted = false;
  auto push = [&] {
    fields.push_back(field_was_quoted ? field : trimmed(field));
    field.clear();
    field_was_quoted = false;
  };
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trimmed(field).empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
      field.clear();
    } else if (c == ',') {
      push();
    } else {
      field += c;
    }
    ++i;
  }
  if (quoted) {
    throw ParseError("unterminated quoted field at line " + std::to_string(line_no));
  }
  push();
  return fields;
}

std::optional<double> parse_real(const std::string& token) {
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::vector<std::string>> read_records(const std::string& path,
                                                   std::vector<std::size_t>* line_numbers) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<std::string>> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    records.push_back(split_csv_record(line, line_no));
    if (line_numbers) line_numbers->push_back(line_no);
  }
  return records;
}

void check_width(const std::vector<std::string>& record, std::size_t width, std::size_t line_no) {
  if (record.size() != width) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                     " fields, found " + std::to_string(record.size()));
  }
}

std::string format_cell(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n") != std::string::npos;
}

std::string quoted_field(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

bool cells_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool ma = is_missing(a[i]), mb = is_missing(b[i]);
    if (ma != mb) return false;
    if (!ma && a[i] != b[i]) return false;
  }
  return true;
}

int Dataset::label_of(const Instance& inst) const {
  const double cell = inst.cells[class_index];
  if (is_missing(cell)) throw InvalidArgumentError("instance has a missing class value");
  return static_cast<int>(cell);
}

bool datasets_equal(const Dataset& a, const Dataset& b) {
  if (a.schema != b.schema || a.class_index != b.class_index ||
      a.instances.size() != b.instances.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    if (a.instances[i].weight != b.instances[i].weight) return false;
    if (!cells_equal(a.instances[i].cells, b.instances[i].cells)) return false;
  }
  return true;
}

WeightedView::WeightedView(const Dataset& data, std::vector<Row> rows) : data_(&data) {
  rows_.reserve(rows.size());
  for (const Row& row : rows) {
    if (row.weight > 0.0) {
      rows_.push_back(row);
      total_weight_ += row.weight;
    }
  }
}

WeightedView WeightedView::whole(const Dataset& data) {
  std::vector<Row> rows;
  rows.reserve(data.instances.size());
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    rows.push_back({static_cast<std::uint32_t>(i), data.instances[i].weight});
  }
  return WeightedView(data, std::move(rows));
}

// ---------------------------------------------------------------------------
// ColumnRef

ColumnRef ColumnRef::by_name(std::string name) {
  ColumnRef ref;
  ref.mode_ = Mode::kName;
  ref.name_ = std::move(name);
  return ref;
}

ColumnRef ColumnRef::by_index(std::size_t index) {
  ColumnRef ref;
  ref.mode_ = Mode::kIndex;
  ref.index_ = index;
  return ref;
}

ColumnRef ColumnRef::last() { return ColumnRef(); }

ColumnRef ColumnRef::parse(const std::string& text) {
  if (text == "last") return last();
  if (!text.empty() && std::all_of(text.begin(), text.end(),
                                   [](unsigned char c) { return c >= '0' && c <= '9'; })) {
    return by_index(std::stoull(text));
  }
  return by_name(text);
}

std::size_t ColumnRef::resolve(const std::vector<std::string>& column_names) const {
  switch (mode_) {
    case Mode::kLast:
      if (column_names.empty()) throw InvalidArgumentError("empty table has no last column");
      return column_names.size() - 1;
    case Mode::kIndex:
      if (index_ >= column_names.size()) {
        throw InvalidArgumentError("class column index " + std::to_string(index_) +
                                   " out of range for " + std::to_string(column_names.size()) +
                                   " columns");
      }
      return index_;
    case Mode::kName: {
      auto it = std::find(column_names.begin(), column_names.end(), name_);
      if (it == column_names.end()) {
        throw InvalidArgumentError("class column '" + name_ + "' not found in header");
      }
      return static_cast<std::size_t>(it - column_names.begin());
    }
  }
  throw InvalidStateError("unreachable");
}

// ---------------------------------------------------------------------------
// CSV loading

Dataset load_csv(const std::string& path, const ColumnRef& class_column, const CsvOptions& options,
                 CsvLoadStats* stats) {
  std::vector<std::size_t> line_numbers;
  auto records = read_records(path, &line_numbers);
  if (records.empty()) throw ParseError("'" + path + "' contains no records");

  std::vector<std::string> column_names;
  std::size_t first_data = 0;
  if (options.header) {
    column_names = records[0];
    first_data = 1;
    if (records.size() == 1) throw ParseError("'" + path + "' has a header but no data rows");
  } else {
    for (std::size_t c = 0; c < records[0].size(); ++c) {
      column_names.push_back("col" + std::to_string(c));
    }
  }
  const std::size_t width = column_names.size();
  for (std::size_t r = first_data; r < records.size(); ++r) {
    check_width(records[r], width, line_numbers[r]);
  }

  const std::size_t class_idx = class_column.resolve(column_names);

  auto is_missing_token = [&](const std::string& token) {
    return token.empty() || token == options.missing_token;
  };

  // A non-class column is numeric iff every non-missing token parses as a real.
  std::vector<bool> numeric(width, true);
  numeric[class_idx] = false;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == class_idx) continue;
    for (std::size_t r = first_data; r < records.size() && numeric[c]; ++r) {
      const std::string& token = records[r][c];
      if (!is_missing_token(token) && !parse_real(token)) numeric[c] = false;
    }
  }

  Dataset dataset;
  dataset.class_index = class_idx;
  dataset.schema.resize(width);
  std::vector<std::unordered_map<std::string, int>> value_codes(width);
  for (std::size_t c = 0; c < width; ++c) {
    dataset.schema[c].name = column_names[c];
    dataset.schema[c].kind = numeric[c] ? AttributeKind::kNumeric : AttributeKind::kNominal;
  }

  auto nominal_code = [&](std::size_t c, const std::string& token) {
    auto [it, inserted] = value_codes[c].emplace(token, static_cast<int>(value_codes[c].size()));
    if (inserted) dataset.schema[c].nominal_values.push_back(token);
    return it->second;
  };

  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& record = records[r];
    if (is_missing_token(record[class_idx])) {
      if (stats) ++stats->rows_rejected_missing_class;
      continue;
    }
    Instance inst;
    inst.cells.resize(width);
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& token = record[c];
      if (is_missing_token(token)) {
        inst.cells[c] = missing_cell();
      } else if (numeric[c]) {
        inst.cells[c] = *parse_real(token);
      } else {
        inst.cells[c] = static_cast<double>(nominal_code(c, token));
      }
    }
    dataset.instances.push_back(std::move(inst));
  }
  if (stats) stats->rows_loaded = dataset.instances.size();
  if (dataset.instances.empty()) {
    throw ParseError("'" + path + "' contains no usable rows (every class value missing?)");
  }
  return dataset;
}

std::vector<Instance> load_instances_with_schema(const std::string& path,
                                                 const std::vector<AttributeSpec>& schema,
                                                 std::size_t class_index,
                                                 const CsvOptions& options) {
  std::vector<std::size_t> line_numbers;
  auto records = read_records(path, &line_numbers);
  if (records.empty()) throw ParseError("'" + path + "' contains no records");

  const std::size_t width = schema.size();
  // column_of[c] = schema attribute fed by record field c.
  std::vector<std::size_t> column_of;
  std::size_t first_data = 0;

  if (options.header) {
    first_data = 1;
    for (const std::string& name : records[0]) {
      auto it = std::find_if(schema.begin(), schema.end(),
                             [&](const AttributeSpec& a) { return a.name == name; });
      if (it == schema.end()) {
        throw ParseError("column '" + name + "' does not exist in the model schema");
      }
      column_of.push_back(static_cast<std::size_t>(it - schema.begin()));
    }
    if (records.size() == 1) throw ParseError("'" + path + "' has a header but no data rows");
  } else {
    const std::size_t found = records[0].size();
    if (found == width) {
      for (std::size_t c = 0; c < width; ++c) column_of.push_back(c);
    } else if (found + 1 == width) {
      // Class column omitted; remaining columns keep their schema order.
      for (std::size_t c = 0; c < width; ++c) {
        if (c != class_index) column_of.push_back(c);
      }
    } else {
      throw ParseError("line " + std::to_string(line_numbers[0]) + ": expected " +
                       std::to_string(width) + " or " + std::to_string(width - 1) +
                       " fields, found " + std::to_string(found));
    }
  }

  auto is_missing_token = [&](const std::string& token) {
    return token.empty() || token == options.missing_token;
  };

  std::vector<Instance> out;
  for (std::size_t r = first_data; r < records.size(); ++r) {
    check_width(records[r], column_of.size(), line_numbers[r]);
    Instance inst;
    inst.cells.assign(width, missing_cell());
    for (std::size_t f = 0; f < column_of.size(); ++f) {
      const std::size_t c = column_of[f];
      const AttributeSpec& attr = schema[c];
      const std::string& token = records[r][f];
      if (is_missing_token(token)) continue;
      if (attr.kind == AttributeKind::kNumeric) {
        auto value = parse_real(token);
        if (!value) {
          throw ParseError("column '" + attr.name + "' (line " + std::to_string(line_numbers[r]) +
                           "): '" + token + "' is not numeric");
        }
        inst.cells[c] = *value;
      } else {
        auto it = std::find(attr.nominal_values.begin(), attr.nominal_values.end(), token);
        if (it == attr.nominal_values.end()) {
          throw ParseError("column '" + attr.name + "' (line " + std::to_string(line_numbers[r]) +
                           "): unknown nominal value '" + token + "'");
        }
        inst.cells[c] = static_cast<double>(it - attr.nominal_values.begin());
      }
    }
    out.push_back(std::move(inst));
  }
  return out;
}

void save_csv(const Dataset& dataset, const std::string& path, const std::string& missing_token) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < dataset.schema.size(); ++c) {
    if (c) out << ',';
    out << quoted_field(dataset.schema[c].name);
  }
  out << '\n';
  for (const Instance& inst : dataset.instances) {
    for (std::size_t c = 0; c < inst.cells.size(); ++c) {
      if (c) out << ',';
      const double cell = inst.cells[c];
      if (is_missing(cell)) {
        out << missing_token;
      } else if (dataset.schema[c].kind == AttributeKind::kNumeric) {
        out << format_cell(cell);
      } else {
        out << quoted_field(dataset.schema[c].nominal_values[static_cast<std::size_t>(cell)]);
      }
    }
    out << '\n';
  }
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Folds

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(num_folds), 0);
  for (int f : fold_of) sizes[static_cast<std::size_t>(f)]++;
  return sizes;
}

FoldAssignment stratified_folds_by_class(const std::vector<int>& class_of_row, int k,
                                         std::uint64_t seed) {
  if (k < 2) throw InvalidArgumentError("fold count must be at least 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > class_of_row.size()) {
    throw InvalidArgumentError("cannot split " + std::to_string(class_of_row.size()) +
                               " rows into " + std::to_string(k) + " folds");
  }
  int num_classes = 0;
  for (int c : class_of_row) num_classes = std::max(num_classes, c + 1);

  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < class_of_row.size(); ++i) {
    by_class[static_cast<std::size_t>(class_of_row[i])].push_back(i);
  }

  Rng rng(seed);
  FoldAssignment assignment;
  assignment.num_folds = k;
  assignment.fold_of.assign(class_of_row.size(), 0);
  // One fold cursor shared across classes keeps both total fold sizes and
  // per-class fold counts within one of each other.
  int cursor = 0;
  for (auto& group : by_class) {
    rng.shuffle(group);
    for (std::size_t idx : group) {
      assignment.fold_of[idx] = cursor;
      cursor = (cursor + 1) % k;
    }
  }
  return assignment;
}

FoldAssignment stratified_k_folds(const Dataset& dataset, int k, std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(dataset.instances.size());
  for (const Instance& inst : dataset.instances) labels.push_back(dataset.label_of(inst));
  return stratified_folds_by_class(labels, k, seed);
}

std::pair<Dataset, Dataset> split_by_fold(const Dataset& dataset, const FoldAssignment& folds,
                                          int test_fold) {
  Dataset train, test;
  train.schema = test.schema = dataset.schema;
  train.class_index = test.class_index = dataset.class_index;
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    (folds.fold_of[i] == test_fold ? test : train).instances.push_back(dataset.instances[i]);
  }
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Synthetic soil-fertility generator

namespace {

// Reference values for the generator. The ranges are plausible soil chemistry
// (pH around 4-9, EC in dS/m, OC in percent, nutrients in ppm) but they are
// illustrative constants, not field measurements. `step` shifts the class
// mean per fertility level, scaled by the separation parameter; attributes
// with step 0 carry no class signal.
struct SoilAttributeGen {
  const char* name;
  double base_mean;
  double step;
  double stddev;
};

constexpr SoilAttributeGen kSoilGen[] = {
    {"Ph", 6.6, 0.0, 0.70},    //
    {"EC", 0.9, 0.0, 0.45},    // truncated at 0: conductivity cannot go negative
    {"OC", 0.30, 0.15, 0.15},  //
    {"P", 5.0, 4.0, 4.0},      //
    {"K", 120.0, 60.0, 60.0},  //
    {"Fe", 3.0, 0.5, 1.5},     //
    {"Zn", 0.40, 0.08, 0.30},  //
    {"Mn", 4.0, 0.6, 2.5},     //
    {"Cu", 1.2, 0.15, 0.80},   //
};

constexpr std::size_t kSoilAttributeCount = sizeof(kSoilGen) / sizeof(kSoilGen[0]);

const char* const kFertilityLevels[] = {"very low",        "low",  "moderate",
                                        "moderately high", "high", "very high"};
constexpr int kNumLevels = 6;

}  // namespace

const std::vector<AttributeSpec>& soil_schema() {
  static const std::vector<AttributeSpec> schema = [] {
    std::vector<AttributeSpec> s;
    for (const auto& gen : kSoilGen) {
      s.push_back({gen.name, AttributeKind::kNumeric, {}});
    }
    AttributeSpec label{"label", AttributeKind::kNominal, {}};
    for (const char* level : kFertilityLevels) label.nominal_values.emplace_back(level);
    s.push_back(std::move(label));
    return s;
  }();
  return schema;
}

double synth_attribute_mean(std::size_t attribute, int level, double separation) {
  if (attribute >= kSoilAttributeCount) {
    throw InvalidArgumentError("no such soil attribute: " + std::to_string(attribute));
  }
  const auto& gen = kSoilGen[attribute];
  return gen.base_mean + gen.step * separation * static_cast<double>(level);
}

double synth_attribute_stddev(std::size_t attribute) {
  if (attribute >= kSoilAttributeCount) {
    throw InvalidArgumentError("no such soil attribute: " + std::to_string(attribute));
  }
  return kSoilGen[attribute].stddev;
}

Dataset synthesize_soil_dataset(std::size_t n, std::uint64_t seed, double separation) {
  if (n < 60) {
    throw InvalidArgumentError("synthetic dataset needs at least 60 instances, got " +
                               std::to_string(n));
  }
  if (!(separation > 0.0)) {
    throw InvalidArgumentError("class separation must be positive");
  }
  Dataset dataset;
  dataset.schema = soil_schema();
  dataset.class_index = kSoilAttributeCount;
  dataset.instances.reserve(n);

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int level = static_cast<int>(i % kNumLevels);
    Instance inst;
    inst.cells.reserve(kSoilAttributeCount + 1);
    for (std::size_t a = 0; a < kSoilAttributeCount; ++a) {
      double value = synth_attribute_mean(a, level, separation) +
                     kSoilGen[a].stddev * rng.gaussian();
      if (a == 1 && value < 0.0) value = 0.0;
      inst.cells.push_back(value);
    }
    inst.cells.push_back(static_cast<double>(level));
    dataset.instances.push_back(std::move(inst));
  }
  return dataset;
}

}  // namespace soilcast
