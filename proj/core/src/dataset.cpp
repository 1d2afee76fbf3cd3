// SPDX-License-Identifier: Apache-2.0
#include "gradfis/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gradfis/error.hpp"
#include "gradfis/rng.hpp"

namespace gradfis {

namespace {

std::vector<std::string> split_fields(const std::string& line, char separator) {
  std::vector<std::string> fields;
  if (separator == ' ') {
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) fields.push_back(token);
    return fields;
  }
  std::string token;
  std::istringstream stream(line);
  while (std::getline(stream, token, separator)) fields.push_back(token);
  // A trailing separator means one more (empty) field.
  if (!line.empty() && line.back() == separator) fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, const std::string& column,
                    std::size_t row) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw DataError("row " + std::to_string(row) + ", column '" + column +
                    "': cannot parse numeric value '" + text + "'");
  }
  return value;
}

}  // namespace

MinMaxScaler::MinMaxScaler(std::vector<double> mins, std::vector<double> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {
  if (mins_.size() != maxs_.size()) {
    throw ShapeError("MinMaxScaler: min/max length mismatch");
  }
  for (std::size_t d = 0; d < mins_.size(); ++d) {
    if (mins_[d] > maxs_[d]) {
      throw DataError("MinMaxScaler: min greater than max in feature " +
                      std::to_string(d));
    }
  }
}

std::vector<double> MinMaxScaler::transform_row(std::span<const double> row) const {
  if (row.size() != mins_.size()) {
    throw ShapeError("MinMaxScaler: row width does not match the fitted width");
  }
  std::vector<double> out(row.size());
  for (std::size_t d = 0; d < row.size(); ++d) {
    const double range = maxs_[d] - mins_[d];
    out[d] = range == 0.0 ? 0.0 : (row[d] - mins_[d]) / range;
  }
  return out;
}

Matrix<double> MinMaxScaler::transform(const Matrix<double>& data) const {
  if (data.cols() != mins_.size()) {
    throw ShapeError("MinMaxScaler: width does not match the fitted width");
  }
  Matrix<double> out(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t d = 0; d < data.cols(); ++d) {
      const double range = maxs_[d] - mins_[d];
      out(r, d) = range == 0.0 ? 0.0 : (data(r, d) - mins_[d]) / range;
    }
  }
  return out;
}

MinMaxScaler minmax_fit(const Matrix<double>& train_features) {
  if (train_features.rows() == 0) {
    throw DataError("minmax_fit: empty fit set");
  }
  std::vector<double> mins(train_features.cols());
  std::vector<double> maxs(train_features.cols());
  for (std::size_t d = 0; d < train_features.cols(); ++d) {
    double lo = train_features(0, d);
    double hi = lo;
    for (std::size_t r = 1; r < train_features.rows(); ++r) {
      lo = std::min(lo, train_features(r, d));
      hi = std::max(hi, train_features(r, d));
    }
    mins[d] = lo;
    maxs[d] = hi;
  }
  return MinMaxScaler(std::move(mins), std::move(maxs));
}

Matrix<double> minmax_apply(const MinMaxScaler& scaler, const Matrix<double>& data) {
  return scaler.transform(data);
}

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k,
                          std::uint64_t seed) {
  const std::size_t n = labels.size();
  if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
  if (k > n) throw ConfigError("stratified_kfold: k exceeds the sample count");

  int max_label = 0;
  for (int y : labels) {
    if (y < 0) throw DataError("stratified_kfold: negative label");
    max_label = std::max(max_label, y);
  }
  const std::size_t num_classes = static_cast<std::size_t>(max_label) + 1;

  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  // Fisher-Yates within each class; the fold cursor carries over from one
  // class to the next so total fold sizes stay balanced.
  SplitMix64 rng(seed);
  std::vector<std::vector<std::size_t>> fold_members(k);
  std::size_t cursor = 0;
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.below(i));
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t idx : members) {
      fold_members[cursor % k].push_back(idx);
      ++cursor;
    }
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.validation_indices.resize(k);
  plan.train_indices.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    auto& val = fold_members[f];
    std::sort(val.begin(), val.end());
    plan.validation_indices[f] = val;
    auto& train = plan.train_indices[f];
    train.reserve(n - val.size());
    std::size_t vpos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (vpos < val.size() && val[vpos] == i) {
        ++vpos;
      } else {
        train.push_back(i);
      }
    }
  }
  return plan;
}

int heart_target_binarize(int raw) {
  if (raw < 0 || raw > 4) {
    throw DataError("heart target severity " + std::to_string(raw) +
                    " outside 0..4");
  }
  return raw == 0 ? 0 : 1;
}

Dataset load_csv(const DatasetSpec& spec, const std::filesystem::path& data_dir) {
  const std::filesystem::path path = data_dir / spec.filename;
  std::ifstream file(path);
  if (!file) {
    throw DataError("dataset file '" + path.string() +
                    "' not found; run `gradfis fetch --dataset " + spec.key + "`");
  }

  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line, spec.separator);
    if (fields.size() != spec.columns.size()) {
      throw DataError(spec.key + ": ragged row at line " +
                      std::to_string(line_number) + " (" +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(spec.columns.size()) + ")");
    }
    rows.push_back(std::move(fields));
  }

  if (spec.expected_rows != 0 && rows.size() != spec.expected_rows) {
    throw DataError(spec.key + ": row count " + std::to_string(rows.size()) +
                    " does not match the expected " +
                    std::to_string(spec.expected_rows) +
                    "; the file may be truncated or stale");
  }

  // Resolve column positions and roles.
  std::size_t target_index = spec.columns.size();
  std::vector<std::size_t> feature_columns;
  std::size_t raw_feature_count = 0;
  const std::set<std::string> drops(spec.drop_columns.begin(),
                                    spec.drop_columns.end());
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    const ColumnSpec& col = spec.columns[c];
    if (col.role == ColumnRole::Target) {
      if (col.name != spec.target_column) {
        throw ConfigError(spec.key + ": target column name mismatch");
      }
      target_index = c;
      continue;
    }
    if (col.role == ColumnRole::Identifier) continue;
    ++raw_feature_count;
    if (!drops.contains(col.name)) feature_columns.push_back(c);
  }
  if (target_index == spec.columns.size()) {
    throw ConfigError(spec.key + ": no target column declared");
  }
  if (spec.expected_features != 0 && raw_feature_count != spec.expected_features) {
    throw ConfigError(spec.key + ": spec declares " +
                      std::to_string(raw_feature_count) +
                      " raw features, expected " +
                      std::to_string(spec.expected_features));
  }

  // Build level maps for categorical feature columns. Declared levels win;
  // otherwise the distinct values sort lexicographically.
  std::vector<std::map<std::string, int>> level_maps(spec.columns.size());
  for (std::size_t c : feature_columns) {
    const ColumnSpec& col = spec.columns[c];
    if (col.kind != ColumnKind::Categorical) continue;
    if (!col.levels.empty()) {
      for (std::size_t i = 0; i < col.levels.size(); ++i) {
        level_maps[c][col.levels[i]] = static_cast<int>(i);
      }
    } else {
      std::set<std::string> distinct;
      for (const auto& row : rows) distinct.insert(row[c]);
      int code = 0;
      for (const std::string& value : distinct) level_maps[c][value] = code++;
    }
  }

  std::map<std::string, int> target_map;
  for (std::size_t i = 0; i < spec.target_levels.size(); ++i) {
    target_map[spec.target_levels[i]] = static_cast<int>(i);
  }

  Dataset dataset;
  dataset.name = spec.display_name;
  dataset.class_names = spec.class_names;
  for (std::size_t c : feature_columns) dataset.feature_names.push_back(spec.columns[c].name);
  dataset.features = Matrix<double>(rows.size(), feature_columns.size());
  dataset.labels.resize(rows.size());

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    for (std::size_t j = 0; j < feature_columns.size(); ++j) {
      const std::size_t c = feature_columns[j];
      const ColumnSpec& col = spec.columns[c];
      const std::string& text = row[c];
      if (text == "?" || text.empty()) {
        throw DataError(spec.key + ": missing value at row " + std::to_string(r) +
                        ", column '" + col.name + "'");
      }
      if (col.kind == ColumnKind::Categorical) {
        const auto it = level_maps[c].find(text);
        if (it == level_maps[c].end()) {
          throw DataError(spec.key + ": unknown category '" + text +
                          "' in column '" + col.name + "'");
        }
        dataset.features(r, j) = static_cast<double>(it->second);
      } else {
        dataset.features(r, j) = parse_number(text, col.name, r);
      }
    }

    const std::string& target_text = row[target_index];
    int label = 0;
    if (!spec.target_levels.empty()) {
      const auto it = target_map.find(target_text);
      if (it == target_map.end()) {
        throw DataError(spec.key + ": unknown target value '" + target_text + "'");
      }
      label = it->second;
    } else {
      const double raw = parse_number(target_text, spec.target_column, r);
      if (raw != std::floor(raw)) {
        throw DataError(spec.key + ": non-integer target value '" + target_text + "'");
      }
      label = static_cast<int>(raw);
    }
    if (spec.target_transform == TargetTransform::HeartPresence) {
      label = heart_target_binarize(label);
    }
    if (label < 0 || static_cast<std::size_t>(label) >= dataset.class_names.size()) {
      throw DataError(spec.key + ": target value '" + target_text +
                      "' maps outside the declared classes");
    }
    dataset.labels[r] = label;
  }

  if (spec.expected_classes != 0 &&
      dataset.class_names.size() != spec.expected_classes) {
    throw ConfigError(spec.key + ": declared class count mismatch");
  }
  return dataset;
}

void write_csv(const Dataset& dataset, const Matrix<double>& features,
               const std::filesystem::path& path) {
  if (features.rows() != dataset.num_rows()) {
    throw ShapeError("write_csv: feature matrix row count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path.string());
  out.precision(17);
  for (std::size_t j = 0; j < dataset.feature_names.size(); ++j) {
    out << dataset.feature_names[j] << ',';
  }
  out << "label\n";
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      out << features(r, j) << ',';
    }
    out << dataset.labels[r] << '\n';
  }
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("GRADFIS_DATA_DIR"); env != nullptr && *env) {
    return env;
  }
  return "data";
}

}  // namespace gradfis
