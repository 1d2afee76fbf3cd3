// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradfis/matrix.hpp"

namespace gradfis {

enum class ColumnRole { Feature, Identifier, Target };
enum class ColumnKind { Numeric, Categorical };

/// One column of a raw data file. Categorical columns with declared levels
/// encode by the declared order (ordinal); without levels they encode by
/// lexicographic order of the distinct values seen.
struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::Feature;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<std::string> levels;
};

enum class TargetTransform {
  None,           // class index = position in target levels (or parsed int)
  HeartPresence,  // severity 0..4 collapsed to absent (0) / present (1..4)
};

/// Declarative description of one tabular dataset: file layout, encodings,
/// preprocessing drops, target mapping, expected shape, and the classifier
/// configuration used when benchmarking it.
struct DatasetSpec {
  std::string key;           // short id used by the CLI
  std::string display_name;
  std::string filename;      // relative to the data directory
  std::string url;           // canonical source for fetch
  char separator = ',';      // ' ' means any whitespace run
  std::vector<ColumnSpec> columns;  // in file order, target included
  std::string target_column;
  std::vector<std::string> target_levels;  // empty = numeric target parse
  std::vector<std::string> class_names;
  TargetTransform target_transform = TargetTransform::None;
  std::vector<std::string> drop_columns;  // feature columns removed up front
  std::size_t expected_rows = 0;
  std::size_t expected_features = 0;  // raw feature columns, before drops
  std::size_t expected_classes = 0;

  // Benchmark configuration for this dataset.
  std::size_t mfs_per_input = 0;
  std::size_t num_rules = 0;
};

/// A loaded dataset: encoded numeric features (unnormalized) and class
/// indices.
struct Dataset {
  std::string name;
  Matrix<double> features;  // N x D after encoding and drops
  std::vector<int> labels;  // length N, values in [0, num_classes)
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  std::size_t num_rows() const { return features.rows(); }
  std::size_t num_features() const { return features.cols(); }
  std::size_t num_classes() const { return class_names.size(); }
};

/// Per-feature min/max learned from a training partition.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> mins, std::vector<double> maxs);

  std::span<const double> mins() const { return mins_; }
  std::span<const double> maxs() const { return maxs_; }

  /// (x - min) / (max - min); constant features map to 0. Values outside the
  /// fitted range are not clamped.
  Matrix<double> transform(const Matrix<double>& data) const;
  std::vector<double> transform_row(std::span<const double> row) const;

 private:
  std::vector<double> mins_;
  std::vector<double> maxs_;
};

MinMaxScaler minmax_fit(const Matrix<double>& train_features);
Matrix<double> minmax_apply(const MinMaxScaler& scaler, const Matrix<double>& data);

/// Stratified k-fold split plan. Validation sets partition [0, N); per class
/// the validation counts across folds differ by at most 1.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> train_indices;       // per fold, sorted
  std::vector<std::vector<std::size_t>> validation_indices;  // per fold, sorted
};

/// Seeded shuffle within each class, then round-robin dealing to folds with
/// a cursor that runs continuously across classes.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k,
                          std::uint64_t seed);

/// Parses spec.filename inside data_dir, applies encodings, drops, and the
/// target mapping, and verifies the expected shape.
Dataset load_csv(const DatasetSpec& spec, const std::filesystem::path& data_dir);

/// Severity 0 -> absent (0); 1..4 -> present (1). Anything else is an error.
int heart_target_binarize(int raw);

/// The five built-in dataset specs, keyed german, wdbc, car, heart, wine.
std::span<const DatasetSpec> builtin_specs();
const DatasetSpec& spec_by_key(std::string_view key);

/// Writes features (typically normalized) plus the label column as CSV with
/// a header row, for external inspection.
void write_csv(const Dataset& dataset, const Matrix<double>& features,
               const std::filesystem::path& path);

/// GRADFIS_DATA_DIR if set, else "data".
std::filesystem::path default_data_dir();

}  // namespace gradfis
