// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradfis/dataset.hpp"

namespace gradfis {

/// Hyperparameters for one benchmark run of the fuzzy classifier. The 0.01
/// learning rate is the calibrated pipeline default; the raw training API
/// keeps its own.
struct GfConfig {
  std::size_t mfs_per_input = 0;
  std::size_t num_rules = 0;
  std::size_t max_epochs = 250;
  double lr = 0.01;
  std::uint64_t seed = 42;
};

struct FoldResult {
  std::size_t fold = 0;
  double accuracy = 0.0;  // fraction in [0, 1]
  double train_seconds = 0.0;
  std::size_t epochs = 0;
  double final_loss = 0.0;
};

struct AccuracySummary {
  double min = 0.0;  // percentages
  double mean = 0.0;
  double max = 0.0;
};

struct ReferenceEntry {
  std::string model;
  AccuracySummary accuracy;
};

/// Previously reported validation accuracies for six models on the five
/// datasets, stored to three decimals, plus the mean-accuracy threshold each
/// measured run is held to.
class ReferenceTable {
 public:
  static const ReferenceTable& instance();

  std::span<const ReferenceEntry> rows(std::string_view dataset_key) const;
  const ReferenceEntry& gf_row(std::string_view dataset_key) const;
  double mean_accuracy_threshold(std::string_view dataset_key) const;
  bool has_dataset(std::string_view dataset_key) const;

 private:
  ReferenceTable();
  struct DatasetRows {
    std::string key;
    std::vector<ReferenceEntry> entries;
    double threshold;
  };
  std::vector<DatasetRows> datasets_;
};

struct DeltaSummary {
  std::vector<ReferenceEntry> deltas;  // measured minus reference, per model
  double threshold = 0.0;              // required mean accuracy, percent
  bool pass = false;
};

struct BenchmarkReport {
  std::string dataset_key;
  std::string dataset_name;
  GfConfig config;
  std::vector<FoldResult> folds;
  AccuracySummary summary;  // percentages over fold accuracies
  double mean_train_seconds = 0.0;
  std::vector<ReferenceEntry> reference;
  DeltaSummary comparison;
};

/// Trains and scores one fold: scaler fitted on the fold's training rows, a
/// fresh classifier seeded from (config.seed, fold), accuracy on the held-out
/// rows. Timing covers the train call only.
FoldResult run_fold(const Dataset& dataset, const FoldPlan& plan, std::size_t fold,
                    const GfConfig& config);

/// The full 5-fold protocol for one dataset. threads = 0 picks the hardware
/// concurrency; folds are independent, so the report does not depend on the
/// thread count.
BenchmarkReport run_benchmark(const DatasetSpec& spec,
                              const std::filesystem::path& data_dir,
                              const GfConfig& config, std::size_t threads = 0);

/// Signed differences (measured minus reference, percentage points) against
/// every reference row, and the pass/fail verdict for the mean-accuracy
/// threshold. Throws ConfigError for an unknown dataset.
DeltaSummary compare_reference(std::string_view dataset_key,
                               const AccuracySummary& measured);

/// Deterministic JSON document for one report. Timing fields (train_seconds,
/// mean_train_seconds) are the only parts expected to differ between
/// identically seeded runs.
std::string report_to_json(const BenchmarkReport& report);

/// Markdown mirroring the reference-table layout: per dataset, the six
/// reference rows plus the measured row, then timing and verdict lines.
std::string reports_to_markdown(std::span<const BenchmarkReport> reports);

/// Writes <key>_report.json per report plus one combined benchmark.md.
void write_reports(std::span<const BenchmarkReport> reports,
                   const std::filesystem::path& report_dir);

}  // namespace gradfis
