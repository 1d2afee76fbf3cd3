// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "gradfis/model.hpp"

namespace gradfis {

/// Human-readable names for membership functions, assigned by ascending
/// center. labels[d][m] names MF m of input d; the names stay truthful after
/// training because they are derived from the trained centers, not the
/// initial grid.
struct LinguisticVocabulary {
  std::vector<std::vector<std::string>> labels;

  static LinguisticVocabulary from_model(const FuzzyClassifier& model);
};

/// One line per rule, ordered by rule index:
///   IF <feature> is <label> AND ... THEN logits(<class>=<value>, ...)
std::string export_rules(const FuzzyClassifier& model,
                         const LinguisticVocabulary& vocabulary,
                         std::span<const std::string> feature_names,
                         std::span<const std::string> class_names);

struct TraceEntry {
  std::size_t rule = 0;
  double normalized_firing = 0.0;
  std::string text;  // the rendered rule line
  std::vector<double> consequents;
};

struct PredictionTrace {
  std::vector<double> input;
  std::vector<TraceEntry> top_rules;  // sorted by firing, descending
  std::vector<double> probabilities;
  int predicted_class = 0;
};

/// Runs forward and keeps the k most strongly firing rules (k clamped to R).
PredictionTrace trace(const FuzzyClassifier& model, std::span<const double> x,
                      std::size_t k);
PredictionTrace trace(const FuzzyClassifier& model, std::span<const double> x,
                      std::size_t k, std::span<const std::string> feature_names,
                      std::span<const std::string> class_names);

std::string trace_to_text(const PredictionTrace& trace,
                          std::span<const std::string> class_names);
std::string trace_to_json(const PredictionTrace& trace,
                          std::span<const std::string> class_names);

/// "x0".."x{D-1}" fallbacks when a dataset does not supply names.
std::vector<std::string> default_feature_names(std::size_t count);
std::vector<std::string> default_class_names(std::size_t count);

}  // namespace gradfis
