// SPDX-License-Identifier: Apache-2.0
#include "gradfis/explain.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "gradfis/error.hpp"

namespace gradfis {

namespace {

std::vector<std::string> base_labels(std::size_t m_count) {
  switch (m_count) {
    case 1:
      return {"medium"};
    case 2:
      return {"low", "high"};
    case 3:
      return {"low", "medium", "high"};
    case 5:
      return {"very-low", "low", "medium", "high", "very-high"};
    default: {
      std::vector<std::string> labels;
      labels.reserve(m_count);
      for (std::size_t m = 0; m < m_count; ++m) {
        labels.push_back("level_" + std::to_string(m));
      }
      return labels;
    }
  }
}

std::string format_value(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

std::string rule_line(const FuzzyClassifier& model,
                      const LinguisticVocabulary& vocabulary,
                      std::span<const std::string> feature_names,
                      std::span<const std::string> class_names, std::size_t rule) {
  std::string line = "IF ";
  for (std::size_t d = 0; d < model.num_inputs; ++d) {
    if (d > 0) line += " AND ";
    const int a = model.rules.antecedents(rule, d);
    line += feature_names[d];
    line += " is ";
    line += vocabulary.labels[d][static_cast<std::size_t>(a)];
  }
  line += " THEN logits(";
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    if (c > 0) line += ", ";
    line += class_names[c];
    line += "=";
    line += format_value(model.rules.consequents(rule, c));
  }
  line += ")";
  return line;
}

void check_vocabulary(const FuzzyClassifier& model,
                      const LinguisticVocabulary& vocabulary) {
  if (vocabulary.labels.size() != model.num_inputs) {
    throw ShapeError("vocabulary input count does not match the model");
  }
  for (const auto& labels : vocabulary.labels) {
    if (labels.size() != model.mfs_per_input()) {
      throw ShapeError("vocabulary label count does not match mfs_per_input");
    }
  }
}

}  // namespace

LinguisticVocabulary LinguisticVocabulary::from_model(const FuzzyClassifier& model) {
  const std::size_t m_count = model.mfs_per_input();
  const std::vector<std::string> base = base_labels(m_count);

  LinguisticVocabulary vocabulary;
  vocabulary.labels.resize(model.num_inputs);
  std::vector<std::size_t> order(m_count);
  for (std::size_t d = 0; d < model.num_inputs; ++d) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return model.bank.centers(d, a) < model.bank.centers(d, b);
    });
    auto& labels = vocabulary.labels[d];
    labels.resize(m_count);
    for (std::size_t rank = 0; rank < m_count; ++rank) {
      labels[order[rank]] = base[rank];
    }
  }
  return vocabulary;
}

std::string export_rules(const FuzzyClassifier& model,
                         const LinguisticVocabulary& vocabulary,
                         std::span<const std::string> feature_names,
                         std::span<const std::string> class_names) {
  check_vocabulary(model, vocabulary);
  if (feature_names.size() != model.num_inputs) {
    throw ShapeError("feature name count does not match the model");
  }
  if (class_names.size() != model.num_classes) {
    throw ShapeError("class name count does not match the model");
  }
  std::string out;
  for (std::size_t r = 0; r < model.num_rules(); ++r) {
    out += rule_line(model, vocabulary, feature_names, class_names, r);
    out += '\n';
  }
  return out;
}

PredictionTrace trace(const FuzzyClassifier& model, std::span<const double> x,
                      std::size_t k) {
  const std::vector<std::string> feature_names =
      default_feature_names(model.num_inputs);
  const std::vector<std::string> class_names = default_class_names(model.num_classes);
  return trace(model, x, k, feature_names, class_names);
}

PredictionTrace trace(const FuzzyClassifier& model, std::span<const double> x,
                      std::size_t k, std::span<const std::string> feature_names,
                      std::span<const std::string> class_names) {
  if (k < 1) throw ConfigError("trace: k must be >= 1");
  if (feature_names.size() != model.num_inputs ||
      class_names.size() != model.num_classes) {
    throw ShapeError("trace: name counts do not match the model");
  }
  const ForwardResult result = forward(model, x);

  const LinguisticVocabulary vocabulary = LinguisticVocabulary::from_model(model);

  std::vector<std::size_t> order(model.num_rules());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.firings[a] > result.firings[b];
  });

  PredictionTrace out;
  out.input.assign(x.begin(), x.end());
  out.probabilities = result.probs;
  std::size_t best = 0;
  for (std::size_t c = 1; c < result.probs.size(); ++c) {
    if (result.probs[c] > result.probs[best]) best = c;
  }
  out.predicted_class = static_cast<int>(best);

  const std::size_t keep = std::min(k, model.num_rules());
  out.top_rules.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t r = order[i];
    TraceEntry entry;
    entry.rule = r;
    entry.normalized_firing = result.firings[r];
    entry.text = rule_line(model, vocabulary, feature_names, class_names, r);
    const auto q = model.rules.consequents.row(r);
    entry.consequents.assign(q.begin(), q.end());
    out.top_rules.push_back(std::move(entry));
  }
  return out;
}

std::string trace_to_text(const PredictionTrace& trace,
                          std::span<const std::string> class_names) {
  std::string out = "input:";
  for (double v : trace.input) {
    out += ' ';
    out += format_value(v);
  }
  out += '\n';
  char buffer[128];
  for (const TraceEntry& entry : trace.top_rules) {
    std::snprintf(buffer, sizeof(buffer), "rule %zu  firing %.6f  ", entry.rule,
                  entry.normalized_firing);
    out += buffer;
    out += entry.text;
    out += '\n';
  }
  out += "probabilities:";
  for (std::size_t c = 0; c < trace.probabilities.size(); ++c) {
    std::snprintf(buffer, sizeof(buffer), " %s=%.6f",
                  c < class_names.size() ? class_names[c].c_str() : "?",
                  trace.probabilities[c]);
    out += buffer;
  }
  out += '\n';
  out += "predicted: ";
  out += class_names.size() > static_cast<std::size_t>(trace.predicted_class)
             ? class_names[static_cast<std::size_t>(trace.predicted_class)]
             : std::to_string(trace.predicted_class);
  out += '\n';
  return out;
}

std::string trace_to_json(const PredictionTrace& trace,
                          std::span<const std::string> class_names) {
  nlohmann::json doc;
  doc["input"] = trace.input;
  doc["predicted_class"] = trace.predicted_class;
  if (static_cast<std::size_t>(trace.predicted_class) < class_names.size()) {
    doc["predicted_label"] = class_names[static_cast<std::size_t>(trace.predicted_class)];
  }
  doc["probabilities"] = trace.probabilities;
  doc["rules"] = nlohmann::json::array();
  for (const TraceEntry& entry : trace.top_rules) {
    doc["rules"].push_back({{"rule", entry.rule},
                            {"normalized_firing", entry.normalized_firing},
                            {"text", entry.text},
                            {"consequents", entry.consequents}});
  }
  return doc.dump(2);
}

std::vector<std::string> default_feature_names(std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t d = 0; d < count; ++d) names.push_back("x" + std::to_string(d));
  return names;
}

std::vector<std::string> default_class_names(std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    names.push_back("class_" + std::to_string(c));
  }
  return names;
}

}  // namespace gradfis
