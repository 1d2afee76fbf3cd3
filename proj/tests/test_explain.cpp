// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradfis/error.hpp"
#include "gradfis/explain.hpp"
#include "gradfis/model.hpp"
#include "gradfis/rng.hpp"
#include "testutil.hpp"

using namespace gradfis;

namespace {

// test-side parser: recovers antecedent indices from an emitted rule line
std::vector<int> parse_rule_labels(const std::string& line,
                                   const LinguisticVocabulary& vocabulary,
                                   std::span<const std::string> feature_names) {
  std::vector<int> indices;
  std::size_t cursor = line.find("IF ") + 3;
  const std::size_t then_at = line.find(" THEN ");
  for (std::size_t d = 0; d < feature_names.size(); ++d) {
    const std::string prefix = feature_names[d] + " is ";
    const std::size_t at = line.find(prefix, cursor);
    REQUIRE(at != std::string::npos);
    std::size_t label_start = at + prefix.size();
    std::size_t label_end = line.find(" AND ", label_start);
    if (label_end == std::string::npos || label_end > then_at) label_end = then_at;
    const std::string label = line.substr(label_start, label_end - label_start);
    int index = -1;
    for (std::size_t m = 0; m < vocabulary.labels[d].size(); ++m) {
      if (vocabulary.labels[d][m] == label) index = static_cast<int>(m);
    }
    REQUIRE(index >= 0);
    indices.push_back(index);
    cursor = label_end;
  }
  return indices;
}

}  // namespace

TEST_CASE("vocabulary label families") {
  const auto m2 = LinguisticVocabulary::from_model(init_classifier(1, 2, 2, 1, 5));
  CHECK(m2.labels[0] == std::vector<std::string>{"low", "high"});

  const auto m3 = LinguisticVocabulary::from_model(init_classifier(1, 2, 3, 1, 5));
  CHECK(m3.labels[0] == std::vector<std::string>{"low", "medium", "high"});

  const auto m5 = LinguisticVocabulary::from_model(init_classifier(1, 2, 5, 1, 5));
  CHECK(m5.labels[0] == std::vector<std::string>{"very-low", "low", "medium", "high",
                                                 "very-high"});

  const auto m4 = LinguisticVocabulary::from_model(init_classifier(1, 2, 4, 1, 5));
  CHECK(m4.labels[0] ==
        std::vector<std::string>{"level_0", "level_1", "level_2", "level_3"});

  for (const auto& labels : {m2.labels[0], m3.labels[0], m5.labels[0], m4.labels[0]}) {
    std::set<std::string> unique(labels.begin(), labels.end());
    CHECK(unique.size() == labels.size());
  }
}

TEST_CASE("labels follow trained center order") {
  auto model = init_classifier(2, 2, 3, 4, 8);
  // reverse the centers of input 1: labels must follow the new order
  model.bank.centers(1, 0) = 0.9;
  model.bank.centers(1, 1) = 0.5;
  model.bank.centers(1, 2) = 0.1;
  const auto vocabulary = LinguisticVocabulary::from_model(model);
  CHECK(vocabulary.labels[0] == std::vector<std::string>{"low", "medium", "high"});
  CHECK(vocabulary.labels[1] == std::vector<std::string>{"high", "medium", "low"});
}

TEST_CASE("labels ascend with centers after arbitrary retraining") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    auto model = testutil::random_small_model(rng);
    const auto vocabulary = LinguisticVocabulary::from_model(model);
    for (std::size_t d = 0; d < model.num_inputs; ++d) {
      // ranks by center: the label order must be the base order
      std::vector<std::size_t> order(model.mfs_per_input());
      for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return model.bank.centers(d, a) < model.bank.centers(d, b);
      });
      for (std::size_t rank = 0; rank + 1 < order.size(); ++rank) {
        const double lo = model.bank.centers(d, order[rank]);
        const double hi = model.bank.centers(d, order[rank + 1]);
        CHECK(lo <= hi);
      }
      std::set<std::string> unique(vocabulary.labels[d].begin(),
                                   vocabulary.labels[d].end());
      CHECK(unique.size() == model.mfs_per_input());
    }
  }
}

TEST_CASE("export_rules layout") {
  auto model = init_classifier(1, 2, 3, 4, 9);
  model.rules.antecedents(0, 0) = 2;  // highest center -> "high"
  const auto vocabulary = LinguisticVocabulary::from_model(model);
  const auto feature_names = default_feature_names(1);
  const auto class_names = default_class_names(2);
  const std::string text = export_rules(model, vocabulary, feature_names, class_names);

  std::istringstream lines(text);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    CHECK(line.starts_with("IF "));
    CHECK(line.find(" THEN logits(") != std::string::npos);
    ++count;
  }
  CHECK(count == model.num_rules());
  CHECK(text.starts_with("IF x0 is high THEN"));

  LinguisticVocabulary wrong;
  wrong.labels = {{"a", "b"}};
  CHECK_THROWS_AS(export_rules(model, wrong, feature_names, class_names), ShapeError);
  CHECK_THROWS_AS(
      export_rules(model, vocabulary, std::vector<std::string>{}, class_names),
      ShapeError);
}

TEST_CASE("emitted rules parse back to the antecedent matrix") {
  SplitMix64 rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    const auto model = testutil::random_small_model(rng);
    const auto vocabulary = LinguisticVocabulary::from_model(model);
    const auto feature_names = default_feature_names(model.num_inputs);
    const auto class_names = default_class_names(model.num_classes);
    const std::string text =
        export_rules(model, vocabulary, feature_names, class_names);
    std::istringstream lines(text);
    std::string line;
    std::size_t rule = 0;
    while (std::getline(lines, line)) {
      const auto indices = parse_rule_labels(line, vocabulary, feature_names);
      REQUIRE(indices.size() == model.num_inputs);
      for (std::size_t d = 0; d < model.num_inputs; ++d) {
        CHECK(indices[d] == model.rules.antecedents(rule, d));
      }
      ++rule;
    }
    CHECK(rule == model.num_rules());
  }
}

TEST_CASE("trace basics") {
  auto single = init_classifier(2, 2, 3, 1, 7);
  single.rules.consequents(0, 0) = 0.4;
  const auto result = trace(single, std::vector<double>{0.2, 0.6}, 5);
  REQUIRE(result.top_rules.size() == 1);  // k clamped to R
  CHECK(result.top_rules[0].normalized_firing == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.top_rules[0].rule == 0);
  CHECK(result.predicted_class == 0);

  CHECK_THROWS_AS(trace(single, std::vector<double>{0.2, 0.6}, 0), ConfigError);
}

TEST_CASE("trace consistency with predict on 100 random models") {
  SplitMix64 rng(733);
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = testutil::random_small_model(rng);
    const auto x = testutil::random_input(rng, model.num_inputs);
    const auto result = trace(model, x, 3);
    CHECK(result.predicted_class == predict(model, x));
  }
}

TEST_CASE("full trace covers every rule once and sums to one") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = testutil::random_small_model(rng);
    const auto x = testutil::random_input(rng, model.num_inputs);
    const auto result = trace(model, x, model.num_rules());
    REQUIRE(result.top_rules.size() == model.num_rules());
    std::set<std::size_t> seen;
    double total = 0.0;
    double previous = 2.0;
    for (const auto& entry : result.top_rules) {
      CHECK(seen.insert(entry.rule).second);
      CHECK(entry.normalized_firing <= previous);
      previous = entry.normalized_firing;
      total += entry.normalized_firing;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("trace text and json renderings") {
  auto model = init_classifier(2, 3, 3, 4, 21);
  model.rules.consequents(1, 2) = 1.0;
  const std::vector<double> x{0.1, 0.8};
  const auto result = trace(model, x, 2);
  const auto class_names = default_class_names(3);

  const std::string text = trace_to_text(result, class_names);
  CHECK(text.find("input:") != std::string::npos);
  CHECK(text.find("probabilities:") != std::string::npos);
  CHECK(text.find("predicted: ") != std::string::npos);

  const auto doc = nlohmann::json::parse(trace_to_json(result, class_names));
  CHECK(doc["rules"].size() == 2);
  CHECK(doc["input"].size() == 2);
  CHECK(doc["probabilities"].size() == 3);
  CHECK(doc.contains("predicted_class"));
  CHECK(doc.contains("predicted_label"));
}

TEST_CASE("trace with dataset names") {
  const auto model = init_classifier(2, 2, 3, 3, 5);
  const std::vector<std::string> features{"speed", "load"};
  const std::vector<std::string> classes{"ok", "alarm"};
  const auto result = trace(model, std::vector<double>{0.5, 0.5}, 3, features, classes);
  CHECK(result.top_rules[0].text.find("speed is") != std::string::npos);
  CHECK_THROWS_AS(
      trace(model, std::vector<double>{0.5, 0.5}, 3, features,
            std::vector<std::string>{"only-one"}),
      ShapeError);
}
