// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "gradfis/error.hpp"
#include "gradfis/model.hpp"
#include "gradfis/model_io.hpp"
#include "gradfis/rng.hpp"
#include "testutil.hpp"

using namespace gradfis;

TEST_CASE("json document carries exactly the documented fields") {
  const auto model = init_classifier(2, 3, 4, 5, 77);
  const auto doc = nlohmann::json::parse(model_to_json(model));
  const std::vector<std::string> expected{
      "antecedents", "centers",   "consequents", "mfs_per_input", "num_classes",
      "num_inputs",  "num_rules", "seed",        "version",       "width_params"};
  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  std::sort(keys.begin(), keys.end());
  CHECK(keys == expected);
  CHECK(doc["version"] == 1);
  CHECK(doc["num_inputs"] == 2);
  CHECK(doc["num_classes"] == 3);
  CHECK(doc["mfs_per_input"] == 4);
  CHECK(doc["num_rules"] == 5);
  CHECK(doc["seed"] == 77);
  CHECK(doc["centers"].size() == 2);
  CHECK(doc["centers"][0].size() == 4);
  CHECK(doc["antecedents"].size() == 5);
  CHECK(doc["consequents"][0].size() == 3);
}

TEST_CASE("round trip reproduces forward outputs exactly") {
  SplitMix64 rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = testutil::random_small_model(rng);
    const auto restored = model_from_json(model_to_json(model));
    CHECK(restored.bank.centers == model.bank.centers);
    CHECK(restored.bank.width_params == model.bank.width_params);
    CHECK(restored.rules.antecedents == model.rules.antecedents);
    CHECK(restored.rules.consequents == model.rules.consequents);
    CHECK(restored.seed == model.seed);

    for (int probe = 0; probe < 5; ++probe) {
      const auto x = testutil::random_input(rng, model.num_inputs);
      const auto a = forward(model, x);
      const auto b = forward(restored, x);
      for (std::size_t c = 0; c < model.num_classes; ++c) {
        CHECK(std::abs(a.logits[c] - b.logits[c]) <= 1e-15);
        CHECK(std::abs(a.probs[c] - b.probs[c]) <= 1e-15);
      }
      for (std::size_t r = 0; r < model.num_rules(); ++r) {
        CHECK(std::abs(a.firings[r] - b.firings[r]) <= 1e-15);
      }
    }
  }
}

TEST_CASE("file round trip") {
  SplitMix64 rng(4242);
  const auto model = testutil::random_small_model(rng);
  const auto path = std::filesystem::temp_directory_path() / "gradfis_model_io.json";
  save_model(model, path);
  const auto restored = load_model(path);
  CHECK(restored.bank.centers == model.bank.centers);
  CHECK(restored.rules.consequents == model.rules.consequents);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(load_model("/nonexistent/gradfis/model.json"), IoError);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(model_from_json("not json at all"), ModelError);
  CHECK_THROWS_AS(model_from_json("{}"), ModelError);

  const auto model = init_classifier(2, 2, 3, 4, 1);
  auto doc = nlohmann::json::parse(model_to_json(model));

  auto wrong_version = doc;
  wrong_version["version"] = 2;
  CHECK_THROWS_AS(model_from_json(wrong_version.dump()), ModelError);

  auto missing_field = doc;
  missing_field.erase("centers");
  CHECK_THROWS_AS(model_from_json(missing_field.dump()), ModelError);

  auto ragged = doc;
  ragged["centers"][0].erase(0);
  CHECK_THROWS_AS(model_from_json(ragged.dump()), ModelError);

  auto bad_antecedent = doc;
  bad_antecedent["antecedents"][0][0] = 17;  // out of range for M = 3
  CHECK_THROWS_AS(model_from_json(bad_antecedent.dump()), ModelError);

  auto non_numeric = doc;
  non_numeric["consequents"][0][0] = "text";
  CHECK_THROWS_AS(model_from_json(non_numeric.dump()), ModelError);
}
