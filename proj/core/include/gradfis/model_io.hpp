// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gradfis/model.hpp"

namespace gradfis {

/// Model document fields: version, num_inputs, num_classes, mfs_per_input,
/// num_rules, seed, centers (D x M), width_params (D x M), antecedents
/// (R x D), consequents (R x C). Doubles round-trip exactly, so a saved and
/// reloaded model reproduces forward outputs bit for bit.
std::string model_to_json(const FuzzyClassifier& model);
FuzzyClassifier model_from_json(std::string_view text);

void save_model(const FuzzyClassifier& model, const std::filesystem::path& path);
FuzzyClassifier load_model(const std::filesystem::path& path);

}  // namespace gradfis
