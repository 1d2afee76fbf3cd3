// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "gradfis/dataset.hpp"

namespace gradfis {

struct FetchResult {
  std::filesystem::path path;
  bool downloaded = false;  // false: a valid copy was already present
};

/// Downloads the canonical source file for the spec into data_dir and
/// verifies it by loading (row count, encodings). Idempotent: an existing
/// file that loads cleanly is kept as is.
FetchResult fetch_dataset(const DatasetSpec& spec,
                          const std::filesystem::path& data_dir);

}  // namespace gradfis
