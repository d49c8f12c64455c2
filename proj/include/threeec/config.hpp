/*
 * Copyright (c) 2026, The threeec Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "threeec/driver.hpp"
#include "threeec/json_io.hpp"

namespace threeec {

struct DatasetConfig {
  std::filesystem::path path;
  bool has_header = true;
  std::optional<std::string> id_column;
};

/// Everything one run needs. The algorithm list order is the final vote tie-breaker.
struct RunConfig {
  std::optional<DatasetConfig> dataset;
  bool standardize = false;
  DriverConfig driver;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
};

/// Every violation found in a config document, in document order. Empty means valid.
std::vector<std::string> config_violations(const Json& doc);

/// Parses and validates; throws ConfigError with the first violation.
/// Relative dataset and output paths are resolved against `base_dir`.
RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// Reads a JSON config file. Throws std::ios_base::failure if unreadable, ConfigError if not JSON.
Json read_config_file(const std::filesystem::path& path);

/// The config with every default materialized; parse_config(config_to_json(c)) reproduces c.
Json config_to_json(const RunConfig& config);

}  // namespace threeec
