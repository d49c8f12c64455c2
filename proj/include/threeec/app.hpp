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
#include <iosfwd>
#include <optional>

namespace threeec {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitConfig = 2, kExitData = 3 };

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  /// Test hook: take the root grid's scores from this file instead of running partitioners.
  std::optional<std::filesystem::path> override_scores;
};

/**
 * Loads the config and dataset, runs the recursion, and writes
 * assignments.csv, tree.json, tau_grids/node_<id>.{csv,json} and
 * run_summary.json into the output directory. Every file is written
 * atomically. Returns an ExitCode.
 */
int run_command(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
                std::ostream& err);

/// Checks a config without running; prints every violation. Returns an ExitCode.
int validate_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

}  // namespace threeec
