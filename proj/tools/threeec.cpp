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

#include <iostream>

#include "CLI11.hpp"
#include "threeec/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"threeec: recursive ensemble clustering with validity-index voting"};
  app.require_subcommand(1);

  std::string run_config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> override_scores;
  auto* run = app.add_subcommand("run", "Run the recursion and write all outputs");
  run->add_option("config", run_config, "JSON run configuration")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--override-scores", override_scores, "Inject root grid scores from a JSON file (test hook)");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a configuration and list every violation");
  validate->add_option("config", validate_config, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : threeec::kExitConfig;
  }

  if (*run) {
    threeec::RunOptions opts;
    opts.seed = seed;
    if (out_dir) opts.output_dir = *out_dir;
    if (override_scores) opts.override_scores = *override_scores;
    return threeec::run_command(run_config, opts, std::cout, std::cerr);
  }
  return threeec::validate_command(validate_config, std::cout, std::cerr);
}
