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

#include "threeec/app.hpp"

#include <map>
#include <ostream>
#include <sstream>

#include "threeec/config.hpp"
#include "threeec/errors.hpp"
#include "threeec/kernels.hpp"

namespace threeec {
namespace {

namespace fs = std::filesystem;

Json summary_json(const RunConfig& cfg, const RunResult& result, const std::optional<fs::path>& override_path,
                  const std::vector<std::string>& warnings) {
  const auto& g = cfg.driver.gamma;
  std::vector<std::string> algs;
  for (const auto& a : g.algorithms) algs.push_back(a.name);

  Json j;
  j["config"] = config_to_json(cfg);
  j["seed"] = cfg.seed;
  j["kernel_isa"] = std::string(kernels::to_string(kernels::active_isa()));
  j["override_scores"] = override_path ? Json(override_path->string()) : Json();
  j["node_count"] = result.tree.nodes.size();
  j["root_decision"] = decision_to_json(result.tree.root().decision, algs, g.indices);
  j["leaf_count"] = result.ensemble.leaves.size();
  Json leaves = Json::array();
  for (const auto& l : result.ensemble.leaves) {
    Json e;
    e["node_id"] = l.node_id;
    e["size"] = l.row_ids.size();
    leaves.push_back(std::move(e));
  }
  j["leaves"] = std::move(leaves);
  bool tie = false;
  for (const auto& n : result.tree.nodes) tie = tie || n.decision.tie_break_applied;
  j["tie_break_fired"] = tie;
  j["warnings"] = warnings;
  return j;
}

void write_outputs(const fs::path& dir, const RunConfig& cfg, const RunResult& result,
                   const std::vector<RowId>& input_order, const std::optional<fs::path>& override_path,
                   const std::vector<std::string>& warnings) {
  fs::create_directories(dir / "tau_grids");

  std::map<RowId, std::string> leaf_of;
  for (const auto& l : result.ensemble.leaves) {
    for (const auto& id : l.row_ids) leaf_of[id] = l.node_id;
  }
  std::ostringstream assign;
  assign << "row_id,leaf_id\n";
  for (const auto& id : input_order) assign << id << ',' << leaf_of.at(id) << '\n';
  write_file_atomic(dir / "assignments.csv", assign.str());

  write_file_atomic(dir / "tree.json", dump_json(tree_to_json(result.tree, cfg.driver.gamma)));

  for (const auto& n : result.tree.nodes) {
    if (!n.tau_grid) continue;
    std::ostringstream csv;
    write_tau_grid_csv(csv, *n.tau_grid);
    write_file_atomic(dir / "tau_grids" / ("node_" + n.node_id + ".csv"), csv.str());
    write_file_atomic(dir / "tau_grids" / ("node_" + n.node_id + ".json"),
                      dump_json(tau_grid_to_json(*n.tau_grid, n.decision)));
  }

  write_file_atomic(dir / "run_summary.json", dump_json(summary_json(cfg, result, override_path, warnings)));
}

}  // namespace

int run_command(const fs::path& config_path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Json doc;
    try {
      doc = read_config_file(config_path);
    } catch (const std::ios_base::failure& e) {
      err << "error: " << e.what() << '\n';
      return kExitData;
    }
    auto cfg = parse_config(doc, config_path.parent_path());
    if (options.seed) cfg.seed = *options.seed;
    if (options.output_dir) cfg.output_dir = *options.output_dir;

    std::vector<std::string> warnings;
    std::optional<DataMatrix> data;
    if (cfg.dataset) {
      try {
        data = load_csv(cfg.dataset->path, CsvOptions{cfg.dataset->has_header, cfg.dataset->id_column});
        if (cfg.standardize) {
          auto s = standardize(*data);
          for (auto col : s.constant_columns) {
            warnings.push_back("standardize: column " + std::to_string(col + 1) + " has zero variance; left as zeros");
          }
          data = std::move(s.matrix);
        }
      } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
      }
    }

    RunResult result;
    std::vector<RowId> order;
    if (data) order = data->row_ids();
    if (options.override_scores) {
      const auto scores = ScoreOverride::load(*options.override_scores);
      result = run_with_overrides(scores, cfg.driver, cfg.seed, order);
    } else {
      if (!data) throw ConfigError("dataset is required unless --override-scores is given");
      result = run_3ec(*data, cfg.driver, cfg.seed);
    }
    for (const auto& w : warnings) err << "warning: " << w << '\n';

    write_outputs(cfg.output_dir, cfg, result, order, options.override_scores, warnings);

    const auto& root = result.tree.root();
    out << "nodes: " << result.tree.nodes.size() << ", leaves: " << result.ensemble.leaves.size() << '\n';
    if (root.decision.selected) {
      out << "root split: " << cfg.driver.gamma.algorithms[static_cast<std::size_t>(root.decision.algorithm)].name
          << ", mu = " << root.decision.mu << '\n';
    } else {
      out << "root: no valid split\n";
    }
    for (const auto& l : result.ensemble.leaves) out << "  leaf " << l.node_id << ": " << l.row_ids.size() << " rows\n";
    out << "outputs written to " << cfg.output_dir.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int validate_command(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  Json doc;
  try {
    doc = read_config_file(config_path);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConfigError& e) {
    err << "invalid: " << e.what() << '\n';
    return kExitConfig;
  }
  const auto violations = config_violations(doc);
  if (violations.empty()) {
    out << "valid\n";
    return kExitOk;
  }
  for (const auto& v : violations) out << "violation: " << v << '\n';
  return kExitConfig;
}

}  // namespace threeec
