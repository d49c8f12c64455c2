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

#include "threeec/driver.hpp"

#include <deque>

#include "threeec/errors.hpp"
#include "threeec/random.hpp"

namespace threeec {

const ClusterTreeNode* ClusterTree::find(const std::string& node_id) const {
  for (const auto& n : nodes) {
    if (n.node_id == node_id) return &n;
  }
  return nullptr;
}

std::uint64_t child_seed(std::uint64_t parent_seed, const std::string& node_id, std::size_t child_index) noexcept {
  // FNV-1a over the id keeps the derivation independent of std::hash.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : node_id) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return combine_seed(combine_seed(parent_seed, h), child_index);
}

namespace {

struct Pending {
  std::string node_id;
  int depth;
  std::uint64_t seed;
  std::vector<std::size_t> rows;  // positions in the root matrix
};

}  // namespace

RunResult run_3ec(const DataMatrix& a, const DriverConfig& config, std::uint64_t seed, const std::string& root_id) {
  config.gamma.validate();
  if (config.max_depth < 0) throw ConfigError("max_depth must be >= 0");

  RunResult out;
  std::deque<Pending> worklist;
  {
    std::vector<std::size_t> all(a.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    worklist.push_back({root_id, 0, seed, std::move(all)});
  }

  while (!worklist.empty()) {
    Pending item = std::move(worklist.front());
    worklist.pop_front();

    ClusterTreeNode node;
    node.node_id = item.node_id;
    node.depth = item.depth;
    node.seed = item.seed;
    node.row_ids.reserve(item.rows.size());
    for (auto r : item.rows) node.row_ids.push_back(a.row_ids()[r]);

    const DataMatrix d = subset(a, item.rows);
    if (item.depth >= config.max_depth) {
      node.decision.votes.assign(config.gamma.indices.size(), std::nullopt);
      node.annotations.push_back("max depth " + std::to_string(config.max_depth) + " reached; not evaluated");
    } else {
      auto outcome = gamma(d, config.gamma, item.seed, item.node_id);
      node.decision = std::move(outcome.decision);
      node.tau_grid = std::move(outcome.grid);
      if (node.decision.fast_path) {
        node.annotations.push_back("n = " + std::to_string(d.rows()) + " < 2 * beta; no split can satisfy beta");
      }
    }

    if (node.decision.selected) {
      const auto alg = static_cast<std::size_t>(node.decision.algorithm);
      const int mu = node.decision.mu;
      std::optional<Partition> split;
      try {
        split = partition(config.gamma.algorithms[alg], d, mu, cell_seed(item.seed, alg, mu));
        const auto& cached = node.tau_grid->candidate(alg, mu);
        if (!cached.partition || cached.partition->labels != split->labels) {
          throw PartitionError("re-executed split differs from the grid's partition");
        }
      } catch (const std::exception& e) {
        node.annotations.push_back(std::string("winning split failed: ") + e.what());
        split.reset();
      }
      if (split) {
        for (int k = 0; k < mu; ++k) {
          std::vector<std::size_t> rows;
          for (std::size_t i = 0; i < split->labels.size(); ++i) {
            if (split->labels[i] == k) rows.push_back(item.rows[i]);
          }
          const auto idx = static_cast<std::size_t>(k);
          std::string child_id = item.node_id + "." + std::to_string(k);
          node.children.push_back(child_id);
          worklist.push_back({child_id, item.depth + 1, child_seed(item.seed, item.node_id, idx), std::move(rows)});
        }
      }
    }

    if (node.is_leaf()) out.ensemble.leaves.push_back({node.node_id, node.row_ids});
    out.tree.nodes.push_back(std::move(node));
  }
  return out;
}

RunResult run_with_overrides(const ScoreOverride& scores, const DriverConfig& config, std::uint64_t seed,
                             const std::vector<RowId>& row_ids) {
  config.gamma.validate();
  RunResult out;
  ClusterTreeNode node;
  node.node_id = "0";
  node.seed = seed;
  node.row_ids = row_ids;
  auto outcome = gamma_with_overrides(scores, config.gamma, node.node_id);
  node.decision = std::move(outcome.decision);
  node.tau_grid = std::move(outcome.grid);
  node.annotations.push_back("scores injected by override; children not materialized");
  out.ensemble.leaves.push_back({node.node_id, node.row_ids});
  out.tree.nodes.push_back(std::move(node));
  return out;
}

Json tree_to_json(const ClusterTree& tree, const GammaConfig& config) {
  std::vector<std::string> algs;
  for (const auto& a : config.algorithms) algs.push_back(a.name);
  Json nodes = Json::object();
  Json leaves = Json::array();
  for (const auto& n : tree.nodes) {
    const auto& grid = n.tau_grid;
    Json j;
    j["node_id"] = n.node_id;
    j["depth"] = n.depth;
    j["seed"] = n.seed;
    j["size"] = n.row_ids.size();
    j["row_ids"] = n.row_ids;
    j["decision"] = decision_to_json(n.decision, algs, config.indices);
    j["tau_grid"] = grid ? Json("tau_grids/node_" + n.node_id + ".csv") : Json();
    j["children"] = n.children;
    j["annotations"] = n.annotations;
    if (n.is_leaf()) leaves.push_back(n.node_id);
    nodes[n.node_id] = std::move(j);
  }
  Json doc;
  doc["root"] = tree.nodes.empty() ? Json() : Json(tree.nodes.front().node_id);
  doc["nodes"] = std::move(nodes);
  doc["leaves"] = std::move(leaves);
  return doc;
}

}  // namespace threeec
