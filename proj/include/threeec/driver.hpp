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
#include <optional>
#include <string>
#include <vector>

#include "threeec/data_matrix.hpp"
#include "threeec/tau_grid.hpp"

namespace threeec {

struct DriverConfig {
  GammaConfig gamma;
  /// Nodes at this depth become leaves without evaluation.
  int max_depth = 32;
};

/**
 * One node of the recursion.
 *
 * Node ids are hierarchical paths: the root is "0" and the i-th child of
 * node "x" is "x.i". Seeds are derived from the path, so any subtree can be
 * replayed in isolation from its root id and seed.
 */
struct ClusterTreeNode {
  std::string node_id;
  int depth = 0;
  std::uint64_t seed = 0;
  /// Original row ids, in parent row order.
  std::vector<RowId> row_ids;
  GammaDecision decision;
  /// Absent when the fast path fired, the depth cap was hit, or the node was not evaluated.
  std::optional<TauGrid> tau_grid;
  std::vector<std::string> children;
  std::vector<std::string> annotations;

  bool is_leaf() const noexcept { return children.empty(); }
};

/// Nodes in breadth-first order; nodes.front() is the root.
struct ClusterTree {
  std::vector<ClusterTreeNode> nodes;

  const ClusterTreeNode& root() const { return nodes.front(); }
  const ClusterTreeNode* find(const std::string& node_id) const;
};

struct FinalLeaf {
  std::string node_id;
  std::vector<RowId> row_ids;
};

/// The final ensemble: disjoint leaves covering every row of the input.
struct FinalEnsemble {
  std::vector<FinalLeaf> leaves;
};

struct RunResult {
  FinalEnsemble ensemble;
  ClusterTree tree;
};

/// Seed of the child at `child_index` under node `node_id` whose seed is `parent_seed`.
std::uint64_t child_seed(std::uint64_t parent_seed, const std::string& node_id, std::size_t child_index) noexcept;

/**
 * Recursive partitioning with a FIFO worklist.
 *
 * Each popped node is evaluated by gamma(); a selected (algorithm, mu)
 * is re-run with the same cell seed, checked against the grid's partition,
 * and its mu clusters are enqueued as children. Nodes without a valid
 * split become leaves of the final ensemble.
 */
RunResult run_3ec(const DataMatrix& a, const DriverConfig& config, std::uint64_t seed,
                  const std::string& root_id = "0");

/// Root-only run whose grid comes from injected scores; children are not materialized.
RunResult run_with_overrides(const ScoreOverride& scores, const DriverConfig& config, std::uint64_t seed,
                             const std::vector<RowId>& row_ids = {});

/// Canonical serialization of the tree (nodes keyed by id, BFS order, fixed key order).
Json tree_to_json(const ClusterTree& tree, const GammaConfig& config);

}  // namespace threeec
