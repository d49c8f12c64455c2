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
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "threeec/data_matrix.hpp"
#include "threeec/json_io.hpp"
#include "threeec/partitioners.hpp"
#include "threeec/validity.hpp"

namespace threeec {

/// Quality thresholds that stop the recursion. Per-index lambdas live on IndexSpec.
struct StoppingCriteria {
  /// Minimum admissible cluster size.
  std::size_t beta = 1;
  /// Largest cluster count evaluated; the grid covers c = 2..c_max.
  int c_max = 2;
};

/// The two input ensembles plus the stopping criteria.
struct GammaConfig {
  std::vector<PartitionerSpec> algorithms;
  std::vector<IndexSpec> indices;
  StoppingCriteria criteria;
  /// Worker threads for grid construction; 0 picks the hardware concurrency. Never affects results.
  unsigned threads = 0;

  /// Throws ConfigError on the first violation.
  void validate() const;
};

/// A candidate partition for one (algorithm, c) pair, shared by every index row.
struct Candidate {
  std::optional<Partition> partition;
  std::vector<std::size_t> cluster_sizes;
  std::uint64_t fingerprint = 0;
  bool beta_breach = false;
  std::optional<std::string> error;
};

/// One score in the grid.
struct Cell {
  double zeta = std::numeric_limits<double>::quiet_NaN();
  bool beta_breach = false;
  bool lambda_breach = false;
  /// No breach of either kind and a finite score.
  bool eligible = false;
  std::uint64_t partition_fingerprint = 0;
  std::optional<std::string> error;
};

/// An (algorithm position, cluster count) pair.
struct AlgoCount {
  int algorithm = -1;
  int c = -1;
  friend bool operator==(const AlgoCount&, const AlgoCount&) = default;
};

/// The best eligible cell of one index.
struct IndexWinner {
  AlgoCount pair;
  double zeta = 0.0;
  /// Another eligible cell had exactly the same score and lost on the (smaller c, ensemble order) rule.
  bool zeta_tie = false;
};

/**
 * Scores for every (index, algorithm, c) at one node.
 *
 * Shaped up front as indices x algorithms x {2..c_max}; cells are filled in
 * place so the result never depends on evaluation order.
 */
class TauGrid {
 public:
  TauGrid(std::string node_id, std::vector<std::string> algorithm_names, std::vector<IndexSpec> indices, int c_max);

  const std::string& node_id() const noexcept { return node_id_; }
  const std::vector<std::string>& algorithm_names() const noexcept { return algorithm_names_; }
  const std::vector<IndexSpec>& indices() const noexcept { return indices_; }
  int c_min() const noexcept { return 2; }
  int c_max() const noexcept { return c_max_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  Cell& cell(std::size_t index, std::size_t algorithm, int c);
  const Cell& cell(std::size_t index, std::size_t algorithm, int c) const;
  Candidate& candidate(std::size_t algorithm, int c);
  const Candidate& candidate(std::size_t algorithm, int c) const;

 private:
  std::size_t slot(std::size_t algorithm, int c) const;

  std::string node_id_;
  std::vector<std::string> algorithm_names_;
  std::vector<IndexSpec> indices_;
  int c_max_;
  std::vector<Candidate> candidates_;
  std::vector<Cell> cells_;
};

/// Output of the selection function: a split (algorithm, mu) or no valid split.
struct GammaDecision {
  bool selected = false;
  int algorithm = -1;
  /// Chosen cluster count, -1 when no split is valid.
  int mu = -1;
  /// Per-index winner, in index order; nullopt when the index had no eligible cell.
  std::vector<std::optional<IndexWinner>> votes;
  bool tie_break_applied = false;
  /// Decided by n < 2 * beta without building a grid.
  bool fast_path = false;
};

struct GammaOutcome {
  GammaDecision decision;
  std::optional<TauGrid> grid;
};

/// Seed used for the partitioner run of pair (algorithm, c) at a node with `node_seed`.
std::uint64_t cell_seed(std::uint64_t node_seed, std::size_t algorithm, int c) noexcept;

/// Runs each (algorithm, c) once, scores every index on it, and marks beta / lambda breaches.
/// Partitioner and index failures become error markers; construction never throws for them.
TauGrid build_tau_grid(const DataMatrix& d, const GammaConfig& config, std::uint64_t seed,
                       const std::string& node_id = "0");

/// Recomputes eligibility of every cell from its score, candidate, and thresholds.
void mark_breaches(TauGrid& grid, std::size_t beta);

/// Optimal eligible cell of index k; ties go to the smaller c, then the earlier algorithm.
std::optional<IndexWinner> best_pair_for_index(const TauGrid& grid, std::size_t k);

struct VoteResult {
  AlgoCount pair;
  int votes = 0;
  bool tie_break_applied = false;
};

/// Majority vote over exact (algorithm, c) pairs; ties go to the smaller c, then the earlier algorithm.
std::optional<VoteResult> vote(const std::vector<std::optional<AlgoCount>>& winners);

/// Per-index winners plus vote on a built grid.
GammaDecision decide(const TauGrid& grid);

/// The selection function: fast path on n < 2 * beta, otherwise build the grid and decide.
GammaOutcome gamma(const DataMatrix& d, const GammaConfig& config, std::uint64_t seed,
                   const std::string& node_id = "0");

// Score-override hook: a grid whose scores are injected instead of computed.

struct OverrideCell {
  std::string index;
  std::string algorithm;
  int c = 0;
  double zeta = 0.0;
  std::vector<std::size_t> cluster_sizes;
};

struct ScoreOverride {
  std::vector<OverrideCell> cells;

  /// Parses {"cells": [{"index", "algorithm", "c", "zeta", "cluster_sizes"}, ...]}. Throws ConfigError.
  static ScoreOverride from_json(const Json& doc);
  static ScoreOverride load(const std::filesystem::path& path);
};

/// Builds a grid from injected scores; missing cells get an error marker.
TauGrid tau_grid_from_overrides(const ScoreOverride& scores, const GammaConfig& config,
                                const std::string& node_id = "0");

/// gamma() on an injected grid; the partitioners never run.
GammaOutcome gamma_with_overrides(const ScoreOverride& scores, const GammaConfig& config,
                                  const std::string& node_id = "0");

// Exports.

/// CSV: node_id,index,algorithm,c,zeta,beta_breach,lambda_breach,eligible
void write_tau_grid_csv(std::ostream& out, const TauGrid& grid);
Json decision_to_json(const GammaDecision& decision, const std::vector<std::string>& algorithm_names,
                      const std::vector<IndexSpec>& indices);
Json tau_grid_to_json(const TauGrid& grid, const GammaDecision& decision);

}  // namespace threeec
