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

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "threeec/driver.hpp"
#include "threeec/errors.hpp"

using namespace threeec;
namespace tt = threeec::testing;

namespace {

DriverConfig iris_config() {
  DriverConfig cfg;
  cfg.gamma.algorithms = {PartitionerSpec::kmeans(), PartitionerSpec::agglomerative(), PartitionerSpec::spectral()};
  cfg.gamma.indices = {{IndexKind::Silhouette, 0.45, "Silhouette"},
                       {IndexKind::CalinskiHarabasz, 500.0, "Calinski-Harabasz"},
                       {IndexKind::DaviesBouldin, 0.80, "Davies-Bouldin"}};
  cfg.gamma.criteria.beta = 40;
  cfg.gamma.criteria.c_max = 4;
  return cfg;
}

DriverConfig permissive(std::size_t beta, double s, double ch, double db, int c_max = 3) {
  DriverConfig cfg = iris_config();
  cfg.gamma.criteria.beta = beta;
  cfg.gamma.criteria.c_max = c_max;
  cfg.gamma.indices[0].lambda = s;
  cfg.gamma.indices[1].lambda = ch;
  cfg.gamma.indices[2].lambda = db;
  return cfg;
}

void check_disjoint_cover(const RunResult& r, const DataMatrix& a) {
  std::multiset<RowId> seen;
  for (const auto& leaf : r.ensemble.leaves) seen.insert(leaf.row_ids.begin(), leaf.row_ids.end());
  CHECK(seen.size() == a.rows());
  const std::set<RowId> unique(seen.begin(), seen.end());
  CHECK(unique.size() == a.rows());
  CHECK(unique == std::set<RowId>(a.row_ids().begin(), a.row_ids().end()));
}

void check_tree_consistency(const RunResult& r) {
  const auto& tree = r.tree;
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) continue;
    REQUIRE(node.decision.selected);
    CHECK(node.children.size() == static_cast<std::size_t>(node.decision.mu));
    std::vector<RowId> union_rows;
    for (const auto& id : node.children) {
      const auto* child = tree.find(id);
      REQUIRE(child);
      CHECK(child->depth == node.depth + 1);
      // Strict progress: every child is strictly smaller.
      CHECK(child->row_ids.size() < node.row_ids.size());
      union_rows.insert(union_rows.end(), child->row_ids.begin(), child->row_ids.end());
    }
    std::sort(union_rows.begin(), union_rows.end());
    auto parent = node.row_ids;
    std::sort(parent.begin(), parent.end());
    CHECK(union_rows == parent);
    // The recorded cluster sizes are those of the winning grid candidate.
    const auto& cand = node.tau_grid->candidate(static_cast<std::size_t>(node.decision.algorithm), node.decision.mu);
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      CHECK(tree.find(node.children[k])->row_ids.size() == cand.cluster_sizes[k]);
    }
  }
}

}  // namespace

TEST_SUITE("recursion_driver") {
  TEST_CASE("Iris recursion: two-way root split, immediate leaf, beta-sized leaves") {
    const auto iris = load_csv(tt::iris_path());
    const auto r = run_3ec(iris, iris_config(), 0);
    const auto& root = r.tree.root();
    CHECK(root.node_id == "0");
    CHECK(root.decision.selected);
    CHECK(root.decision.mu == 2);
    REQUIRE(root.children.size() == 2);
    const auto* first = r.tree.find(root.children[0]);
    const auto* second = r.tree.find(root.children[1]);
    REQUIRE(first);
    REQUIRE(second);
    CHECK((first->is_leaf() || second->is_leaf()));
    for (const auto& leaf : r.ensemble.leaves) CHECK(leaf.row_ids.size() >= 40);
    check_disjoint_cover(r, iris);
    check_tree_consistency(r);
  }

  TEST_CASE("small input is a single leaf through the fast path") {
    tt::Gen g(4);
    const auto d = DataMatrix::from_rows(tt::random_points(g, 50, 2));
    const auto r = run_3ec(d, iris_config(), 0);
    REQUIRE(r.tree.nodes.size() == 1);
    CHECK(r.tree.root().decision.fast_path);
    CHECK_FALSE(r.tree.root().tau_grid);
    REQUIRE(r.ensemble.leaves.size() == 1);
    CHECK(r.ensemble.leaves[0].row_ids.size() == 50);
  }

  TEST_CASE("two blobs with blob-level thresholds give exactly two leaves") {
    tt::Gen g(10);
    const auto d = DataMatrix::from_rows(tt::two_blobs(g, 30));
    // Thresholds pass the between-blob split but reject any split of uniform jitter.
    const auto r = run_3ec(d, permissive(10, 0.6, 100.0, 0.6), 1);
    REQUIRE(r.ensemble.leaves.size() == 2);
    for (const auto& leaf : r.ensemble.leaves) {
      CHECK(leaf.row_ids.size() == 30);
      const bool first_blob = std::stoi(leaf.row_ids.front()) < 30;
      for (const auto& id : leaf.row_ids) CHECK((std::stoi(id) < 30) == first_blob);
    }
    check_disjoint_cover(r, d);
  }

  TEST_CASE("child seeds are deterministic and distinct") {
    CHECK(child_seed(7, "0", 0) == child_seed(7, "0", 0));
    CHECK(child_seed(7, "0", 0) != child_seed(7, "0", 1));
    CHECK(child_seed(7, "0", 0) != child_seed(8, "0", 0));
    CHECK(child_seed(7, "0", 0) != child_seed(7, "0.0", 0));
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < 100; ++i) seeds.insert(child_seed(1, "0.1.2", i));
    CHECK(seeds.size() == 100);
  }

  TEST_CASE("any subtree replays identically in isolation") {
    tt::Gen g(21);
    tt::Points pts;
    for (int b = 0; b < 4; ++b) {
      for (int i = 0; i < 20; ++i) pts.push_back({(b % 2) * 30.0 + g.uniform(-1, 1), (b / 2) * 30.0 + g.uniform(-1, 1)});
    }
    const auto d = DataMatrix::from_rows(pts);
    const auto cfg = permissive(5, 0.5, 0.0, 0.7);
    const auto full = run_3ec(d, cfg, 99);
    REQUIRE(full.tree.nodes.size() > 1);
    for (const auto& node : full.tree.nodes) {
      if (node.node_id == "0") continue;
      std::vector<std::size_t> rows;
      for (const auto& id : node.row_ids) rows.push_back(std::stoul(id));
      const auto sub = run_3ec(subset(d, rows), cfg, node.seed, node.node_id);
      // Every node of the replayed subtree matches the corresponding node in the full tree.
      for (const auto& s : sub.tree.nodes) {
        const auto* orig = full.tree.find(s.node_id);
        REQUIRE(orig);
        CHECK(orig->seed == s.seed);
        CHECK(orig->row_ids == s.row_ids);
        CHECK(orig->children == s.children);
        CHECK(orig->decision.mu == s.decision.mu);
        CHECK(orig->decision.algorithm == s.decision.algorithm);
      }
    }
  }

  TEST_CASE("random runs keep the tree consistent and terminate") {
    tt::Gen g(303);
    for (int trial = 0; trial < 6; ++trial) {
      const int n = g.integer(30, 90);
      const auto d = DataMatrix::from_rows(tt::random_points(g, n, 2));
      const auto cfg = permissive(static_cast<std::size_t>(g.integer(3, 10)), g.uniform(0.2, 0.5), 0.0, 1.5);
      const auto r = run_3ec(d, cfg, static_cast<std::uint64_t>(trial));
      check_disjoint_cover(r, d);
      check_tree_consistency(r);
      for (const auto& node : r.tree.nodes) {
        if (!node.is_leaf()) continue;
        if (node.node_id == "0") continue;
        CHECK(node.row_ids.size() >= cfg.gamma.criteria.beta);
      }
    }
  }

  TEST_CASE("max depth turns nodes into annotated leaves") {
    tt::Gen g(5);
    const auto d = DataMatrix::from_rows(tt::random_points(g, 60, 2));
    auto cfg = permissive(1, -1.0, 0.0, 100.0);
    cfg.max_depth = 1;
    const auto r = run_3ec(d, cfg, 0);
    CHECK(r.tree.root().decision.selected);
    for (const auto& node : r.tree.nodes) {
      if (node.depth == 0) continue;
      CHECK(node.depth == 1);
      CHECK(node.is_leaf());
      CHECK_FALSE(node.tau_grid);
      REQUIRE_FALSE(node.annotations.empty());
      CHECK(node.annotations.front().find("max depth") != std::string::npos);
    }
    check_disjoint_cover(r, d);
    cfg.max_depth = -1;
    CHECK_THROWS_AS(run_3ec(d, cfg, 0), ConfigError);
  }

  TEST_CASE("fixed seed replays to a byte-identical tree") {
    const auto iris = load_csv(tt::iris_path());
    const auto cfg = permissive(20, 0.4, 200.0, 1.0);
    const auto a = dump_json(tree_to_json(run_3ec(iris, cfg, 11).tree, cfg.gamma));
    const auto b = dump_json(tree_to_json(run_3ec(iris, cfg, 11).tree, cfg.gamma));
    CHECK(a == b);
  }

  TEST_CASE("tree JSON layout") {
    const auto iris = load_csv(tt::iris_path());
    const auto cfg = iris_config();
    const auto r = run_3ec(iris, cfg, 0);
    const auto j = tree_to_json(r.tree, cfg.gamma);
    CHECK(j["root"] == "0");
    CHECK(j["nodes"]["0"]["size"] == 150);
    CHECK(j["nodes"]["0"]["decision"]["mu"] == 2);
    CHECK(j["nodes"]["0"]["tau_grid"] == "tau_grids/node_0.csv");
    CHECK(j["leaves"].size() == r.ensemble.leaves.size());
    // Fast-path nodes still list one vote slot per index.
    for (const auto& leaf : j["leaves"]) {
      const auto& node = j["nodes"][leaf.get<std::string>()];
      CHECK(node["decision"]["votes"].size() == 3);
    }
  }
}
