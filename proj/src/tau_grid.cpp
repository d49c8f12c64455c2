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

#include "threeec/tau_grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "threeec/errors.hpp"
#include "threeec/random.hpp"

namespace threeec {

void GammaConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("at least one algorithm is required");
  if (indices.empty()) throw ConfigError("at least one validity index is required");
  std::set<std::string> names;
  for (const auto& a : algorithms) {
    a.validate();
    if (!names.insert(a.name).second) throw ConfigError("duplicate algorithm name '" + a.name + "'");
  }
  names.clear();
  for (const auto& k : indices) {
    if (k.name.empty()) throw ConfigError("index name must not be empty");
    if (!names.insert(k.name).second) throw ConfigError("duplicate index name '" + k.name + "'");
    if (!std::isfinite(k.lambda)) throw ConfigError("lambda for index '" + k.name + "' must be finite");
  }
  if (criteria.beta < 1) throw ConfigError("beta must be >= 1");
  if (criteria.c_max < 2) throw ConfigError("c_max must be >= 2");
}

TauGrid::TauGrid(std::string node_id, std::vector<std::string> algorithm_names, std::vector<IndexSpec> indices,
                 int c_max)
    : node_id_(std::move(node_id)),
      algorithm_names_(std::move(algorithm_names)),
      indices_(std::move(indices)),
      c_max_(c_max) {
  if (c_max_ < 2) throw ConfigError("c_max must be >= 2");
  const auto counts = static_cast<std::size_t>(c_max_ - 1);
  candidates_.resize(algorithm_names_.size() * counts);
  cells_.resize(indices_.size() * candidates_.size());
}

std::size_t TauGrid::slot(std::size_t algorithm, int c) const {
  if (algorithm >= algorithm_names_.size() || c < 2 || c > c_max_) {
    throw std::out_of_range("tau grid: no cell for algorithm " + std::to_string(algorithm) + ", c = " +
                            std::to_string(c));
  }
  return algorithm * static_cast<std::size_t>(c_max_ - 1) + static_cast<std::size_t>(c - 2);
}

Cell& TauGrid::cell(std::size_t index, std::size_t algorithm, int c) {
  if (index >= indices_.size()) throw std::out_of_range("tau grid: index position out of range");
  return cells_[index * candidates_.size() + slot(algorithm, c)];
}

const Cell& TauGrid::cell(std::size_t index, std::size_t algorithm, int c) const {
  return const_cast<TauGrid*>(this)->cell(index, algorithm, c);
}

Candidate& TauGrid::candidate(std::size_t algorithm, int c) { return candidates_[slot(algorithm, c)]; }

const Candidate& TauGrid::candidate(std::size_t algorithm, int c) const { return candidates_[slot(algorithm, c)]; }

std::uint64_t cell_seed(std::uint64_t node_seed, std::size_t algorithm, int c) noexcept {
  return combine_seed(combine_seed(node_seed, algorithm), static_cast<std::uint64_t>(c));
}

void mark_breaches(TauGrid& grid, std::size_t beta) {
  for (std::size_t a = 0; a < grid.algorithm_names().size(); ++a) {
    for (int c = grid.c_min(); c <= grid.c_max(); ++c) {
      auto& cand = grid.candidate(a, c);
      cand.beta_breach = std::any_of(cand.cluster_sizes.begin(), cand.cluster_sizes.end(),
                                     [beta](std::size_t s) { return s < beta; });
      for (std::size_t k = 0; k < grid.indices().size(); ++k) {
        auto& cell = grid.cell(k, a, c);
        cell.beta_breach = cand.beta_breach;
        cell.partition_fingerprint = cand.fingerprint;
        cell.lambda_breach = !cell.error && is_breach(grid.indices()[k], cell.zeta);
        cell.eligible = !cell.error && !cell.beta_breach && !cell.lambda_breach && std::isfinite(cell.zeta);
      }
    }
  }
}

TauGrid build_tau_grid(const DataMatrix& d, const GammaConfig& config, std::uint64_t seed,
                       const std::string& node_id) {
  std::vector<std::string> names;
  for (const auto& a : config.algorithms) names.push_back(a.name);
  TauGrid grid(node_id, std::move(names), config.indices, config.criteria.c_max);

  std::optional<PairwiseDistances> dist;
  const bool wants_dist = std::any_of(config.indices.begin(), config.indices.end(),
                                      [](const IndexSpec& k) { return k.kind == IndexKind::Silhouette; });
  if (wants_dist) dist.emplace(d);

  const auto counts = static_cast<std::size_t>(config.criteria.c_max - 1);
  const std::size_t jobs = config.algorithms.size() * counts;

  auto run_job = [&](std::size_t job) {
    const std::size_t a = job / counts;
    const int c = static_cast<int>(job % counts) + 2;
    auto& cand = grid.candidate(a, c);
    try {
      auto part = partition(config.algorithms[a], d, c, cell_seed(seed, a, c));
      cand.cluster_sizes = part.cluster_sizes;
      cand.fingerprint = part.fingerprint();
      for (std::size_t k = 0; k < config.indices.size(); ++k) {
        auto& cell = grid.cell(k, a, c);
        try {
          cell.zeta = evaluate(config.indices[k].kind, d, part, dist ? &*dist : nullptr);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
      }
      cand.partition = std::move(part);
    } catch (const std::exception& e) {
      cand.error = "node " + node_id + ": " + config.algorithms[a].name + " (c = " + std::to_string(c) + "): " + e.what();
      for (std::size_t k = 0; k < config.indices.size(); ++k) grid.cell(k, a, c).error = cand.error;
    }
  };

  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) run_job(j);
      });
    }
  }

  mark_breaches(grid, config.criteria.beta);
  return grid;
}

namespace {

bool better_score(Direction dir, double x, double y) { return dir == Direction::HigherBetter ? x > y : x < y; }

// Smaller c first, then earlier algorithm.
bool preferred(const AlgoCount& x, const AlgoCount& y) {
  return x.c < y.c || (x.c == y.c && x.algorithm < y.algorithm);
}

}  // namespace

std::optional<IndexWinner> best_pair_for_index(const TauGrid& grid, std::size_t k) {
  const auto dir = grid.indices().at(k).direction();
  std::optional<IndexWinner> best;
  for (std::size_t a = 0; a < grid.algorithm_names().size(); ++a) {
    for (int c = grid.c_min(); c <= grid.c_max(); ++c) {
      const auto& cell = grid.cell(k, a, c);
      if (!cell.eligible) continue;
      const AlgoCount here{static_cast<int>(a), c};
      if (!best) {
        best = IndexWinner{here, cell.zeta, false};
      } else if (better_score(dir, cell.zeta, best->zeta)) {
        best = IndexWinner{here, cell.zeta, false};
      } else if (cell.zeta == best->zeta) {
        if (preferred(here, best->pair)) best->pair = here;
        best->zeta_tie = true;
      }
    }
  }
  return best;
}

std::optional<VoteResult> vote(const std::vector<std::optional<AlgoCount>>& winners) {
  std::vector<std::pair<AlgoCount, int>> tally;
  for (const auto& w : winners) {
    if (!w) continue;
    auto it = std::find_if(tally.begin(), tally.end(), [&](const auto& t) { return t.first == *w; });
    if (it == tally.end()) {
      tally.emplace_back(*w, 1);
    } else {
      ++it->second;
    }
  }
  if (tally.empty()) return std::nullopt;
  int top = 0;
  for (const auto& t : tally) top = std::max(top, t.second);
  std::optional<AlgoCount> pick;
  int leaders = 0;
  for (const auto& t : tally) {
    if (t.second != top) continue;
    ++leaders;
    if (!pick || preferred(t.first, *pick)) pick = t.first;
  }
  return VoteResult{*pick, top, leaders > 1};
}

GammaDecision decide(const TauGrid& grid) {
  GammaDecision out;
  std::vector<std::optional<AlgoCount>> ballots;
  for (std::size_t k = 0; k < grid.indices().size(); ++k) {
    auto w = best_pair_for_index(grid, k);
    ballots.push_back(w ? std::optional<AlgoCount>(w->pair) : std::nullopt);
    out.votes.push_back(std::move(w));
  }
  if (auto result = vote(ballots)) {
    out.selected = true;
    out.algorithm = result->pair.algorithm;
    out.mu = result->pair.c;
    out.tie_break_applied = result->tie_break_applied;
  }
  return out;
}

GammaOutcome gamma(const DataMatrix& d, const GammaConfig& config, std::uint64_t seed, const std::string& node_id) {
  GammaOutcome out;
  if (d.rows() < 2 * config.criteria.beta) {
    out.decision.fast_path = true;
    out.decision.votes.assign(config.indices.size(), std::nullopt);
    return out;
  }
  out.grid = build_tau_grid(d, config, seed, node_id);
  out.decision = decide(*out.grid);
  return out;
}

ScoreOverride ScoreOverride::from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
    throw ConfigError("score override must be an object with a 'cells' array");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "cells" && it.key() != "description") {
      throw ConfigError("score override: unknown key '" + it.key() + "'");
    }
  }
  ScoreOverride out;
  std::size_t pos = 0;
  for (const auto& e : doc["cells"]) {
    ++pos;
    const std::string where = "score override cell " + std::to_string(pos);
    if (!e.is_object()) throw ConfigError(where + ": expected an object");
    OverrideCell cell;
    try {
      cell.index = e.at("index").get<std::string>();
      cell.algorithm = e.at("algorithm").get<std::string>();
      cell.c = e.at("c").get<int>();
      cell.zeta = e.at("zeta").get<double>();
      if (e.contains("cluster_sizes")) cell.cluster_sizes = e["cluster_sizes"].get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(where + ": " + ex.what());
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

ScoreOverride ScoreOverride::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open score override '" + path.string() + "'");
  try {
    return from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("score override '" + path.string() + "': " + e.what());
  }
}

TauGrid tau_grid_from_overrides(const ScoreOverride& scores, const GammaConfig& config, const std::string& node_id) {
  std::vector<std::string> names;
  for (const auto& a : config.algorithms) names.push_back(a.name);
  TauGrid grid(node_id, names, config.indices, config.criteria.c_max);

  auto position = [](const auto& list, const std::string& name, auto get) -> std::size_t {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (get(list[i]) == name) return i;
    }
    return list.size();
  };

  std::vector<char> filled(grid.cell_count(), 0);
  for (const auto& o : scores.cells) {
    const auto k = position(config.indices, o.index, [](const IndexSpec& s) { return s.name; });
    const auto a = position(config.algorithms, o.algorithm, [](const PartitionerSpec& s) { return s.name; });
    if (k == config.indices.size()) throw ConfigError("score override names unknown index '" + o.index + "'");
    if (a == config.algorithms.size()) {
      throw ConfigError("score override names unknown algorithm '" + o.algorithm + "'");
    }
    if (o.c < 2 || o.c > config.criteria.c_max) {
      throw ConfigError("score override c = " + std::to_string(o.c) + " outside 2.." +
                        std::to_string(config.criteria.c_max));
    }
    const std::size_t flat = (k * names.size() + a) * static_cast<std::size_t>(config.criteria.c_max - 1) +
                             static_cast<std::size_t>(o.c - 2);
    if (filled[flat]) {
      throw ConfigError("score override repeats (" + o.index + ", " + o.algorithm + ", " + std::to_string(o.c) + ")");
    }
    filled[flat] = 1;
    grid.cell(k, a, o.c).zeta = o.zeta;

    auto& cand = grid.candidate(a, o.c);
    if (!o.cluster_sizes.empty()) {
      if (!cand.cluster_sizes.empty() && cand.cluster_sizes != o.cluster_sizes) {
        throw ConfigError("score override gives conflicting cluster sizes for (" + o.algorithm + ", " +
                          std::to_string(o.c) + ")");
      }
      cand.cluster_sizes = o.cluster_sizes;
    }
  }

  for (std::size_t k = 0; k < config.indices.size(); ++k) {
    for (std::size_t a = 0; a < names.size(); ++a) {
      for (int c = 2; c <= config.criteria.c_max; ++c) {
        const std::size_t flat =
            (k * names.size() + a) * static_cast<std::size_t>(config.criteria.c_max - 1) + static_cast<std::size_t>(c - 2);
        if (!filled[flat]) grid.cell(k, a, c).error = "no override score";
      }
    }
  }
  mark_breaches(grid, config.criteria.beta);
  return grid;
}

GammaOutcome gamma_with_overrides(const ScoreOverride& scores, const GammaConfig& config, const std::string& node_id) {
  GammaOutcome out;
  out.grid = tau_grid_from_overrides(scores, config, node_id);
  out.decision = decide(*out.grid);
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

Json index_json(const IndexSpec& k) {
  Json j;
  j["name"] = k.name;
  j["kind"] = std::string(to_string(k.kind));
  j["direction"] = std::string(to_string(k.direction()));
  j["lambda"] = k.lambda;
  return j;
}

}  // namespace

void write_tau_grid_csv(std::ostream& out, const TauGrid& grid) {
  out << "node_id,index,algorithm,c,zeta,beta_breach,lambda_breach,eligible\n";
  for (std::size_t k = 0; k < grid.indices().size(); ++k) {
    for (std::size_t a = 0; a < grid.algorithm_names().size(); ++a) {
      for (int c = grid.c_min(); c <= grid.c_max(); ++c) {
        const auto& cell = grid.cell(k, a, c);
        out << csv_field(grid.node_id()) << ',' << csv_field(grid.indices()[k].name) << ','
            << csv_field(grid.algorithm_names()[a]) << ',' << c << ','
            << (cell.error ? std::string() : format_double(cell.zeta)) << ',' << (cell.beta_breach ? "true" : "false")
            << ',' << (cell.lambda_breach ? "true" : "false") << ',' << (cell.eligible ? "true" : "false") << '\n';
      }
    }
  }
}

Json decision_to_json(const GammaDecision& decision, const std::vector<std::string>& algorithm_names,
                      const std::vector<IndexSpec>& indices) {
  Json j;
  j["selected"] = decision.selected;
  j["algorithm"] = decision.selected ? Json(algorithm_names.at(static_cast<std::size_t>(decision.algorithm))) : Json();
  j["mu"] = decision.mu;
  j["tie_break_applied"] = decision.tie_break_applied;
  j["fast_path"] = decision.fast_path;
  Json votes = Json::object();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto& w = k < decision.votes.size() ? decision.votes[k] : std::nullopt;
    if (!w) {
      votes[indices[k].name] = nullptr;
      continue;
    }
    Json v;
    v["algorithm"] = algorithm_names.at(static_cast<std::size_t>(w->pair.algorithm));
    v["c"] = w->pair.c;
    v["zeta"] = w->zeta;
    v["zeta_tie"] = w->zeta_tie;
    votes[indices[k].name] = std::move(v);
  }
  j["votes"] = std::move(votes);
  return j;
}

Json tau_grid_to_json(const TauGrid& grid, const GammaDecision& decision) {
  Json j;
  j["node_id"] = grid.node_id();
  Json range = Json::array();
  for (int c = grid.c_min(); c <= grid.c_max(); ++c) range.push_back(c);
  j["c_range"] = std::move(range);
  j["algorithms"] = grid.algorithm_names();
  Json idx = Json::array();
  for (const auto& k : grid.indices()) idx.push_back(index_json(k));
  j["indices"] = std::move(idx);

  Json cells = Json::array();
  for (std::size_t k = 0; k < grid.indices().size(); ++k) {
    for (std::size_t a = 0; a < grid.algorithm_names().size(); ++a) {
      for (int c = grid.c_min(); c <= grid.c_max(); ++c) {
        const auto& cell = grid.cell(k, a, c);
        Json e;
        e["index"] = grid.indices()[k].name;
        e["algorithm"] = grid.algorithm_names()[a];
        e["c"] = c;
        e["zeta"] = cell.error ? Json() : Json(cell.zeta);
        e["beta_breach"] = cell.beta_breach;
        e["lambda_breach"] = cell.lambda_breach;
        e["eligible"] = cell.eligible;
        e["cluster_sizes"] = grid.candidate(a, c).cluster_sizes;
        if (cell.error) e["error"] = *cell.error;
        cells.push_back(std::move(e));
      }
    }
  }
  j["cells"] = std::move(cells);
  j["decision"] = decision_to_json(decision, grid.algorithm_names(), grid.indices());
  return j;
}

}  // namespace threeec
