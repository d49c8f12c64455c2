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

#include "threeec/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "threeec/errors.hpp"

namespace threeec {
namespace {

class Checker {
 public:
  void fail(std::string msg) { errors.push_back(std::move(msg)); }

  void only_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(where + ": unknown key '" + it.key() + "'");
    }
  }

  template <class T>
  std::optional<T> get(const Json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj[key];
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return wrong(where, key, "a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return wrong(where, key, "a string");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) return wrong(where, key, "a number");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) return wrong(where, key, "a non-negative integer");
    } else {
      if (!v.is_number_integer()) return wrong(where, key, "an integer");
    }
    return v.get<T>();
  }

  std::vector<std::string> errors;

 private:
  std::nullopt_t wrong(const std::string& where, const char* key, const char* what) {
    fail(where + ": '" + key + "' must be " + what);
    return std::nullopt;
  }
};

KMeansParams read_kmeans(Checker& ck, const Json& j, const std::string& where) {
  KMeansParams p;
  if (auto v = ck.get<int>(j, "restarts", where)) p.restarts = *v;
  if (auto v = ck.get<int>(j, "max_iterations", where)) p.max_iterations = *v;
  if (auto v = ck.get<double>(j, "tolerance", where)) p.tolerance = *v;
  return p;
}

std::optional<PartitionerSpec> read_algorithm(Checker& ck, const Json& j, const std::string& where) {
  if (!j.is_object()) {
    ck.fail(where + ": expected an object");
    return std::nullopt;
  }
  const auto kind = ck.get<std::string>(j, "kind", where);
  if (!kind) {
    if (!j.contains("kind")) ck.fail(where + ": missing 'kind'");
    return std::nullopt;
  }
  const auto name = ck.get<std::string>(j, "name", where);
  PartitionerSpec spec;
  if (*kind == "kmeans") {
    ck.only_keys(j, where, {"name", "kind", "restarts", "max_iterations", "tolerance"});
    spec = PartitionerSpec::kmeans(name.value_or("K-Means"), read_kmeans(ck, j, where));
  } else if (*kind == "agglomerative") {
    ck.only_keys(j, where, {"name", "kind", "linkage"});
    AgglomerativeParams p;
    if (auto l = ck.get<std::string>(j, "linkage", where)) {
      if (*l == "ward") p.linkage = Linkage::Ward;
      else if (*l == "complete") p.linkage = Linkage::Complete;
      else if (*l == "average") p.linkage = Linkage::Average;
      else if (*l == "single") p.linkage = Linkage::Single;
      else ck.fail(where + ": unknown linkage '" + *l + "'");
    }
    spec = PartitionerSpec::agglomerative(name.value_or("Agglomerative"), p);
  } else if (*kind == "spectral") {
    ck.only_keys(j, where, {"name", "kind", "neighbors", "eigen_tolerance", "restarts", "max_iterations", "tolerance"});
    SpectralParams p;
    if (auto v = ck.get<int>(j, "neighbors", where)) p.neighbors = *v;
    if (auto v = ck.get<double>(j, "eigen_tolerance", where)) p.eigen_tolerance = *v;
    p.embedding = read_kmeans(ck, j, where);
    spec = PartitionerSpec::spectral(name.value_or("Spectral-NN"), p);
  } else {
    ck.fail(where + ": unknown algorithm kind '" + *kind + "'");
    return std::nullopt;
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    ck.fail(e.what());
  }
  return spec;
}

std::optional<IndexSpec> read_index(Checker& ck, const Json& j, const std::string& where) {
  if (!j.is_object()) {
    ck.fail(where + ": expected an object");
    return std::nullopt;
  }
  ck.only_keys(j, where, {"name", "kind"});
  const auto kind = ck.get<std::string>(j, "kind", where);
  if (!kind) {
    if (!j.contains("kind")) ck.fail(where + ": missing 'kind'");
    return std::nullopt;
  }
  IndexSpec spec;
  std::string fallback;
  if (*kind == "silhouette") {
    spec.kind = IndexKind::Silhouette;
    fallback = "Silhouette";
  } else if (*kind == "calinski_harabasz") {
    spec.kind = IndexKind::CalinskiHarabasz;
    fallback = "Calinski-Harabasz";
  } else if (*kind == "davies_bouldin") {
    spec.kind = IndexKind::DaviesBouldin;
    fallback = "Davies-Bouldin";
  } else {
    ck.fail(where + ": unknown index kind '" + *kind + "'");
    return std::nullopt;
  }
  spec.name = ck.get<std::string>(j, "name", where).value_or(fallback);
  return spec;
}

RunConfig parse_into(const Json& doc, const std::filesystem::path& base_dir, Checker& ck) {
  RunConfig cfg;
  if (!doc.is_object()) {
    ck.fail("config must be a JSON object");
    return cfg;
  }
  ck.only_keys(doc, "config",
               {"dataset", "standardize", "algorithms", "indices", "criteria", "seed", "output_dir", "max_depth",
                "threads"});

  auto resolve = [&](const std::filesystem::path& p) { return p.is_absolute() || base_dir.empty() ? p : base_dir / p; };

  if (doc.contains("dataset")) {
    const auto& ds = doc["dataset"];
    if (!ds.is_object()) {
      ck.fail("dataset: expected an object");
    } else {
      ck.only_keys(ds, "dataset", {"path", "has_header", "id_column"});
      DatasetConfig d;
      if (auto p = ck.get<std::string>(ds, "path", "dataset")) {
        d.path = resolve(*p);
      } else if (!ds.contains("path")) {
        ck.fail("dataset: missing 'path'");
      }
      if (auto h = ck.get<bool>(ds, "has_header", "dataset")) d.has_header = *h;
      if (ds.contains("id_column") && !ds["id_column"].is_null()) d.id_column = ck.get<std::string>(ds, "id_column", "dataset");
      cfg.dataset = d;
    }
  }
  if (auto v = ck.get<bool>(doc, "standardize", "config")) cfg.standardize = *v;
  if (auto v = ck.get<std::uint64_t>(doc, "seed", "config")) cfg.seed = *v;
  if (auto v = ck.get<std::string>(doc, "output_dir", "config")) cfg.output_dir = resolve(*v);
  if (auto v = ck.get<int>(doc, "max_depth", "config")) {
    if (*v < 0) ck.fail("max_depth must be >= 0");
    cfg.driver.max_depth = *v;
  }
  if (auto v = ck.get<int>(doc, "threads", "config")) {
    if (*v < 0) ck.fail("threads must be >= 0");
    else cfg.driver.gamma.threads = static_cast<unsigned>(*v);
  }

  auto& g = cfg.driver.gamma;
  if (!doc.contains("algorithms") || !doc["algorithms"].is_array() || doc["algorithms"].empty()) {
    ck.fail("algorithms: need a non-empty array");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc["algorithms"].size(); ++i) {
      if (auto a = read_algorithm(ck, doc["algorithms"][i], "algorithms[" + std::to_string(i) + "]")) {
        if (!names.insert(a->name).second) ck.fail("duplicate algorithm name '" + a->name + "'");
        g.algorithms.push_back(std::move(*a));
      }
    }
  }
  if (!doc.contains("indices") || !doc["indices"].is_array() || doc["indices"].empty()) {
    ck.fail("indices: need a non-empty array");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc["indices"].size(); ++i) {
      if (auto k = read_index(ck, doc["indices"][i], "indices[" + std::to_string(i) + "]")) {
        if (!names.insert(k->name).second) ck.fail("duplicate index name '" + k->name + "'");
        g.indices.push_back(std::move(*k));
      }
    }
  }

  if (!doc.contains("criteria") || !doc["criteria"].is_object()) {
    ck.fail("criteria: need an object with beta, c_max and lambda");
    return cfg;
  }
  const auto& cr = doc["criteria"];
  ck.only_keys(cr, "criteria", {"beta", "c_max", "lambda"});
  if (auto b = ck.get<long long>(cr, "beta", "criteria")) {
    if (*b < 1) ck.fail("beta must be >= 1");
    else g.criteria.beta = static_cast<std::size_t>(*b);
  } else if (!cr.contains("beta")) {
    ck.fail("criteria: missing 'beta'");
  }
  if (auto c = ck.get<int>(cr, "c_max", "criteria")) {
    if (*c < 2) ck.fail("c_max must be >= 2");
    g.criteria.c_max = *c;
  } else if (!cr.contains("c_max")) {
    ck.fail("criteria: missing 'c_max'");
  }
  if (!cr.contains("lambda") || !cr["lambda"].is_object()) {
    ck.fail("criteria: 'lambda' must be an object mapping index names to thresholds");
    return cfg;
  }
  const auto& lam = cr["lambda"];
  for (auto it = lam.begin(); it != lam.end(); ++it) {
    const bool known = std::any_of(g.indices.begin(), g.indices.end(), [&](const IndexSpec& k) { return k.name == it.key(); });
    if (!known) ck.fail("lambda '" + it.key() + "' has no configured index");
    else if (!it.value().is_number() || !std::isfinite(it.value().get<double>()))
      ck.fail("lambda '" + it.key() + "' must be a finite number");
  }
  for (auto& k : g.indices) {
    if (!lam.contains(k.name)) {
      ck.fail("index '" + k.name + "' has no lambda");
    } else if (lam[k.name].is_number()) {
      k.lambda = lam[k.name].get<double>();
    }
  }
  return cfg;
}

}  // namespace

std::vector<std::string> config_violations(const Json& doc) {
  Checker ck;
  parse_into(doc, {}, ck);
  return ck.errors;
}

RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir) {
  Checker ck;
  auto cfg = parse_into(doc, base_dir, ck);
  if (!ck.errors.empty()) throw ConfigError(ck.errors.front());
  return cfg;
}

Json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Json config_to_json(const RunConfig& config) {
  Json j;
  if (config.dataset) {
    Json ds;
    ds["path"] = config.dataset->path.string();
    ds["has_header"] = config.dataset->has_header;
    ds["id_column"] = config.dataset->id_column ? Json(*config.dataset->id_column) : Json();
    j["dataset"] = std::move(ds);
  }
  j["standardize"] = config.standardize;

  Json algs = Json::array();
  for (const auto& a : config.driver.gamma.algorithms) {
    Json e;
    e["name"] = a.name;
    e["kind"] = std::string(to_string(a.kind()));
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          auto put_kmeans = [&](const KMeansParams& k) {
            e["restarts"] = k.restarts;
            e["max_iterations"] = k.max_iterations;
            e["tolerance"] = k.tolerance;
          };
          if constexpr (std::is_same_v<T, KMeansParams>) {
            put_kmeans(p);
          } else if constexpr (std::is_same_v<T, AgglomerativeParams>) {
            e["linkage"] = std::string(to_string(p.linkage));
          } else {
            e["neighbors"] = p.neighbors;
            e["eigen_tolerance"] = p.eigen_tolerance;
            put_kmeans(p.embedding);
          }
        },
        a.params);
    algs.push_back(std::move(e));
  }
  j["algorithms"] = std::move(algs);

  Json idx = Json::array();
  Json lam = Json::object();
  for (const auto& k : config.driver.gamma.indices) {
    Json e;
    e["name"] = k.name;
    e["kind"] = std::string(to_string(k.kind));
    idx.push_back(std::move(e));
    lam[k.name] = k.lambda;
  }
  j["indices"] = std::move(idx);
  Json cr;
  cr["beta"] = config.driver.gamma.criteria.beta;
  cr["c_max"] = config.driver.gamma.criteria.c_max;
  cr["lambda"] = std::move(lam);
  j["criteria"] = std::move(cr);
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir.string();
  j["max_depth"] = config.driver.max_depth;
  j["threads"] = config.driver.gamma.threads;
  return j;
}

}  // namespace threeec
