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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "threeec/app.hpp"
#include "threeec/config.hpp"
#include "threeec/errors.hpp"

using namespace threeec;
namespace tt = threeec::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("threeec_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json iris_doc() { return read_config_file(tt::source_dir() / "configs" / "iris.json"); }

fs::path write_config(const fs::path& dir, Json doc) {
  doc["dataset"]["path"] = tt::iris_path().string();
  const auto p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured validate(const fs::path& p) {
  std::ostringstream out, err;
  const int code = validate_command(p, out, err);
  return {code, out.str(), err.str()};
}

Captured run(const fs::path& p, RunOptions opts = {}) {
  std::ostringstream out, err;
  const int code = run_command(p, opts, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("the shipped Iris config is valid") {
    const auto r = validate(tt::source_dir() / "configs" / "iris.json");
    CHECK(r.code == kExitOk);
    CHECK(r.out == "valid\n");
  }

  TEST_CASE("validate lists every violation") {
    TempDir tmp("validate");
    auto doc = iris_doc();
    doc["criteria"]["c_max"] = 1;
    doc["criteria"]["beta"] = 0;
    doc["criteria"]["lambda"]["Dunn"] = 1.0;
    doc["colour"] = "blue";
    const auto r = validate(write_config(tmp.path, doc));
    CHECK(r.code == kExitConfig);
    CHECK(r.out.find("violation: c_max must be >= 2") != std::string::npos);
    CHECK(r.out.find("violation: beta must be >= 1") != std::string::npos);
    CHECK(r.out.find("Dunn") != std::string::npos);
    CHECK(r.out.find("colour") != std::string::npos);
    CHECK(config_violations(doc).size() == 4);
  }

  TEST_CASE("every index needs a lambda") {
    auto doc = iris_doc();
    doc["criteria"]["lambda"].erase("Davies-Bouldin");
    const auto v = config_violations(doc);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("Davies-Bouldin") != std::string::npos);
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }

  TEST_CASE("unreadable config exits with the data code") {
    CHECK(validate("/nonexistent/threeec/config.json").code == kExitData);
    CHECK(run("/nonexistent/threeec/config.json").code == kExitData);
  }

  TEST_CASE("config round-trips with defaults materialized") {
    const auto cfg = parse_config(iris_doc(), tt::source_dir() / "configs");
    const auto j = config_to_json(cfg);
    CHECK(j["criteria"]["beta"] == 40);
    CHECK(j["max_depth"] == 32);
    CHECK(j["algorithms"][0]["restarts"] == 10);
    const auto again = parse_config(j);
    CHECK(dump_json(config_to_json(again)) == dump_json(j));
    CHECK(cfg.dataset->path == tt::source_dir() / "configs" / ".." / "data" / "iris.csv");
  }

  TEST_CASE("Iris run writes every output and replays byte for byte") {
    TempDir tmp("run");
    const auto cfg = write_config(tmp.path, iris_doc());
    RunOptions a;
    a.output_dir = tmp.path / "a";
    RunOptions b;
    b.output_dir = tmp.path / "b";
    const auto ra = run(cfg, a);
    REQUIRE(ra.code == kExitOk);
    REQUIRE(run(cfg, b).code == kExitOk);
    for (const char* f : {"assignments.csv", "tree.json", "run_summary.json", "tau_grids/node_0.csv",
                          "tau_grids/node_0.json"}) {
      CAPTURE(f);
      CHECK(fs::exists(*a.output_dir / f));
    }
    CHECK(slurp(*a.output_dir / "tree.json") == slurp(*b.output_dir / "tree.json"));
    CHECK(slurp(*a.output_dir / "assignments.csv") == slurp(*b.output_dir / "assignments.csv"));

    const auto assignments = slurp(*a.output_dir / "assignments.csv");
    CHECK(assignments.rfind("row_id,leaf_id\n", 0) == 0);
    CHECK(std::count(assignments.begin(), assignments.end(), '\n') == 151);

    const auto summary = Json::parse(slurp(*a.output_dir / "run_summary.json"));
    CHECK(summary["root_decision"]["mu"] == 2);
    CHECK(summary["config"]["criteria"]["beta"] == 40);
    for (const auto& leaf : summary["leaves"]) CHECK(leaf["size"].get<int>() >= 40);
    CHECK(summary.contains("tie_break_fired"));
    CHECK(summary.contains("kernel_isa"));
  }

  TEST_CASE("seed flag overrides the config seed") {
    TempDir tmp("seed");
    const auto cfg = write_config(tmp.path, iris_doc());
    RunOptions o;
    o.output_dir = tmp.path / "s";
    o.seed = 1234;
    REQUIRE(run(cfg, o).code == kExitOk);
    const auto summary = Json::parse(slurp(*o.output_dir / "run_summary.json"));
    CHECK(summary["seed"] == 1234);
  }

  TEST_CASE("score override run selects the table winner") {
    TempDir tmp("override");
    RunOptions o;
    o.output_dir = tmp.path;
    o.override_scores = tt::source_dir() / "tests" / "data" / "gamma_worked_example.json";
    const auto r = run(tt::source_dir() / "tests" / "data" / "gamma_worked_example_config.json", o);
    REQUIRE(r.code == kExitOk);
    const auto tree = Json::parse(slurp(tmp.path / "tree.json"));
    const auto& d = tree["nodes"]["0"]["decision"];
    CHECK(d["algorithm"] == "A1");
    CHECK(d["mu"] == 2);
    CHECK(d["tie_break_applied"] == false);
  }

  TEST_CASE("invalid config and bad data exit with distinct codes") {
    TempDir tmp("codes");
    auto doc = iris_doc();
    doc["criteria"]["c_max"] = 1;
    const auto bad_cfg = run(write_config(tmp.path, doc));
    CHECK(bad_cfg.code == kExitConfig);
    CHECK(bad_cfg.err.find("c_max must be >= 2") != std::string::npos);

    const auto csv = tmp.path / "broken.csv";
    std::ofstream(csv) << "x,y\n1,2\n3,oops\n";
    auto doc2 = iris_doc();
    doc2["dataset"]["path"] = csv.string();
    const auto p = tmp.path / "broken.json";
    std::ofstream(p) << doc2.dump();
    const auto bad_data = run(p);
    CHECK(bad_data.code == kExitData);
    CHECK(bad_data.err.find("oops") != std::string::npos);

    std::ofstream(tmp.path / "garbage.json") << "{not json";
    CHECK(run(tmp.path / "garbage.json").code == kExitConfig);
  }
}
