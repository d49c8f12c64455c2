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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "threeec/errors.hpp"
#include "threeec/validity.hpp"

using namespace threeec;
namespace tt = threeec::testing;

namespace {

DataMatrix four_points() { return DataMatrix::from_rows({{0, 0}, {0, 1}, {10, 0}, {10, 1}}); }

IndexSpec spec_of(IndexKind kind, double lambda) { return IndexSpec{kind, lambda, std::string(to_string(kind))}; }

tt::Points shifted(const tt::Points& x, double scale, const std::vector<double>& shift) {
  tt::Points out = x;
  for (auto& r : out) {
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = r[k] * scale + shift[k];
  }
  return out;
}

}  // namespace

TEST_SUITE("validity_indices") {
  TEST_CASE("hand-evaluated four-point example") {
    const auto d = four_points();
    const auto p = Partition::from_labels({0, 0, 1, 1}, 2);
    // a = 1, b = (10 + sqrt(101)) / 2 for every point.
    const double expected = 1.0 - 2.0 / (10.0 + std::sqrt(101.0));
    CHECK(silhouette(d, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(silhouette(d, p) - 0.9002) < 1e-4);
    CHECK(std::abs(calinski_harabasz(d, p) - 200.0) < 1e-9);
    CHECK(std::abs(davies_bouldin(d, p) - 0.1) < 1e-12);
  }

  TEST_CASE("singleton clusters give a silhouette of zero") {
    tt::Gen g(1);
    const auto d = DataMatrix::from_rows(tt::random_points(g, 6, 2));
    CHECK(silhouette(d, Partition::from_labels({0, 1, 2, 3, 4, 5}, 6)) == 0.0);
  }

  TEST_CASE("zero-scatter clusters: DB is zero, CH is the infinity sentinel") {
    const auto d = DataMatrix::from_rows({{1, 1}, {1, 1}, {1, 1}, {4, 5}, {4, 5}});
    const auto p = Partition::from_labels({0, 0, 0, 1, 1}, 2);
    CHECK(davies_bouldin(d, p) == 0.0);
    CHECK(calinski_harabasz(d, p) == std::numeric_limits<double>::infinity());
    CHECK(silhouette(d, p) == 1.0);
  }

  TEST_CASE("coincident centroids give the DB infinity sentinel") {
    const auto d = DataMatrix::from_rows({{-1, 0}, {1, 0}, {0, -1}, {0, 1}});
    const auto p = Partition::from_labels({0, 0, 1, 1}, 2);
    CHECK(davies_bouldin(d, p) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("preconditions are enforced") {
    const auto d = four_points();
    CHECK_THROWS_AS(silhouette(d, Partition::from_labels({0, 0, 0, 0}, 1)), IndexError);
    CHECK_THROWS_AS(davies_bouldin(d, Partition::from_labels({0, 0, 0, 0}, 1)), IndexError);
    CHECK_THROWS_AS(calinski_harabasz(d, Partition::from_labels({0, 0, 0, 0}, 1)), IndexError);
    // c = n is outside the CH range.
    CHECK_THROWS_AS(calinski_harabasz(d, Partition::from_labels({0, 1, 2, 3}, 4)), IndexError);
    // Empty cluster.
    CHECK_THROWS_AS(silhouette(d, Partition::from_labels({0, 0, 1, 1}, 3)), IndexError);
    CHECK_THROWS_AS(davies_bouldin(d, Partition::from_labels({0, 0, 1, 1}, 3)), IndexError);
    // Label count mismatch.
    CHECK_THROWS_AS(silhouette(d, Partition::from_labels({0, 1, 1}, 2)), IndexError);
  }

  TEST_CASE("breach rule") {
    CHECK(is_breach(spec_of(IndexKind::Silhouette, 0.45), 0.25));
    CHECK_FALSE(is_breach(spec_of(IndexKind::Silhouette, 0.45), 0.45));
    CHECK_FALSE(is_breach(spec_of(IndexKind::DaviesBouldin, 0.80), 0.8));
    CHECK(is_breach(spec_of(IndexKind::DaviesBouldin, 0.80), 0.81));
    CHECK(is_breach(spec_of(IndexKind::CalinskiHarabasz, 275), 267));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_FALSE(is_breach(spec_of(IndexKind::CalinskiHarabasz, 500), inf));
    CHECK(is_breach(spec_of(IndexKind::DaviesBouldin, 0.8), inf));
    CHECK(is_breach(spec_of(IndexKind::Silhouette, 0.0), std::nan("")));
    CHECK(is_breach(spec_of(IndexKind::DaviesBouldin, 10.0), std::nan("")));
    const auto s = score(spec_of(IndexKind::Silhouette, 0.3), 0.6);
    CHECK(s.value == 0.6);
    CHECK_FALSE(s.breached);
  }

  TEST_CASE("directions") {
    CHECK(direction_of(IndexKind::Silhouette) == Direction::HigherBetter);
    CHECK(direction_of(IndexKind::CalinskiHarabasz) == Direction::HigherBetter);
    CHECK(direction_of(IndexKind::DaviesBouldin) == Direction::LowerBetter);
  }

  TEST_CASE("indices match definitional oracles on random data") {
    tt::Gen g(4242);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = g.integer(6, 30);
      const int p = g.integer(1, 3);
      const int c = g.integer(2, 3);
      const auto pts = tt::random_points(g, n, p);
      const auto labels = tt::random_labels(g, n, c);
      const auto d = DataMatrix::from_rows(pts);
      const auto part = Partition::from_labels(labels, c);
      CAPTURE(trial);
      // Oracles use the raw labels; canonicalization does not change the grouping.
      CHECK(std::abs(silhouette(d, part) - tt::oracle_silhouette(pts, labels, c)) <= 1e-9);
      CHECK(std::abs(calinski_harabasz(d, part) - tt::oracle_calinski_harabasz(pts, labels, c)) <=
            1e-9 * std::max(1.0, std::abs(tt::oracle_calinski_harabasz(pts, labels, c))));
      CHECK(std::abs(davies_bouldin(d, part) - tt::oracle_davies_bouldin(pts, labels, c)) <= 1e-9);
    }
  }

  TEST_CASE("cached distances give the same silhouette") {
    tt::Gen g(12);
    const auto d = DataMatrix::from_rows(tt::random_points(g, 25, 3));
    const auto part = Partition::from_labels(tt::random_labels(g, 25, 3), 3);
    const PairwiseDistances dist(d);
    CHECK(silhouette(d, part, dist) == silhouette(d, part));
    CHECK(evaluate(IndexKind::Silhouette, d, part, &dist) == silhouette(d, part));
    CHECK(evaluate(IndexKind::CalinskiHarabasz, d, part) == calinski_harabasz(d, part));
    CHECK(evaluate(IndexKind::DaviesBouldin, d, part) == davies_bouldin(d, part));
  }

  TEST_CASE("translation and uniform scaling leave every index unchanged") {
    tt::Gen g(99);
    for (int trial = 0; trial < 10; ++trial) {
      const auto pts = tt::random_points(g, 20, 3);
      const auto labels = tt::random_labels(g, 20, 3);
      const auto part = Partition::from_labels(labels, 3);
      const auto base = DataMatrix::from_rows(pts);
      const auto moved = DataMatrix::from_rows(shifted(pts, 1.0, {17.0, -3.5, 250.0}));
      const auto scaled = DataMatrix::from_rows(shifted(pts, 3.0, {0.0, 0.0, 0.0}));
      for (IndexKind kind : {IndexKind::Silhouette, IndexKind::CalinskiHarabasz, IndexKind::DaviesBouldin}) {
        const double v = evaluate(kind, base, part);
        CHECK(std::abs(evaluate(kind, moved, part) - v) <= 1e-9 * std::max(1.0, std::abs(v)));
        CHECK(std::abs(evaluate(kind, scaled, part) - v) <= 1e-9 * std::max(1.0, std::abs(v)));
      }
    }
  }

  TEST_CASE("well-separated clusters score better than a random labeling") {
    tt::Gen g(6);
    const auto pts = tt::two_blobs(g, 15, 1.0, 20.0);
    const auto d = DataMatrix::from_rows(pts);
    std::vector<int> truth(30);
    for (int i = 0; i < 30; ++i) truth[static_cast<std::size_t>(i)] = i < 15 ? 0 : 1;
    const auto good = Partition::from_labels(truth, 2);
    const auto bad = Partition::from_labels(tt::random_labels(g, 30, 2), 2);
    CHECK(silhouette(d, good) > silhouette(d, bad));
    CHECK(calinski_harabasz(d, good) > calinski_harabasz(d, bad));
    CHECK(davies_bouldin(d, good) < davies_bouldin(d, bad));
  }
}
