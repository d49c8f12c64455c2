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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lloyd.hpp"
#include "threeec/errors.hpp"
#include "threeec/kernels.hpp"
#include "threeec/partitioners.hpp"

namespace threeec {
namespace {

// Binary, symmetric kNN adjacency: i ~ j if either is among the other's k nearest.
// A point counts as its own first neighbor, so `k` here is the number of other points.
Eigen::MatrixXd knn_affinity(std::span<const double> pts, std::size_t n, std::size_t dim, std::size_t k) {
  std::vector<double> d2(n * n);
  kernels::pairwise_squared_distances(pts, dim, d2);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::swap(idx[i], idx.back());
    idx.pop_back();
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = d2[i * n + a];
                        const double db = d2[i * n + b];
                        return da < db || (da == db && a < b);
                      });
    for (std::size_t t = 0; t < k; ++t) {
      const auto j = static_cast<Eigen::Index>(idx[t]);
      w(static_cast<Eigen::Index>(i), j) = 1.0;
      w(j, static_cast<Eigen::Index>(i)) = 1.0;
    }
    idx.resize(n);
  }
  return w;
}

std::size_t count_components(const Eigen::MatrixXd& w) {
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack;
  std::size_t components = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v] && w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) != 0.0) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

}  // namespace

Partition spectral(const DataMatrix& d, int c, std::uint64_t seed, const SpectralParams& params) {
  const std::size_t n = d.rows();
  const std::size_t dim = d.cols();
  if (c < 1 || static_cast<std::size_t>(c) > n) {
    throw PartitionError("spectral: cluster count " + std::to_string(c) + " outside [1, " + std::to_string(n) + "]");
  }
  if (n < 2) return Partition::from_labels(std::vector<int>(n, 0), c);

  const auto order = canonical_row_order(d);
  std::vector<double> pts;
  pts.reserve(n * dim);
  for (auto i : order) {
    const auto r = d.row(i);
    pts.insert(pts.end(), r.begin(), r.end());
  }

  const std::size_t k = std::min(static_cast<std::size_t>(params.neighbors) - 1, n - 1);
  const Eigen::MatrixXd w = knn_affinity(pts, n, dim, k);
  const auto components = count_components(w);
  if (components > static_cast<std::size_t>(c)) {
    throw PartitionError("spectral: affinity graph has " + std::to_string(components) +
                         " connected components, more than the " + std::to_string(c) + " requested clusters");
  }

  const Eigen::VectorXd inv_sqrt_deg = w.rowwise().sum().array().rsqrt();
  const Eigen::Index nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd lap = -(inv_sqrt_deg.asDiagonal() * w * inv_sqrt_deg.asDiagonal());
  lap.diagonal().array() += 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw PartitionError("spectral: eigendecomposition failed");
  const Eigen::MatrixXd vecs = solver.eigenvectors().leftCols(c);
  const Eigen::VectorXd vals = solver.eigenvalues().head(c);
  const double residual = (lap * vecs - vecs * vals.asDiagonal()).cwiseAbs().maxCoeff();
  if (!(residual <= params.eigen_tolerance)) {
    throw PartitionError("spectral: eigen residual " + std::to_string(residual) + " exceeds tolerance " +
                         std::to_string(params.eigen_tolerance));
  }

  std::vector<double> embedding(n * static_cast<std::size_t>(c));
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double norm = vecs.row(i).norm();
    for (Eigen::Index j = 0; j < c; ++j) {
      embedding[static_cast<std::size_t>(i * c + j)] = norm > 0.0 ? vecs(i, j) / norm : 0.0;
    }
  }

  auto run = detail::lloyd(embedding, static_cast<std::size_t>(c), c, seed, params.embedding);
  std::vector<int> raw(n);
  for (std::size_t t = 0; t < n; ++t) raw[order[t]] = run.labels[t];
  auto part = Partition::from_labels(std::move(raw), c);
  part.converged = run.converged;
  if (!run.converged) part.warnings.push_back("spectral: embedding k-means did not converge");
  if (part.has_empty_cluster()) part.warnings.push_back("spectral: embedding k-means produced an empty cluster");
  return part;
}

}  // namespace threeec
