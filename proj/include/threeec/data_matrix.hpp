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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace threeec {

using RowId = std::string;

/**
 * Immutable n x p matrix of finite observations stored row-major.
 *
 * Every row carries a stable identifier tracing it back to the original
 * input, so row subsets produced during recursive partitioning can always
 * be mapped back onto the rows of the root matrix.
 */
class DataMatrix {
 public:
  /// Validates shape, finiteness, and id uniqueness; throws DataError on violation.
  DataMatrix(std::vector<double> values, std::size_t rows, std::size_t cols,
             std::vector<RowId> row_ids, std::vector<std::string> column_names = {});

  /// Convenience constructor that generates ids "0".."n-1".
  static DataMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

  const std::vector<RowId>& row_ids() const noexcept { return row_ids_; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  std::vector<double> values_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RowId> row_ids_;
  std::vector<std::string> column_names_;
};

/**
 * Assignment of each row of a matrix to one of `clusters` groups.
 *
 * Labels are canonical: cluster ids are numbered by first appearance in row
 * order. Empty clusters only appear when a partitioner collapsed, and
 * `cluster_sizes` then reports the zero.
 */
struct Partition {
  std::vector<int> labels;
  int clusters = 0;
  std::vector<std::size_t> cluster_sizes;
  bool converged = true;
  std::vector<std::string> warnings;

  /// Builds a partition from raw labels, canonicalizing ids. Throws DataError if a label is out of range.
  static Partition from_labels(std::vector<int> raw_labels, int clusters);

  bool has_empty_cluster() const noexcept;
  std::size_t smallest_cluster() const noexcept;
  /// Row positions belonging to cluster `k`, in row order.
  std::vector<std::size_t> members(int k) const;
  /// FNV-1a hash of the label vector; used to check partition identity.
  std::uint64_t fingerprint() const noexcept;
};

/// Renumbers labels by order of first appearance; never-seen ids are placed after all seen ones.
std::vector<int> canonicalize_labels(std::span<const int> labels, int clusters);

struct CsvOptions {
  bool has_header = true;
  std::optional<std::string> id_column;
};

/// Parses a comma-separated numeric file. Throws DataError naming the offending row and column.
DataMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
/// Same as load_csv but reads from an in-memory buffer; `source` names it in error messages.
DataMatrix parse_csv(std::string_view text, const CsvOptions& options = {},
                     std::string_view source = "<memory>");

/// Rows at the given positions, preserving their original ids. Empty or invalid selections throw.
DataMatrix subset(const DataMatrix& m, std::span<const std::size_t> positions);

struct Standardized {
  DataMatrix matrix;
  /// Zero-variance columns, left as all zeros.
  std::vector<std::size_t> constant_columns;
};

/// Column-wise (x - mean) / std with the population (1/n) variance. Requires n >= 2.
Standardized standardize(const DataMatrix& m);

}  // namespace threeec
