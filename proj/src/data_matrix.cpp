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

#include "threeec/data_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "threeec/errors.hpp"

namespace threeec {

DataMatrix::DataMatrix(std::vector<double> values, std::size_t rows, std::size_t cols,
                       std::vector<RowId> row_ids, std::vector<std::string> column_names)
    : values_(std::move(values)),
      rows_(rows),
      cols_(cols),
      row_ids_(std::move(row_ids)),
      column_names_(std::move(column_names)) {
  if (rows_ == 0 || cols_ == 0) throw DataError("data matrix must have at least one row and one column");
  if (values_.size() != rows_ * cols_) throw DataError("data matrix value count does not match its shape");
  if (row_ids_.size() != rows_) throw DataError("data matrix needs exactly one id per row");
  if (!column_names_.empty() && column_names_.size() != cols_)
    throw DataError("data matrix column names do not match its width");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DataError("non-finite value at row " + std::to_string(k / cols_ + 1) + ", column " +
                      std::to_string(k % cols_ + 1));
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(rows_);
  for (const auto& id : row_ids_) {
    if (!seen.insert(id).second) throw DataError("duplicate row id '" + id + "'");
  }
}

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("data matrix must have at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  std::vector<RowId> ids;
  ids.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DataError("ragged row " + std::to_string(i + 1));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
    ids.push_back(std::to_string(i));
  }
  return DataMatrix(std::move(values), rows.size(), cols, std::move(ids));
}

std::vector<int> canonicalize_labels(std::span<const int> labels, int clusters) {
  std::vector<int> remap(static_cast<std::size_t>(clusters), -1);
  int next = 0;
  for (int l : labels) {
    if (l < 0 || l >= clusters) throw DataError("label " + std::to_string(l) + " outside [0, c)");
    if (remap[l] < 0) remap[l] = next++;
  }
  for (auto& r : remap) {
    if (r < 0) r = next++;
  }
  std::vector<int> out(labels.size());
  std::transform(labels.begin(), labels.end(), out.begin(), [&](int l) { return remap[l]; });
  return out;
}

Partition Partition::from_labels(std::vector<int> raw_labels, int clusters) {
  if (clusters < 1) throw DataError("partition needs at least one cluster");
  Partition p;
  p.labels = canonicalize_labels(raw_labels, clusters);
  p.clusters = clusters;
  p.cluster_sizes.assign(static_cast<std::size_t>(clusters), 0);
  for (int l : p.labels) ++p.cluster_sizes[l];
  return p;
}

bool Partition::has_empty_cluster() const noexcept {
  return std::find(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0}) != cluster_sizes.end();
}

std::size_t Partition::smallest_cluster() const noexcept {
  if (cluster_sizes.empty()) return 0;
  return *std::min_element(cluster_sizes.begin(), cluster_sizes.end());
}

std::vector<std::size_t> Partition::members(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == k) out.push_back(i);
  }
  return out;
}

std::uint64_t Partition::fingerprint() const noexcept {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(clusters));
  for (int l : labels) mix(static_cast<std::uint64_t>(l));
  return h;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  // Trailing blank lines are not rows.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

}  // namespace

DataMatrix parse_csv(std::string_view text, const CsvOptions& options, std::string_view source) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  const auto lines = split_lines(text);
  const std::string where(source);
  if (lines.empty()) throw DataError(where + ": empty file");

  std::size_t first_data = 0;
  std::vector<std::string> header;
  if (options.has_header) {
    for (auto f : split_fields(lines[0])) header.emplace_back(f);
    first_data = 1;
  }
  if (lines.size() <= first_data) throw DataError(where + ": no data rows");

  const std::size_t width = options.has_header ? header.size() : split_fields(lines[first_data]).size();
  std::optional<std::size_t> id_col;
  if (options.id_column) {
    if (!options.has_header) throw DataError(where + ": id column requires a header row");
    const auto it = std::find(header.begin(), header.end(), *options.id_column);
    if (it == header.end()) throw DataError(where + ": id column '" + *options.id_column + "' not found");
    id_col = static_cast<std::size_t>(it - header.begin());
  }
  const std::size_t cols = width - (id_col ? 1 : 0);
  if (cols == 0) throw DataError(where + ": no numeric columns");

  auto column_label = [&](std::size_t j) {
    return options.has_header ? header[j] : std::to_string(j + 1);
  };

  std::vector<double> values;
  std::vector<RowId> ids;
  std::size_t row = 0;
  for (std::size_t li = first_data; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    ++row;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != width) {
      throw DataError(where + ": row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(width));
    }
    for (std::size_t j = 0; j < width; ++j) {
      if (id_col && j == *id_col) {
        ids.emplace_back(fields[j]);
        continue;
      }
      double v = 0.0;
      const auto f = fields[j];
      const auto* begin = f.data();
      const auto* end = f.data() + f.size();
      if (!f.empty() && *begin == '+') ++begin;
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (f.empty() || ec != std::errc() || ptr != end) {
        throw DataError(where + ": cannot parse '" + std::string(f) + "' as a number at row " +
                        std::to_string(row) + ", column " + column_label(j));
      }
      if (!std::isfinite(v)) {
        throw DataError(where + ": non-finite value at row " + std::to_string(row) + ", column " +
                        column_label(j));
      }
      values.push_back(v);
    }
    if (!id_col) ids.push_back(std::to_string(row - 1));
  }

  std::vector<std::string> names;
  if (options.has_header) {
    for (std::size_t j = 0; j < width; ++j) {
      if (!id_col || j != *id_col) names.push_back(header[j]);
    }
  }
  return DataMatrix(std::move(values), row, cols, std::move(ids), std::move(names));
}

DataMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options, path.string());
}

DataMatrix subset(const DataMatrix& m, std::span<const std::size_t> positions) {
  if (positions.empty()) throw DataError("empty row subset");
  std::vector<char> used(m.rows(), 0);
  std::vector<double> values;
  values.reserve(positions.size() * m.cols());
  std::vector<RowId> ids;
  ids.reserve(positions.size());
  for (auto pos : positions) {
    if (pos >= m.rows()) {
      throw DataError("row position " + std::to_string(pos) + " out of range for " +
                      std::to_string(m.rows()) + " rows");
    }
    if (used[pos]) throw DataError("row position " + std::to_string(pos) + " selected twice");
    used[pos] = 1;
    const auto r = m.row(pos);
    values.insert(values.end(), r.begin(), r.end());
    ids.push_back(m.row_ids()[pos]);
  }
  return DataMatrix(std::move(values), positions.size(), m.cols(), std::move(ids), m.column_names());
}

Standardized standardize(const DataMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t p = m.cols();
  if (n < 2) throw DataError("standardize needs at least two rows");
  std::vector<double> values(m.values().begin(), m.values().end());
  std::vector<std::size_t> constant;
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += m.at(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = m.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      constant.push_back(j);
      for (std::size_t i = 0; i < n; ++i) values[i * p + j] = 0.0;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) values[i * p + j] = (m.at(i, j) - mean) / sd;
  }
  return {DataMatrix(std::move(values), n, p, m.row_ids(), m.column_names()), std::move(constant)};
}

}  // namespace threeec
