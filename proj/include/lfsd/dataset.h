// Copyright 2026 The lfsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFSD_DATASET_H_
#define LFSD_DATASET_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "lfsd/cell.h"

namespace lfsd {

struct Column {
  std::string name;
  std::vector<Cell> cells;

  friend bool operator==(const Column&, const Column&) = default;
};

// In-memory columnar table. All columns have the same length.
class Dataset {
 public:
  Dataset() = default;

  // Fails if column lengths differ or names repeat.
  static absl::StatusOr<Dataset> FromColumns(std::vector<Column> columns);

  size_t row_count() const { return columns_.empty() ? 0 : columns_[0].cells.size(); }
  size_t column_count() const { return columns_.size(); }

  std::span<const Column> columns() const { return columns_; }
  const Column& column(size_t i) const { return columns_[i]; }
  Column& mutable_column(size_t i) { return columns_[i]; }

  // Index of the column named `name`, or -1.
  int FindColumn(std::string_view name) const;

  std::vector<std::string> ColumnNames() const;

  absl::Status AddColumn(Column column);
  void InsertColumn(size_t position, Column column);
  void RemoveColumn(size_t index);
  void RenameColumn(size_t index, std::string name) { columns_[index].name = std::move(name); }

  // Rows in the order given by `rows`.
  Dataset SelectRows(std::span<const size_t> rows) const;

  // All rows except those whose (0-based) index is in `rows`.
  Dataset DropRows(std::span<const size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Column> columns_;
};

}  // namespace lfsd

#endif  // LFSD_DATASET_H_
