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

#include "lfsd/dataset.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "lfsd/affix.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {

absl::StatusOr<Dataset> Dataset::FromColumns(std::vector<Column> columns) {
  Dataset data;
  for (Column& column : columns) {
    LFSD_RETURN_IF_ERROR(data.AddColumn(std::move(column)));
  }
  return data;
}

int Dataset::FindColumn(std::string_view name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> Dataset::ColumnNames() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const Column& c : columns_) names.push_back(c.name);
  return names;
}

absl::Status Dataset::AddColumn(Column column) {
  if (FindColumn(column.name) >= 0) {
    return absl::InvalidArgumentError(StrCat("duplicate column name '", column.name, "'"));
  }
  if (!columns_.empty() && column.cells.size() != row_count()) {
    return absl::InvalidArgumentError(StrCat("column '", column.name, "' has ",
                                                   column.cells.size(), " cells, expected ",
                                                   row_count()));
  }
  columns_.push_back(std::move(column));
  return absl::OkStatus();
}

void Dataset::InsertColumn(size_t position, Column column) {
  position = std::min(position, columns_.size());
  columns_.insert(columns_.begin() + static_cast<std::ptrdiff_t>(position), std::move(column));
}

void Dataset::RemoveColumn(size_t index) {
  columns_.erase(columns_.begin() + static_cast<std::ptrdiff_t>(index));
}

Dataset Dataset::SelectRows(std::span<const size_t> rows) const {
  Dataset out;
  out.columns_.reserve(columns_.size());
  for (const Column& c : columns_) {
    Column selected{c.name, {}};
    selected.cells.reserve(rows.size());
    for (size_t r : rows) selected.cells.push_back(c.cells[r]);
    out.columns_.push_back(std::move(selected));
  }
  return out;
}

Dataset Dataset::DropRows(std::span<const size_t> rows) const {
  const std::set<size_t> drop(rows.begin(), rows.end());
  std::vector<size_t> keep;
  keep.reserve(row_count());
  for (size_t r = 0; r < row_count(); ++r) {
    if (!drop.contains(r)) keep.push_back(r);
  }
  return SelectRows(keep);
}

std::string AffixRule::Apply(std::string_view name) const {
  return position == Position::kPrefix ? StrCat(text, name) : StrCat(name, text);
}

bool AffixRule::Matches(std::string_view name) const {
  if (name.size() <= text.size()) return false;
  return position == Position::kPrefix ? name.substr(0, text.size()) == text
                                       : name.substr(name.size() - text.size()) == text;
}

std::optional<std::string> AffixRule::Strip(std::string_view name) const {
  if (!Matches(name)) return std::nullopt;
  return position == Position::kPrefix ? std::string(name.substr(text.size()))
                                       : std::string(name.substr(0, name.size() - text.size()));
}

std::string AffixRule::ToString() const {
  return StrCat(position == Position::kPrefix ? "prefix:" : "suffix:", text);
}

std::optional<AffixRule> AffixRule::Parse(std::string_view spec) {
  const size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    // Bare text: a leading underscore reads as a suffix ("_synth"),
    // anything else as a prefix ("synth_").
    if (spec.empty()) return std::nullopt;
    return spec.front() == '_' ? Suffix(std::string(spec)) : Prefix(std::string(spec));
  }
  std::string_view where = spec.substr(0, colon);
  std::string text(spec.substr(colon + 1));
  if (text.empty()) return std::nullopt;
  if (where == "prefix") return Prefix(std::move(text));
  if (where == "suffix") return Suffix(std::move(text));
  return std::nullopt;
}

int ResolveColumn(const Dataset& data, std::string_view original_name, const AffixRule& affix) {
  const int affixed = data.FindColumn(affix.Apply(original_name));
  return affixed >= 0 ? affixed : data.FindColumn(original_name);
}

}  // namespace lfsd
