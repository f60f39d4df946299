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

// Typed description of a table: inference from data, validation of data
// against a schema, and structural diffs between an original and a synthetic
// schema.

#ifndef LFSD_SCHEMA_H_
#define LFSD_SCHEMA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/affix.h"
#include "lfsd/cell.h"
#include "lfsd/dataset.h"

namespace lfsd {

enum class ColumnKind { kCategorical, kNumeric, kDate };

std::string_view ColumnKindName(ColumnKind kind);
std::optional<ColumnKind> ParseColumnKind(std::string_view name);

// Inclusive range in column units. Dates use days since 1970-01-01.
struct ValueRange {
  double min = 0;
  double max = 0;

  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

// Decimal places beyond which inferred numeric precision is capped and the
// column flagged for review.
inline constexpr int kMaxInferredDecimals = 10;

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;

  // Categorical only, in first-appearance order.
  std::vector<std::string> categories;

  // Numeric and date only.
  std::optional<ValueRange> range;

  // Numeric precision: decimal places, optionally refined by a rounding unit
  // (unit 1000 means values are whole thousands and decimals is 0).
  int decimals = 0;
  std::optional<double> unit;
  bool precision_flagged = false;

  // Date precision.
  DateGranularity granularity = DateGranularity::kDay;

  bool missing_allowed = false;
  // Populated only when inferred from data.
  std::optional<double> missing_rate;

  // Spacing of the value grid implied by the precision.
  double GridUnit() const;
  // Human-readable precision, e.g. "2 dp", "unit 1000", "month".
  std::string PrecisionLabel() const;
  bool SamePrecision(const ColumnSpec& other) const;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

enum class Provenance { kInferredFromData, kAuthoredMetadata };

std::string_view ProvenanceName(Provenance p);
std::optional<Provenance> ParseProvenance(std::string_view name);

struct TableSchema {
  std::vector<ColumnSpec> columns;
  size_t row_count = 0;
  Provenance provenance = Provenance::kInferredFromData;
  bool is_synthetic = false;
  // Pointer to the metadata of the data this schema was derived from.
  std::string source_metadata_reference;

  const ColumnSpec* FindColumn(std::string_view name) const;
  ColumnSpec* FindColumn(std::string_view name);

  // Checks the type-level invariants (unique names, ordered ranges,
  // non-empty duplicate-free categories, rates in [0,1]).
  absl::Status CheckInvariants() const;

  friend bool operator==(const TableSchema&, const TableSchema&) = default;
};

absl::StatusOr<TableSchema> InferSchema(const Dataset& data);

// Infers a single column's spec. Exposed for callers that need the observed
// precision of one column.
absl::StatusOr<ColumnSpec> InferColumnSpec(const Column& column);

enum class ViolationKind {
  kUnknownColumn,
  kKindMismatch,
  kUnknownCategory,
  kOutOfRange,
  kExcessPrecision,
  kUnexpectedMissing,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string column;
  // Absent for column-level violations.
  std::optional<size_t> row;
  std::string detail;
};

// Every cell or column in `data` that does not conform to `schema`. Data
// columns are matched to schema columns by exact name, then by stripping
// `affix` when one is given. Schema columns absent from the data are not
// violations, since synthetic data may carry a subset of the columns.
std::vector<Violation> Validate(const Dataset& data, const TableSchema& schema,
                                const std::optional<AffixRule>& affix = std::nullopt);

// True if `cell` conforms to `spec` (ignores missingness).
bool CellConforms(const Cell& cell, const ColumnSpec& spec);

struct ColumnDiff {
  std::string original_name;
  ColumnKind kind = ColumnKind::kCategorical;
  // Absent when the column was not carried into the synthetic data, which is
  // permitted.
  std::optional<std::string> synth_name;

  // Original label -> pooled label.
  std::map<std::string, std::string> pooled_categories;
  // Label changes that are not a simple pooling into one new label.
  std::vector<std::string> removed_categories;
  std::vector<std::string> added_categories;

  std::optional<std::pair<ColumnKind, ColumnKind>> kind_change;
  std::optional<std::pair<std::string, std::string>> precision_change;
  std::optional<std::pair<std::optional<ValueRange>, std::optional<ValueRange>>> range_change;
  // (original has missing, synthetic has missing)
  std::optional<std::pair<bool, bool>> missingness_mismatch;

  bool missing_in_synth() const { return !synth_name.has_value(); }
  bool renamed() const { return synth_name && *synth_name != original_name; }
  // Anything beyond the affix mapping.
  bool HasStructuralDifference() const;
};

struct SchemaDiff {
  // One entry per original column, in original order.
  std::vector<ColumnDiff> columns;

  bool HasStructuralDifferences() const;
  const ColumnDiff* Find(std::string_view original_name) const;
};

absl::StatusOr<SchemaDiff> DiffSchemas(const TableSchema& original, const TableSchema& synth,
                                       const AffixRule& affix);

}  // namespace lfsd

#endif  // LFSD_SCHEMA_H_
