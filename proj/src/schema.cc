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

#include "lfsd/schema.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

// Relative tolerance when testing whether a value sits on a precision grid.
constexpr double kGridTolerance = 1e-9;

std::string_view CellKindName(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return "categorical";
  if (std::holds_alternative<Number>(c)) return "numeric";
  if (std::holds_alternative<Date>(c)) return "date";
  return "missing";
}

bool CellHasKind(const Cell& c, ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kCategorical:
      return std::holds_alternative<std::string>(c);
    case ColumnKind::kNumeric:
      return std::holds_alternative<Number>(c);
    case ColumnKind::kDate:
      return std::holds_alternative<Date>(c);
  }
  return false;
}

bool OnGrid(double value, double unit) {
  const double q = value / unit;
  return std::fabs(q - std::round(q)) <= kGridTolerance * std::max(1.0, std::fabs(q));
}

bool InRange(double v, const std::optional<ValueRange>& range) {
  return !range || (v >= range->min && v <= range->max);
}

// Granularity order from finest to coarsest.
int GranularityRank(DateGranularity g) {
  switch (g) {
    case DateGranularity::kDay:
      return 0;
    case DateGranularity::kMonth:
      return 1;
    case DateGranularity::kYear:
      return 2;
  }
  return 0;
}

std::string RangeText(const ColumnSpec& spec) {
  if (!spec.range) return "unbounded";
  if (spec.kind == ColumnKind::kDate) {
    return StrCat("[", FormatDate(Date{static_cast<int64_t>(spec.range->min)}), ", ",
                        FormatDate(Date{static_cast<int64_t>(spec.range->max)}), "]");
  }
  return absl::StrFormat("[%g, %g]", spec.range->min, spec.range->max);
}

}  // namespace

std::string_view ColumnKindName(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kDate:
      return "date";
  }
  return "categorical";
}

std::optional<ColumnKind> ParseColumnKind(std::string_view name) {
  if (name == "categorical") return ColumnKind::kCategorical;
  if (name == "numeric") return ColumnKind::kNumeric;
  if (name == "date") return ColumnKind::kDate;
  return std::nullopt;
}

std::string_view ProvenanceName(Provenance p) {
  return p == Provenance::kInferredFromData ? "inferred_from_data" : "authored_metadata";
}

std::optional<Provenance> ParseProvenance(std::string_view name) {
  if (name == "inferred_from_data") return Provenance::kInferredFromData;
  if (name == "authored_metadata") return Provenance::kAuthoredMetadata;
  return std::nullopt;
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kUnknownColumn:
      return "UnknownColumn";
    case ViolationKind::kKindMismatch:
      return "KindMismatch";
    case ViolationKind::kUnknownCategory:
      return "UnknownCategory";
    case ViolationKind::kOutOfRange:
      return "OutOfRange";
    case ViolationKind::kExcessPrecision:
      return "ExcessPrecision";
    case ViolationKind::kUnexpectedMissing:
      return "UnexpectedMissing";
  }
  return "";
}

double ColumnSpec::GridUnit() const {
  if (unit) return *unit;
  return std::pow(10.0, -decimals);
}

std::string ColumnSpec::PrecisionLabel() const {
  switch (kind) {
    case ColumnKind::kCategorical:
      return "n/a";
    case ColumnKind::kNumeric:
      if (unit) return StrCat("unit ", FormatNumber(*unit, DecimalsOfUnit(*unit)));
      return StrCat(decimals, " dp");
    case ColumnKind::kDate:
      return std::string(GranularityName(granularity));
  }
  return "";
}

bool ColumnSpec::SamePrecision(const ColumnSpec& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case ColumnKind::kCategorical:
      return true;
    case ColumnKind::kNumeric:
      return decimals == other.decimals && unit == other.unit;
    case ColumnKind::kDate:
      return granularity == other.granularity;
  }
  return true;
}

const ColumnSpec* TableSchema::FindColumn(std::string_view name) const {
  for (const ColumnSpec& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ColumnSpec* TableSchema::FindColumn(std::string_view name) {
  for (ColumnSpec& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

absl::Status TableSchema::CheckInvariants() const {
  std::set<std::string> names;
  for (const ColumnSpec& c : columns) {
    if (c.name.empty()) return absl::InvalidArgumentError("column with empty name");
    if (!names.insert(c.name).second) {
      return absl::InvalidArgumentError(StrCat("duplicate column name '", c.name, "'"));
    }
    if (c.range && c.range->min > c.range->max) {
      return MakeError(ErrorKind::kDegenerateRange,
                       StrCat("column '", c.name, "': range min > max"));
    }
    if (c.kind == ColumnKind::kCategorical) {
      // An all-missing column has nothing to list.
      const bool all_missing = c.missing_rate && *c.missing_rate >= 1.0;
      if (c.categories.empty() && !all_missing) {
        return absl::InvalidArgumentError(
            StrCat("categorical column '", c.name, "' has no categories"));
      }
      std::set<std::string> seen;
      for (const std::string& label : c.categories) {
        if (!seen.insert(label).second) {
          return absl::InvalidArgumentError(
              StrCat("column '", c.name, "': duplicate category '", label, "'"));
        }
      }
    }
    if (c.decimals < 0) {
      return absl::InvalidArgumentError(StrCat("column '", c.name, "': negative precision"));
    }
    if (c.unit && !(*c.unit > 0)) {
      return absl::InvalidArgumentError(StrCat("column '", c.name, "': unit must be > 0"));
    }
    if (c.missing_rate) {
      if (*c.missing_rate < 0 || *c.missing_rate > 1) {
        return absl::InvalidArgumentError(
            StrCat("column '", c.name, "': missing_rate outside [0,1]"));
      }
      if (*c.missing_rate > 0 && !c.missing_allowed) {
        return absl::InvalidArgumentError(
            StrCat("column '", c.name, "': missing_rate > 0 but missing not allowed"));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ColumnSpec> InferColumnSpec(const Column& column) {
  ColumnSpec spec;
  spec.name = column.name;
  size_t n_missing = 0;
  std::optional<ColumnKind> kind;
  for (size_t r = 0; r < column.cells.size(); ++r) {
    const Cell& cell = column.cells[r];
    if (IsMissing(cell)) {
      ++n_missing;
      continue;
    }
    ColumnKind k = std::holds_alternative<std::string>(cell) ? ColumnKind::kCategorical
                   : std::holds_alternative<Number>(cell)    ? ColumnKind::kNumeric
                                                             : ColumnKind::kDate;
    if (kind && *kind != k) {
      return MakeError(ErrorKind::kMixedKindColumn,
                       StrCat("column '", column.name, "' row ", r, " is ",
                                    CellKindName(cell), " but earlier cells are ",
                                    ColumnKindName(*kind)));
    }
    kind = k;
  }
  spec.kind = kind.value_or(ColumnKind::kCategorical);

  std::set<std::string> seen;
  int finest = GranularityRank(DateGranularity::kYear);
  for (const Cell& cell : column.cells) {
    if (IsMissing(cell)) continue;
    switch (spec.kind) {
      case ColumnKind::kCategorical: {
        const auto& label = std::get<std::string>(cell);
        if (seen.insert(label).second) spec.categories.push_back(label);
        break;
      }
      case ColumnKind::kNumeric: {
        const Number& n = std::get<Number>(cell);
        spec.decimals = std::max(spec.decimals, n.decimals);
        break;
      }
      case ColumnKind::kDate:
        finest = std::min(finest, GranularityRank(std::get<Date>(cell).Granularity()));
        break;
    }
    if (spec.kind != ColumnKind::kCategorical) {
      const double v = *NumericValue(cell);
      if (!spec.range) {
        spec.range = ValueRange{v, v};
      } else {
        spec.range->min = std::min(spec.range->min, v);
        spec.range->max = std::max(spec.range->max, v);
      }
    }
  }
  if (spec.decimals > kMaxInferredDecimals) {
    spec.decimals = kMaxInferredDecimals;
    spec.precision_flagged = true;
  }
  if (spec.kind == ColumnKind::kDate) {
    spec.granularity = finest == 0   ? DateGranularity::kDay
                       : finest == 1 ? DateGranularity::kMonth
                                     : DateGranularity::kYear;
  }
  spec.missing_allowed = n_missing > 0;
  spec.missing_rate = column.cells.empty()
                          ? 0.0
                          : static_cast<double>(n_missing) / static_cast<double>(column.cells.size());
  return spec;
}

absl::StatusOr<TableSchema> InferSchema(const Dataset& data) {
  if (data.column_count() == 0 || data.row_count() == 0) {
    return MakeError(ErrorKind::kEmptyDataset,
                     StrCat("dataset has ", data.column_count(), " columns and ",
                                  data.row_count(), " rows"));
  }
  TableSchema schema;
  schema.row_count = data.row_count();
  schema.provenance = Provenance::kInferredFromData;
  schema.is_synthetic = false;
  for (const Column& column : data.columns()) {
    LFSD_ASSIGN_OR_RETURN(ColumnSpec spec, InferColumnSpec(column));
    schema.columns.push_back(std::move(spec));
  }
  return schema;
}

bool CellConforms(const Cell& cell, const ColumnSpec& spec) {
  if (IsMissing(cell)) return true;
  if (!CellHasKind(cell, spec.kind)) return false;
  switch (spec.kind) {
    case ColumnKind::kCategorical: {
      const auto& label = std::get<std::string>(cell);
      return std::find(spec.categories.begin(), spec.categories.end(), label) !=
             spec.categories.end();
    }
    case ColumnKind::kNumeric: {
      const double v = std::get<Number>(cell).value;
      return InRange(v, spec.range) && OnGrid(v, spec.GridUnit());
    }
    case ColumnKind::kDate: {
      const Date d = std::get<Date>(cell);
      return InRange(static_cast<double>(d.days), spec.range) &&
             d.Truncate(spec.granularity) == d;
    }
  }
  return false;
}

std::vector<Violation> Validate(const Dataset& data, const TableSchema& schema,
                                const std::optional<AffixRule>& affix) {
  std::vector<Violation> out;
  for (const Column& column : data.columns()) {
    const ColumnSpec* spec = schema.FindColumn(column.name);
    if (!spec && affix) {
      if (auto stripped = affix->Strip(column.name)) spec = schema.FindColumn(*stripped);
    }
    if (!spec) {
      out.push_back({ViolationKind::kUnknownColumn, column.name, std::nullopt,
                     "column not described by the schema"});
      continue;
    }
    for (size_t r = 0; r < column.cells.size(); ++r) {
      const Cell& cell = column.cells[r];
      if (IsMissing(cell)) {
        if (!spec->missing_allowed) {
          out.push_back({ViolationKind::kUnexpectedMissing, column.name, r,
                         "missing value where none are allowed"});
        }
        continue;
      }
      if (!CellHasKind(cell, spec->kind)) {
        out.push_back({ViolationKind::kKindMismatch, column.name, r,
                       StrCat(CellKindName(cell), " cell in ",
                                    ColumnKindName(spec->kind), " column")});
        continue;
      }
      switch (spec->kind) {
        case ColumnKind::kCategorical:
          if (!CellConforms(cell, *spec)) {
            out.push_back({ViolationKind::kUnknownCategory, column.name, r,
                           StrCat("'", std::get<std::string>(cell), "' is not a category")});
          }
          break;
        case ColumnKind::kNumeric: {
          const double v = std::get<Number>(cell).value;
          if (!InRange(v, spec->range)) {
            out.push_back({ViolationKind::kOutOfRange, column.name, r,
                           StrCat(RenderCell(cell), " outside ", RangeText(*spec))});
          }
          if (!OnGrid(v, spec->GridUnit())) {
            out.push_back({ViolationKind::kExcessPrecision, column.name, r,
                           StrCat(RenderCell(cell), " finer than ",
                                        spec->PrecisionLabel())});
          }
          break;
        }
        case ColumnKind::kDate: {
          const Date d = std::get<Date>(cell);
          if (!InRange(static_cast<double>(d.days), spec->range)) {
            out.push_back({ViolationKind::kOutOfRange, column.name, r,
                           StrCat(FormatDate(d), " outside ", RangeText(*spec))});
          }
          if (d.Truncate(spec->granularity) != d) {
            out.push_back({ViolationKind::kExcessPrecision, column.name, r,
                           StrCat(FormatDate(d), " finer than ",
                                        GranularityName(spec->granularity))});
          }
          break;
        }
      }
    }
  }
  return out;
}

bool ColumnDiff::HasStructuralDifference() const {
  return missing_in_synth() || !pooled_categories.empty() || !removed_categories.empty() ||
         !added_categories.empty() || kind_change || precision_change || range_change ||
         missingness_mismatch;
}

bool SchemaDiff::HasStructuralDifferences() const {
  return std::any_of(columns.begin(), columns.end(),
                     [](const ColumnDiff& c) { return c.HasStructuralDifference(); });
}

const ColumnDiff* SchemaDiff::Find(std::string_view original_name) const {
  for (const ColumnDiff& c : columns) {
    if (c.original_name == original_name) return &c;
  }
  return nullptr;
}

absl::StatusOr<SchemaDiff> DiffSchemas(const TableSchema& original, const TableSchema& synth,
                                       const AffixRule& affix) {
  // original name -> synthetic spec
  std::map<std::string, const ColumnSpec*> mapped;
  for (const ColumnSpec& s : synth.columns) {
    std::optional<std::string> name;
    if (auto stripped = affix.Strip(s.name); stripped && original.FindColumn(*stripped)) {
      name = *stripped;
    } else if (original.FindColumn(s.name)) {
      name = s.name;
    }
    if (!name) {
      return MakeError(ErrorKind::kSynthColumnNotInOriginal,
                       StrCat("synthetic column '", s.name,
                                    "' has no counterpart in the original (affix ",
                                    affix.ToString(), ")"));
    }
    mapped[*name] = &s;
  }

  SchemaDiff diff;
  for (const ColumnSpec& o : original.columns) {
    ColumnDiff d;
    d.original_name = o.name;
    d.kind = o.kind;
    auto it = mapped.find(o.name);
    if (it == mapped.end()) {
      diff.columns.push_back(std::move(d));
      continue;
    }
    const ColumnSpec& s = *it->second;
    d.synth_name = s.name;
    if (o.kind != s.kind) {
      d.kind_change = std::make_pair(o.kind, s.kind);
    } else if (o.kind == ColumnKind::kCategorical) {
      const std::set<std::string> orig(o.categories.begin(), o.categories.end());
      const std::set<std::string> syn(s.categories.begin(), s.categories.end());
      for (const std::string& label : o.categories) {
        if (!syn.contains(label)) d.removed_categories.push_back(label);
      }
      for (const std::string& label : s.categories) {
        if (!orig.contains(label)) d.added_categories.push_back(label);
      }
      // Several labels folded into one new label is a pooling.
      if (d.added_categories.size() == 1 && !d.removed_categories.empty()) {
        for (const std::string& label : d.removed_categories) {
          d.pooled_categories[label] = d.added_categories[0];
        }
        d.removed_categories.clear();
        d.added_categories.clear();
      }
    }
    if (o.kind == s.kind && !o.SamePrecision(s)) {
      d.precision_change = std::make_pair(o.PrecisionLabel(), s.PrecisionLabel());
    }
    if (o.kind == s.kind && o.range != s.range) {
      d.range_change = std::make_pair(o.range, s.range);
    }
    if (o.missing_allowed != s.missing_allowed) {
      d.missingness_mismatch = std::make_pair(o.missing_allowed, s.missing_allowed);
    }
    diff.columns.push_back(std::move(d));
  }
  return diff;
}

}  // namespace lfsd
