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

#include "lfsd/sdc.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

absl::StatusOr<int> FindTarget(const Dataset& data, std::string_view column) {
  const int idx = data.FindColumn(column);
  if (idx < 0) {
    return MakeError(ErrorKind::kUnknownColumn, StrCat("column '", column, "' not found"));
  }
  return idx;
}

// Recorded name, then with the affix stripped, then with it applied.
int ResolveRecorded(const Dataset& data, std::string_view name, const AffixRule& affix) {
  int idx = data.FindColumn(name);
  if (idx >= 0) return idx;
  if (std::optional<std::string> bare = affix.Strip(name)) {
    idx = data.FindColumn(*bare);
    if (idx >= 0) return idx;
  }
  return data.FindColumn(affix.Apply(name));
}

ColumnSpec* ResolveRecordedSpec(TableSchema& schema, std::string_view name,
                                const AffixRule& affix) {
  if (ColumnSpec* s = schema.FindColumn(name)) return s;
  if (std::optional<std::string> bare = affix.Strip(name)) {
    if (ColumnSpec* s = schema.FindColumn(*bare)) return s;
  }
  return schema.FindColumn(affix.Apply(name));
}

bool HasAlternative(const Column& col, size_t index) {
  return std::any_of(col.cells.begin(), col.cells.end(),
                     [&](const Cell& c) { return c.index() == index; });
}

constexpr size_t kLabelIndex = 1;
constexpr size_t kNumberIndex = 2;
constexpr size_t kDateIndex = 3;

absl::Status RequireOrdered(const Column& col) {
  if (HasAlternative(col, kLabelIndex)) {
    return MakeError(ErrorKind::kNotNumericOrDate,
                     StrCat("column '", col.name, "' is categorical"));
  }
  return absl::OkStatus();
}

absl::Status RequireCategorical(const Column& col) {
  if (HasAlternative(col, kNumberIndex) || HasAlternative(col, kDateIndex)) {
    return MakeError(ErrorKind::kNotCategorical,
                     StrCat("column '", col.name, "' is not categorical"));
  }
  return absl::OkStatus();
}

MitigationAction MakeAction(std::string column, MitigationParams params, bool changed) {
  MitigationAction a;
  a.columns = {std::move(column)};
  a.params = std::move(params);
  a.changed = changed;
  return a;
}

// Relabels every label in `pooled` as `label`.
bool RelabelInto(Column& col, const std::set<std::string>& pooled, const std::string& label) {
  bool changed = false;
  for (Cell& c : col.cells) {
    std::string* s = std::get_if<std::string>(&c);
    if (s != nullptr && *s != label && pooled.contains(*s)) {
      *s = label;
      changed = true;
    }
  }
  return changed;
}

int CoarserRank(DateGranularity g) {
  return g == DateGranularity::kDay ? 0 : g == DateGranularity::kMonth ? 1 : 2;
}

// Smallest power-of-ten unit at or below `unit` as a decimal count, when
// `unit` is itself such a power.
std::optional<int> PowerOfTenDecimals(double unit) {
  const int d = DecimalsOfUnit(unit);
  if (std::fabs(unit - std::pow(10.0, -d)) <= 1e-12 * unit) return d;
  return std::nullopt;
}

absl::StatusOr<Dataset> DropRecorded(const Dataset& data, const RemovalParams& p) {
  for (size_t r : p.removed_rows) {
    if (r >= data.row_count()) {
      return MakeError(ErrorKind::kStaleReport,
                       StrCat("recorded row ", r, " is outside the data (",
                                    data.row_count(), " rows)"));
    }
  }
  return data.DropRows(p.removed_rows);
}

}  // namespace

std::string_view MitigationKindName(MitigationKind kind) {
  switch (kind) {
    case MitigationKind::kReducePrecision:
      return "reduce_precision";
    case MitigationKind::kTopBottomCode:
      return "top_bottom_code";
    case MitigationKind::kPoolCategories:
      return "pool_categories";
    case MitigationKind::kRemoveRecords:
      return "remove_records";
    case MitigationKind::kCoarsenKey:
      return "coarsen_key";
  }
  return "";
}

std::optional<MitigationKind> ParseMitigationKind(std::string_view name) {
  for (MitigationKind k :
       {MitigationKind::kReducePrecision, MitigationKind::kTopBottomCode,
        MitigationKind::kPoolCategories, MitigationKind::kRemoveRecords,
        MitigationKind::kCoarsenKey}) {
    if (MitigationKindName(k) == name) return k;
  }
  return std::nullopt;
}

MitigationKind MitigationAction::kind() const {
  return static_cast<MitigationKind>(params.index());
}

CategoryCounts CountCategories(const Column& column) {
  CategoryCounts counts;
  for (const Cell& c : column.cells) {
    if (const std::string* s = std::get_if<std::string>(&c)) ++counts[*s];
  }
  return counts;
}

absl::StatusOr<Mitigated> ReducePrecision(const Dataset& data, std::string_view column,
                                          double unit) {
  if (!(unit > 0)) return MakeError(ErrorKind::kConfigError, "precision unit must be > 0");
  LFSD_ASSIGN_OR_RETURN(int idx, FindTarget(data, column));
  LFSD_RETURN_IF_ERROR(RequireOrdered(data.column(idx)));
  if (HasAlternative(data.column(idx), kDateIndex)) {
    return MakeError(ErrorKind::kNotNumericOrDate,
                     StrCat("date column '", column, "' takes a granularity, not a unit"));
  }
  Dataset out = data;
  bool changed = false;
  const int unit_decimals = DecimalsOfUnit(unit);
  for (Cell& c : out.mutable_column(idx).cells) {
    Number* n = std::get_if<Number>(&c);
    if (n == nullptr) continue;
    const Number rounded{RoundToUnit(n->value, unit), std::min(n->decimals, unit_decimals)};
    if (!(rounded == *n)) {
      *n = rounded;
      changed = true;
    }
  }
  return Mitigated{std::move(out), MakeAction(std::string(column), PrecisionParams{unit, {}},
                                              changed)};
}

absl::StatusOr<Mitigated> ReducePrecision(const Dataset& data, std::string_view column,
                                          DateGranularity granularity) {
  LFSD_ASSIGN_OR_RETURN(int idx, FindTarget(data, column));
  LFSD_RETURN_IF_ERROR(RequireOrdered(data.column(idx)));
  if (HasAlternative(data.column(idx), kNumberIndex)) {
    return MakeError(ErrorKind::kNotNumericOrDate,
                     StrCat("numeric column '", column, "' takes a unit, not a granularity"));
  }
  Dataset out = data;
  bool changed = false;
  for (Cell& c : out.mutable_column(idx).cells) {
    Date* d = std::get_if<Date>(&c);
    if (d == nullptr) continue;
    const Date t = d->Truncate(granularity);
    if (!(t == *d)) {
      *d = t;
      changed = true;
    }
  }
  return Mitigated{std::move(out),
                   MakeAction(std::string(column), PrecisionParams{{}, granularity}, changed)};
}

absl::StatusOr<CodingCuts> ComputeCodingCuts(const Column& column, const CodingMode& mode) {
  LFSD_RETURN_IF_ERROR(RequireOrdered(column));
  std::vector<double> values;
  for (const Cell& c : column.cells) {
    if (std::optional<double> v = NumericValue(c)) values.push_back(*v);
  }
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  auto nearest_rank = [&](double p) {
    const double x = std::ceil(p * static_cast<double>(n) / 100.0 - 1e-9);
    const size_t rank = static_cast<size_t>(std::clamp(x, 1.0, static_cast<double>(n)));
    return values[rank - 1];
  };

  if (mode.type == CodingMode::Type::kPercentile) {
    if (!(mode.p_low >= 0 && mode.p_high <= 100 && mode.p_low < mode.p_high)) {
      return MakeError(ErrorKind::kInvalidPercentiles,
                       StrCat("need 0 <= p_low < p_high <= 100, got (", mode.p_low, ", ",
                                    mode.p_high, ")"));
    }
    if (n == 0) return CodingCuts{};
    return CodingCuts{nearest_rank(mode.p_low), nearest_rank(mode.p_high)};
  }

  if (mode.count_threshold < 1) {
    return MakeError(ErrorKind::kConfigError, "coding count threshold must be at least 1");
  }
  if (n == 0) return CodingCuts{};
  const size_t t = static_cast<size_t>(mode.count_threshold);
  // The cut is the first value at which the collapsed tail holds >= t cells.
  CodingCuts cuts{values[std::min(t, n) - 1], values[n - std::min(t, n)]};
  if (cuts.lower > cuts.upper) cuts.lower = cuts.upper = nearest_rank(50);
  return cuts;
}

absl::StatusOr<Mitigated> TopBottomCode(const Dataset& data, std::string_view column,
                                        const CodingMode& mode) {
  LFSD_ASSIGN_OR_RETURN(int idx, FindTarget(data, column));
  LFSD_ASSIGN_OR_RETURN(CodingCuts cuts, ComputeCodingCuts(data.column(idx), mode));
  return TopBottomCodeWithCuts(data, column, mode, cuts);
}

absl::StatusOr<Mitigated> TopBottomCodeWithCuts(const Dataset& data, std::string_view column,
                                                const CodingMode& mode, CodingCuts cuts) {
  if (cuts.lower > cuts.upper) {
    return MakeError(ErrorKind::kInvalidPercentiles, "lower cut exceeds upper cut");
  }
  LFSD_ASSIGN_OR_RETURN(int idx, FindTarget(data, column));
  LFSD_RETURN_IF_ERROR(RequireOrdered(data.column(idx)));
  Dataset out = data;
  bool changed = false;
  for (Cell& c : out.mutable_column(idx).cells) {
    if (Number* n = std::get_if<Number>(&c)) {
      const double v = std::clamp(n->value, cuts.lower, cuts.upper);
      if (v != n->value) {
        *n = Number{v, std::max(n->decimals, Number::FromDouble(v).decimals)};
        changed = true;
      }
    } else if (Date* d = std::get_if<Date>(&c)) {
      const int64_t v = std::clamp(d->days, static_cast<int64_t>(std::llround(cuts.lower)),
                                   static_cast<int64_t>(std::llround(cuts.upper)));
      if (v != d->days) {
        d->days = v;
        changed = true;
      }
    }
  }
  return Mitigated{std::move(out), MakeAction(std::string(column), CodingParams{mode, cuts},
                                              changed)};
}

absl::StatusOr<Mitigated> PoolCategories(const Dataset& data, std::string_view column,
                                         const CategoryCounts& original_counts,
                                         int64_t count_threshold, std::string_view pooled_label) {
  if (count_threshold < 1) {
    return MakeError(ErrorKind::kConfigError, "pooling threshold must be at least 1");
  }
  if (pooled_label.empty()) return MakeError(ErrorKind::kConfigError, "pooled label is empty");
  LFSD_ASSIGN_OR_RETURN(int idx, FindTarget(data, column));
  LFSD_RETURN_IF_ERROR(RequireCategorical(data.column(idx)));
  const std::string label(pooled_label);
  if (original_counts.contains(label)) {
    return MakeError(ErrorKind::kPooledLabelCollision,
                     StrCat("'", label, "' is already a category of '", column, "'"));
  }
  std::set<std::string> rare;
  for (const auto& [name, count] : original_counts) {
    if (count < count_threshold) rare.insert(name);
  }
  for (const auto& [name, count] : CountCategories(data.column(idx))) {
    if (name != label && !original_counts.contains(name)) rare.insert(name);
  }
  Dataset out = data;
  const bool changed = RelabelInto(out.mutable_column(idx), rare, label);
  PoolingParams p{count_threshold, label, {rare.begin(), rare.end()}};
  return Mitigated{std::move(out), MakeAction(std::string(column), std::move(p), changed)};
}

absl::StatusOr<Mitigated> RemoveRecords(const Dataset& synth, const RiskReport& report,
                                        RiskyClass risky_class) {
  if (report.n_synth != synth.row_count()) {
    return MakeError(ErrorKind::kStaleReport,
                     StrCat("report covers ", report.n_synth, " rows, data has ",
                                  synth.row_count()));
  }
  RemovalParams p{risky_class, report.Rows(risky_class)};
  MitigationAction action;
  action.columns = report.keys;
  action.changed = !p.removed_rows.empty();
  Dataset out = synth.DropRows(p.removed_rows);
  action.params = std::move(p);
  return Mitigated{std::move(out), std::move(action)};
}

absl::StatusOr<Mitigated> CoarsenKey(const Dataset& data, std::string_view column,
                                     const std::map<std::string, std::string>& mapping) {
  LFSD_ASSIGN_OR_RETURN(int idx, FindTarget(data, column));
  LFSD_RETURN_IF_ERROR(RequireCategorical(data.column(idx)));
  std::set<std::string> targets;
  for (const auto& [from, to] : mapping) targets.insert(to);
  std::set<std::string> unmapped;
  Dataset out = data;
  bool changed = false;
  for (Cell& c : out.mutable_column(idx).cells) {
    std::string* s = std::get_if<std::string>(&c);
    if (s == nullptr) continue;
    if (auto it = mapping.find(*s); it != mapping.end()) {
      if (it->second != *s) {
        *s = it->second;
        changed = true;
      }
    } else if (!targets.contains(*s)) {
      unmapped.insert(*s);
    }
  }
  if (!unmapped.empty()) {
    return MakeError(ErrorKind::kPartialMapping,
                     StrCat("labels of '", column,
                                  "' without a mapping: ", absl::StrJoin(unmapped, ", ")));
  }
  return Mitigated{std::move(out),
                   MakeAction(std::string(column), CoarseningParams{mapping}, changed)};
}

absl::StatusOr<Dataset> ReplayAction(const Dataset& data, const MitigationAction& action,
                                     const AffixRule& affix) {
  if (const auto* p = std::get_if<RemovalParams>(&action.params)) return DropRecorded(data, *p);
  if (action.columns.empty()) {
    return MakeError(ErrorKind::kConfigError, "recorded action names no column");
  }
  const int idx = ResolveRecorded(data, action.columns[0], affix);
  if (idx < 0) {
    return MakeError(ErrorKind::kUnknownColumn,
                     StrCat("recorded column '", action.columns[0], "' not found"));
  }
  const std::string name = data.column(idx).name;
  absl::StatusOr<Mitigated> m;
  if (const auto* p = std::get_if<PrecisionParams>(&action.params)) {
    m = p->unit ? ReducePrecision(data, name, *p->unit)
                : ReducePrecision(data, name, p->granularity.value_or(DateGranularity::kDay));
  } else if (const auto* p = std::get_if<CodingParams>(&action.params)) {
    m = TopBottomCodeWithCuts(data, name, p->mode, p->cuts);
  } else if (const auto* p = std::get_if<PoolingParams>(&action.params)) {
    LFSD_RETURN_IF_ERROR(RequireCategorical(data.column(idx)));
    Dataset out = data;
    RelabelInto(out.mutable_column(idx), {p->pooled_categories.begin(), p->pooled_categories.end()},
                p->pooled_label);
    return out;
  } else if (const auto* p = std::get_if<CoarseningParams>(&action.params)) {
    m = CoarsenKey(data, name, p->mapping);
  }
  if (!m.ok()) return m.status();
  return std::move(m->data);
}

absl::StatusOr<Dataset> ReplayTrail(const Dataset& data, std::span<const MitigationAction> trail,
                                    const AffixRule& affix) {
  Dataset out = data;
  for (const MitigationAction& a : trail) {
    LFSD_ASSIGN_OR_RETURN(out, ReplayAction(out, a, affix));
  }
  return out;
}

absl::StatusOr<Dataset> ReplayValueActions(const Dataset& data,
                                           std::span<const MitigationAction> trail,
                                           const AffixRule& affix) {
  Dataset out = data;
  for (const MitigationAction& a : trail) {
    if (a.kind() == MitigationKind::kRemoveRecords) continue;
    LFSD_ASSIGN_OR_RETURN(out, ReplayAction(out, a, affix));
  }
  return out;
}

void ApplyActionToSchema(TableSchema& schema, const MitigationAction& action,
                         const AffixRule& affix) {
  if (action.kind() == MitigationKind::kRemoveRecords) {
    if (const auto* p = std::get_if<RemovalParams>(&action.params)) {
      schema.row_count -= std::min(schema.row_count, p->removed_rows.size());
    }
    return;
  }
  if (action.columns.empty()) return;
  ColumnSpec* spec = ResolveRecordedSpec(schema, action.columns[0], affix);
  if (spec == nullptr) return;

  if (const auto* p = std::get_if<PrecisionParams>(&action.params)) {
    if (p->unit && spec->kind == ColumnKind::kNumeric) {
      const double unit = *p->unit;
      spec->decimals = std::min(spec->decimals, DecimalsOfUnit(unit));
      const std::optional<int> pow10 = PowerOfTenDecimals(unit);
      if (pow10 && *pow10 >= spec->decimals && !spec->unit) {
        // Plain decimal places say it all.
      } else {
        spec->unit = unit;
      }
      if (spec->range) {
        spec->range = ValueRange{RoundToUnit(spec->range->min, unit),
                                 RoundToUnit(spec->range->max, unit)};
      }
    } else if (p->granularity && spec->kind == ColumnKind::kDate) {
      if (CoarserRank(*p->granularity) > CoarserRank(spec->granularity)) {
        spec->granularity = *p->granularity;
      }
      if (spec->range) {
        auto trunc = [&](double v) {
          return static_cast<double>(
              Date{static_cast<int64_t>(v)}.Truncate(spec->granularity).days);
        };
        spec->range = ValueRange{trunc(spec->range->min), trunc(spec->range->max)};
      }
    }
  } else if (const auto* p = std::get_if<CodingParams>(&action.params)) {
    if (spec->range) {
      spec->range = ValueRange{std::clamp(spec->range->min, p->cuts.lower, p->cuts.upper),
                               std::clamp(spec->range->max, p->cuts.lower, p->cuts.upper)};
    } else {
      spec->range = ValueRange{p->cuts.lower, p->cuts.upper};
    }
  } else if (const auto* p = std::get_if<PoolingParams>(&action.params)) {
    const std::set<std::string> pooled(p->pooled_categories.begin(), p->pooled_categories.end());
    std::vector<std::string> kept;
    bool any_pooled = false;
    for (const std::string& c : spec->categories) {
      if (pooled.contains(c) && c != p->pooled_label) {
        any_pooled = true;
      } else {
        kept.push_back(c);
      }
    }
    if (any_pooled && std::find(kept.begin(), kept.end(), p->pooled_label) == kept.end()) {
      kept.push_back(p->pooled_label);
    }
    spec->categories = std::move(kept);
  } else if (const auto* p = std::get_if<CoarseningParams>(&action.params)) {
    std::vector<std::string> mapped;
    for (const std::string& c : spec->categories) {
      auto it = p->mapping.find(c);
      const std::string& m = it == p->mapping.end() ? c : it->second;
      if (std::find(mapped.begin(), mapped.end(), m) == mapped.end()) mapped.push_back(m);
    }
    spec->categories = std::move(mapped);
  }
}

}  // namespace lfsd
