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

#include "lfsd/synthesis.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "lfsd/random.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

// Rows listed by name in a precondition report before truncating.
constexpr size_t kMaxReportedRows = 20;

// Slack when locating range endpoints on a precision grid.
constexpr double kLatticeSlack = 1e-9;

absl::Status PreconditionError(std::string_view what, const std::vector<size_t>& rows) {
  std::vector<size_t> shown(rows.begin(),
                            rows.begin() + std::min(rows.size(), kMaxReportedRows));
  std::string list = absl::StrJoin(shown, ", ");
  if (rows.size() > shown.size()) StrAppend(&list, ", ...");
  return MakeError(ErrorKind::kTransformPreconditionViolated,
                   StrCat(what, " on ", rows.size(), " row(s) (0-based): ", list));
}

absl::StatusOr<int> RequireColumn(const Dataset& data, std::string_view name,
                                  std::string_view role) {
  const int idx = data.FindColumn(name);
  if (idx < 0) {
    return MakeError(ErrorKind::kUnknownColumn,
                     StrCat(role, " column '", name, "' not present"));
  }
  return idx;
}

// Months since year 0, for stepping across month boundaries.
int64_t MonthIndex(Date d) { return static_cast<int64_t>(d.year()) * 12 + (d.month() - 1); }

Date FromMonthIndex(int64_t m) {
  const int64_t year = m >= 0 ? m / 12 : (m - 11) / 12;
  return Date::FromYmd(static_cast<int>(year), static_cast<unsigned>(m - year * 12 + 1), 1);
}

// Lattice of admissible values for a numeric or date column. Draws are
// uniform over the lattice points inside the declared range.
struct Lattice {
  int64_t lo = 0;
  int64_t hi = 0;
};

absl::StatusOr<Lattice> NumericLattice(const ColumnSpec& spec) {
  if (!spec.range) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", spec.name, "' declares no range"));
  }
  if (spec.range->min > spec.range->max) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", spec.name, "': range min > max"));
  }
  const double u = spec.GridUnit();
  Lattice l;
  l.lo = static_cast<int64_t>(std::ceil(spec.range->min / u - kLatticeSlack));
  l.hi = static_cast<int64_t>(std::floor(spec.range->max / u + kLatticeSlack));
  if (l.lo > l.hi) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", spec.name,
                                  "': no value at the declared precision lies in the range"));
  }
  return l;
}

absl::StatusOr<Lattice> DateLattice(const ColumnSpec& spec) {
  if (!spec.range) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", spec.name, "' declares no range"));
  }
  if (spec.range->min > spec.range->max) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", spec.name, "': range min > max"));
  }
  const Date lo{static_cast<int64_t>(std::ceil(spec.range->min))};
  const Date hi{static_cast<int64_t>(std::floor(spec.range->max))};
  Lattice l;
  switch (spec.granularity) {
    case DateGranularity::kDay:
      l = {lo.days, hi.days};
      break;
    case DateGranularity::kMonth:
      l.lo = MonthIndex(lo) + (lo.day() == 1 ? 0 : 1);
      l.hi = MonthIndex(hi);
      break;
    case DateGranularity::kYear:
      l.lo = lo.year() + ((lo.month() == 1 && lo.day() == 1) ? 0 : 1);
      l.hi = hi.year();
      break;
  }
  if (l.lo > l.hi) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", spec.name,
                                  "': no date at the declared granularity lies in the range"));
  }
  return l;
}

Date DateAt(DateGranularity g, int64_t k) {
  switch (g) {
    case DateGranularity::kDay:
      return Date{k};
    case DateGranularity::kMonth:
      return FromMonthIndex(k);
    case DateGranularity::kYear:
      return Date::FromYmd(static_cast<int>(k), 1, 1);
  }
  return Date{k};
}

int NumericDecimals(const ColumnSpec& spec) {
  return spec.unit ? DecimalsOfUnit(*spec.unit) : spec.decimals;
}

absl::StatusOr<Column> DrawMetadataColumn(const ColumnSpec& spec, size_t n, ColumnRng& rng,
                                          double missing_rate) {
  Column col{spec.name, {}};
  col.cells.reserve(n);
  const bool may_miss = spec.missing_allowed && missing_rate > 0;
  switch (spec.kind) {
    case ColumnKind::kCategorical: {
      for (size_t r = 0; r < n; ++r) {
        if (spec.categories.empty() || (may_miss && rng.Bernoulli(missing_rate))) {
          col.cells.push_back(Missing{});
          continue;
        }
        col.cells.push_back(spec.categories[rng.UniformIndex(spec.categories.size())]);
      }
      break;
    }
    case ColumnKind::kNumeric: {
      LFSD_ASSIGN_OR_RETURN(Lattice l, NumericLattice(spec));
      const double u = spec.GridUnit();
      const int decimals = NumericDecimals(spec);
      for (size_t r = 0; r < n; ++r) {
        if (may_miss && rng.Bernoulli(missing_rate)) {
          col.cells.push_back(Missing{});
          continue;
        }
        const int64_t k = rng.UniformInt(l.lo, l.hi);
        col.cells.push_back(Number{RoundToUnit(static_cast<double>(k) * u, u), decimals});
      }
      break;
    }
    case ColumnKind::kDate: {
      LFSD_ASSIGN_OR_RETURN(Lattice l, DateLattice(spec));
      for (size_t r = 0; r < n; ++r) {
        if (may_miss && rng.Bernoulli(missing_rate)) {
          col.cells.push_back(Missing{});
          continue;
        }
        col.cells.push_back(DateAt(spec.granularity, rng.UniformInt(l.lo, l.hi)));
      }
      break;
    }
  }
  return col;
}

// Sum of the numeric cells in `row` of `columns`, or Missing when any is.
Cell SumCells(const Dataset& data, const std::vector<int>& columns, size_t row) {
  double sum = 0;
  int decimals = 0;
  for (int c : columns) {
    const Cell& cell = data.column(c).cells[row];
    const Number* num = std::get_if<Number>(&cell);
    if (num == nullptr) return Missing{};
    sum += num->value;
    decimals = std::max(decimals, num->decimals);
  }
  const double unit = std::pow(10.0, -decimals);
  return Number{RoundToUnit(sum, unit), decimals};
}

absl::StatusOr<std::vector<int>> ResolveComponents(const Dataset& data,
                                                   const TransformSpec& spec) {
  if (spec.components.empty()) {
    return MakeError(ErrorKind::kTransformPreconditionViolated,
                     StrCat("total '", spec.total, "' lists no components"));
  }
  std::vector<int> out;
  for (const std::string& c : spec.components) {
    LFSD_ASSIGN_OR_RETURN(int idx, RequireColumn(data, c, "component"));
    out.push_back(idx);
  }
  return out;
}

// Metadata-only inverse for a date pair: later = earlier + a duration drawn
// uniformly over the declared duration range, clipped to the later column's
// own range so the output still conforms to the schema.
absl::StatusOr<Column> DrawLaterFromDuration(const ColumnSpec& later_spec,
                                             const Column& earlier, const ValueRange& durations,
                                             double missing_rate, ColumnRng& rng) {
  if (!later_spec.range) {
    return MakeError(ErrorKind::kDegenerateRange,
                     StrCat("column '", later_spec.name, "' declares no range"));
  }
  Column out{later_spec.name, {}};
  out.cells.reserve(earlier.cells.size());
  const int64_t d_lo = static_cast<int64_t>(std::ceil(durations.min));
  const int64_t d_hi = static_cast<int64_t>(std::floor(durations.max));
  const int64_t l_lo = static_cast<int64_t>(std::ceil(later_spec.range->min));
  const int64_t l_hi = static_cast<int64_t>(std::floor(later_spec.range->max));
  const bool may_miss = later_spec.missing_allowed && missing_rate > 0;
  for (const Cell& cell : earlier.cells) {
    const Date* e = std::get_if<Date>(&cell);
    if (e == nullptr || (may_miss && rng.Bernoulli(missing_rate))) {
      out.cells.push_back(Missing{});
      continue;
    }
    const int64_t lo = std::max(d_lo, l_lo - e->days);
    const int64_t hi = std::min(d_hi, l_hi - e->days);
    if (lo > hi) {
      if (!later_spec.missing_allowed) {
        return MakeError(ErrorKind::kDegenerateRange,
                         StrCat("no duration in the declared range keeps '",
                                      later_spec.name, "' inside its range after ",
                                      FormatDate(*e)));
      }
      out.cells.push_back(Missing{});
      continue;
    }
    out.cells.push_back(Date{e->days + rng.UniformInt(lo, hi)});
  }
  return out;
}

}  // namespace

std::string_view SynthesisMethodName(SynthesisMethod m) {
  return m == SynthesisMethod::kFromMetadata ? "from_metadata" : "from_margins";
}

std::optional<SynthesisMethod> ParseSynthesisMethod(std::string_view name) {
  if (name == "from_metadata" || name == "metadata") return SynthesisMethod::kFromMetadata;
  if (name == "from_margins" || name == "margins") return SynthesisMethod::kFromMargins;
  return std::nullopt;
}

TransformSpec TransformSpec::DatePair(std::string earlier, std::string later) {
  TransformSpec s;
  s.kind = Kind::kDatePairToOriginPlusDuration;
  s.duration_column = StrCat(later, "_days_after_", earlier);
  s.earlier = std::move(earlier);
  s.later = std::move(later);
  return s;
}

TransformSpec TransformSpec::Total(std::string total, std::vector<std::string> components) {
  TransformSpec s;
  s.kind = Kind::kTotalToComponents;
  s.total = std::move(total);
  s.components = std::move(components);
  return s;
}

std::string_view TransformSpec::KindName() const {
  return kind == Kind::kDatePairToOriginPlusDuration ? "date_pair_to_origin_plus_duration"
                                                     : "total_to_components";
}

absl::Status SynthesisConfig::CheckInvariants() const {
  if (n_synth < 1) return MakeError(ErrorKind::kConfigError, "n_synth must be at least 1");
  if (affix.text.empty()) return MakeError(ErrorKind::kConfigError, "affix must be non-empty");
  if (!(metadata_missing_rate >= 0 && metadata_missing_rate <= 1)) {
    return MakeError(ErrorKind::kConfigError, "metadata_missing_rate must lie in [0,1]");
  }
  for (const TransformSpec& t : transforms) {
    if (t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration) {
      if (t.earlier.empty() || t.later.empty() || t.duration_column.empty()) {
        return MakeError(ErrorKind::kConfigError, "date_pair transform needs earlier and later");
      }
      if (t.duration_range &&
          (t.duration_range->min < 0 || t.duration_range->min > t.duration_range->max)) {
        return MakeError(ErrorKind::kConfigError,
                         "duration_range must satisfy 0 <= min <= max");
      }
    } else if (t.total.empty() || t.components.empty()) {
      return MakeError(ErrorKind::kConfigError, "total transform needs total and components");
    }
  }
  return absl::OkStatus();
}

MarginalDistribution BuildMarginal(const Column& column) {
  return MarginalDistribution{column.name, column.cells};
}

absl::StatusOr<Dataset> SynthFromMetadata(const TableSchema& schema,
                                          const SynthesisConfig& config) {
  if (config.method != SynthesisMethod::kFromMetadata) {
    return MakeError(ErrorKind::kMethodMismatch, "config method is not from_metadata");
  }
  LFSD_RETURN_IF_ERROR(config.CheckInvariants());
  if (schema.columns.empty()) return MakeError(ErrorKind::kEmptyDataset, "schema has no columns");

  // Columns rebuilt by a transform instead of drawn directly.
  std::map<std::string, const TransformSpec*> rebuilt;
  for (const TransformSpec& t : config.transforms) {
    if (t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration) {
      if (!t.duration_range) {
        return MakeError(ErrorKind::kTransformPreconditionViolated,
                         StrCat("date_pair transform on '", t.later,
                                      "' needs a duration_range when synthesizing from metadata"));
      }
      const ColumnSpec* e = schema.FindColumn(t.earlier);
      const ColumnSpec* l = schema.FindColumn(t.later);
      if (e == nullptr || l == nullptr) {
        return MakeError(ErrorKind::kUnknownColumn,
                         StrCat("date_pair columns '", t.earlier, "', '", t.later,
                                      "' must both be in the schema"));
      }
      if (e->kind != ColumnKind::kDate || l->kind != ColumnKind::kDate ||
          l->granularity != DateGranularity::kDay) {
        return MakeError(ErrorKind::kTransformPreconditionViolated,
                         "date_pair transform needs two date columns, the later at day precision");
      }
      rebuilt[t.later] = &t;
    } else {
      if (schema.FindColumn(t.total) == nullptr) {
        return MakeError(ErrorKind::kUnknownColumn,
                         StrCat("total column '", t.total, "' not in schema"));
      }
      for (const std::string& c : t.components) {
        const ColumnSpec* spec = schema.FindColumn(c);
        if (spec == nullptr || spec->kind != ColumnKind::kNumeric) {
          return MakeError(ErrorKind::kTransformPreconditionViolated,
                           StrCat("component '", c, "' must be a numeric schema column"));
        }
      }
      rebuilt[t.total] = &t;
    }
  }

  std::vector<Column> columns(schema.columns.size());
  for (size_t i = 0; i < schema.columns.size(); ++i) {
    if (rebuilt.contains(schema.columns[i].name)) continue;
    ColumnRng rng(config.seed, i);
    LFSD_ASSIGN_OR_RETURN(columns[i], DrawMetadataColumn(schema.columns[i], config.n_synth, rng,
                                                         config.metadata_missing_rate));
  }
  LFSD_ASSIGN_OR_RETURN(Dataset drawn, [&]() -> absl::StatusOr<Dataset> {
    std::vector<Column> present;
    for (const Column& c : columns) {
      if (!c.name.empty()) present.push_back(c);
    }
    return Dataset::FromColumns(std::move(present));
  }());

  // Apply transforms in declaration order so chained specs see prior output.
  for (const TransformSpec& t : config.transforms) {
    if (t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration) {
      const int e = drawn.FindColumn(t.earlier);
      if (e < 0) {
        return MakeError(ErrorKind::kTransformPreconditionViolated,
                         StrCat("earlier column '", t.earlier, "' is itself rebuilt"));
      }
      size_t idx = 0;
      while (schema.columns[idx].name != t.later) ++idx;
      ColumnRng rng(config.seed, idx);
      LFSD_ASSIGN_OR_RETURN(columns[idx], DrawLaterFromDuration(schema.columns[idx],
                                                                drawn.column(e),
                                                                *t.duration_range,
                                                                config.metadata_missing_rate, rng));
      LFSD_RETURN_IF_ERROR(drawn.AddColumn(columns[idx]));
    } else {
      LFSD_ASSIGN_OR_RETURN(std::vector<int> comps, ResolveComponents(drawn, t));
      size_t idx = 0;
      while (schema.columns[idx].name != t.total) ++idx;
      Column total{t.total, {}};
      for (size_t r = 0; r < drawn.row_count(); ++r) total.cells.push_back(SumCells(drawn, comps, r));
      columns[idx] = total;
      LFSD_RETURN_IF_ERROR(drawn.AddColumn(std::move(total)));
    }
  }

  for (Column& c : columns) c.name = config.affix.Apply(c.name);
  return Dataset::FromColumns(std::move(columns));
}

absl::StatusOr<Dataset> SynthFromMargins(const Dataset& original, const SynthesisConfig& config) {
  if (config.method != SynthesisMethod::kFromMargins) {
    return MakeError(ErrorKind::kMethodMismatch, "config method is not from_margins");
  }
  LFSD_RETURN_IF_ERROR(config.CheckInvariants());
  if (original.column_count() == 0 || original.row_count() == 0) {
    return MakeError(ErrorKind::kEmptyOriginal, "original dataset has no rows");
  }
  LFSD_ASSIGN_OR_RETURN(Dataset transformed, ApplyTransformPipeline(original, config.transforms));

  // Streams follow the original column index; a duration column inherits the
  // index of the later date it stands in for.
  std::map<std::string, size_t> stream_of;
  for (size_t i = 0; i < original.column_count(); ++i) stream_of[original.column(i).name] = i;
  for (const TransformSpec& t : config.transforms) {
    if (t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration &&
        stream_of.contains(t.later)) {
      stream_of[t.duration_column] = stream_of[t.later];
    }
  }

  std::vector<Column> sampled;
  sampled.reserve(transformed.column_count());
  for (size_t j = 0; j < transformed.column_count(); ++j) {
    const MarginalDistribution margin = BuildMarginal(transformed.column(j));
    const auto it = stream_of.find(margin.column);
    ColumnRng rng(config.seed, it != stream_of.end() ? it->second : original.column_count() + j);
    Column out{margin.column, {}};
    out.cells.reserve(config.n_synth);
    for (size_t r = 0; r < config.n_synth; ++r) {
      out.cells.push_back(margin.pool[rng.UniformIndex(margin.pool.size())]);
    }
    sampled.push_back(std::move(out));
  }
  LFSD_ASSIGN_OR_RETURN(Dataset synth, Dataset::FromColumns(std::move(sampled)));
  const std::vector<std::string> order = original.ColumnNames();
  LFSD_ASSIGN_OR_RETURN(synth, InvertTransformPipeline(synth, config.transforms, order));
  for (size_t j = 0; j < synth.column_count(); ++j) {
    synth.RenameColumn(j, config.affix.Apply(synth.column(j).name));
  }
  return synth;
}

absl::StatusOr<Dataset> ApplyTransformPipeline(const Dataset& original,
                                               std::span<const TransformSpec> specs) {
  Dataset data = original;
  for (const TransformSpec& t : specs) {
    if (t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration) {
      LFSD_ASSIGN_OR_RETURN(int e, RequireColumn(data, t.earlier, "earlier"));
      LFSD_ASSIGN_OR_RETURN(int l, RequireColumn(data, t.later, "later"));
      if (data.FindColumn(t.duration_column) >= 0) {
        return MakeError(ErrorKind::kTransformPreconditionViolated,
                         StrCat("duration column '", t.duration_column, "' already exists"));
      }
      std::vector<size_t> not_dates;
      std::vector<size_t> reversed;
      std::vector<size_t> orphaned;
      Column duration{t.duration_column, {}};
      for (size_t r = 0; r < data.row_count(); ++r) {
        const Cell& ce = data.column(e).cells[r];
        const Cell& cl = data.column(l).cells[r];
        const Date* de = std::get_if<Date>(&ce);
        const Date* dl = std::get_if<Date>(&cl);
        if ((!IsMissing(ce) && de == nullptr) || (!IsMissing(cl) && dl == nullptr)) {
          not_dates.push_back(r);
          duration.cells.push_back(Missing{});
        } else if (dl == nullptr) {
          duration.cells.push_back(Missing{});
        } else if (de == nullptr) {
          orphaned.push_back(r);
          duration.cells.push_back(Missing{});
        } else if (dl->days < de->days) {
          reversed.push_back(r);
          duration.cells.push_back(Missing{});
        } else {
          duration.cells.push_back(Number{static_cast<double>(dl->days - de->days), 0});
        }
      }
      if (!not_dates.empty()) {
        return PreconditionError(StrCat("'", t.earlier, "'/'", t.later, "' hold non-dates"),
                                 not_dates);
      }
      if (!reversed.empty()) {
        return PreconditionError(StrCat("'", t.later, "' precedes '", t.earlier, "'"),
                                 reversed);
      }
      if (!orphaned.empty()) {
        return PreconditionError(
            StrCat("'", t.later, "' is present while '", t.earlier, "' is missing"),
            orphaned);
      }
      data.RemoveColumn(l);
      data.InsertColumn(l, std::move(duration));
    } else {
      LFSD_ASSIGN_OR_RETURN(int total, RequireColumn(data, t.total, "total"));
      LFSD_ASSIGN_OR_RETURN(std::vector<int> comps, ResolveComponents(data, t));
      std::vector<size_t> bad;
      for (size_t r = 0; r < data.row_count(); ++r) {
        const Cell& cell = data.column(total).cells[r];
        const Cell expected = SumCells(data, comps, r);
        if (IsMissing(cell) && IsMissing(expected)) continue;
        const Number* have = std::get_if<Number>(&cell);
        const Number* want = std::get_if<Number>(&expected);
        if (have == nullptr || want == nullptr) {
          bad.push_back(r);
          continue;
        }
        // Agreement within half a unit of the coarser of the two precisions.
        const int d = std::min(have->decimals, want->decimals);
        if (std::fabs(have->value - want->value) > 0.5 * std::pow(10.0, -d) + kLatticeSlack) {
          bad.push_back(r);
        }
      }
      if (!bad.empty()) {
        return PreconditionError(
            StrCat("'", t.total, "' differs from the sum of ",
                         absl::StrJoin(t.components, " + ")),
            bad);
      }
      data.RemoveColumn(total);
    }
  }
  return data;
}

absl::StatusOr<Dataset> InvertTransformPipeline(const Dataset& transformed,
                                                std::span<const TransformSpec> specs,
                                                std::span<const std::string> column_order) {
  Dataset data = transformed;
  for (auto it = specs.rbegin(); it != specs.rend(); ++it) {
    const TransformSpec& t = *it;
    if (t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration) {
      LFSD_ASSIGN_OR_RETURN(int e, RequireColumn(data, t.earlier, "earlier"));
      LFSD_ASSIGN_OR_RETURN(int d, RequireColumn(data, t.duration_column, "duration"));
      Column later{t.later, {}};
      for (size_t r = 0; r < data.row_count(); ++r) {
        const Date* de = std::get_if<Date>(&data.column(e).cells[r]);
        const Number* dd = std::get_if<Number>(&data.column(d).cells[r]);
        if (de == nullptr || dd == nullptr) {
          later.cells.push_back(Missing{});
        } else {
          later.cells.push_back(Date{de->days + static_cast<int64_t>(std::llround(dd->value))});
        }
      }
      data.RemoveColumn(d);
      data.InsertColumn(d, std::move(later));
    } else {
      LFSD_ASSIGN_OR_RETURN(std::vector<int> comps, ResolveComponents(data, t));
      Column total{t.total, {}};
      for (size_t r = 0; r < data.row_count(); ++r) total.cells.push_back(SumCells(data, comps, r));
      LFSD_RETURN_IF_ERROR(data.AddColumn(std::move(total)));
    }
  }
  if (column_order.empty()) return data;

  std::vector<Column> ordered;
  std::set<std::string> placed;
  for (const std::string& name : column_order) {
    const int idx = data.FindColumn(name);
    if (idx < 0) continue;
    ordered.push_back(data.column(idx));
    placed.insert(name);
  }
  for (const Column& c : data.columns()) {
    if (!placed.contains(c.name)) ordered.push_back(c);
  }
  return Dataset::FromColumns(std::move(ordered));
}

TableSchema DeriveSynthSchema(const TableSchema& original, const Dataset& synth,
                              const AffixRule& affix) {
  TableSchema out;
  out.row_count = synth.row_count();
  out.provenance = original.provenance;
  out.is_synthetic = true;
  out.source_metadata_reference = original.source_metadata_reference;
  for (const Column& col : synth.columns()) {
    const std::string base = affix.Strip(col.name).value_or(col.name);
    const ColumnSpec* src = original.FindColumn(base);
    ColumnSpec spec;
    if (src != nullptr) {
      spec = *src;
    } else {
      absl::StatusOr<ColumnSpec> inferred = InferColumnSpec(col);
      if (!inferred.ok()) continue;
      spec = *std::move(inferred);
    }
    spec.name = col.name;
    size_t missing = 0;
    for (const Cell& c : col.cells) missing += IsMissing(c) ? 1 : 0;
    const double rate =
        col.cells.empty() ? 0.0 : static_cast<double>(missing) / static_cast<double>(col.cells.size());
    spec.missing_rate = rate;
    spec.missing_allowed = rate > 0;
    out.columns.push_back(std::move(spec));
  }
  return out;
}

}  // namespace lfsd
