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

#include "lfsd/risk.h"

#include <algorithm>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

absl::StatusOr<std::vector<int>> ResolveKeys(const Dataset& data, const KeySpec& keys,
                                             const AffixRule& affix, std::string_view side) {
  if (keys.columns.empty()) {
    return MakeError(ErrorKind::kUnknownKeyColumn, "no key columns given");
  }
  std::vector<int> idx;
  for (const std::string& k : keys.columns) {
    const int c = ResolveColumn(data, k, affix);
    if (c < 0) {
      return MakeError(ErrorKind::kUnknownKeyColumn,
                       StrCat("key '", k, "' not found in the ", side, " data"));
    }
    idx.push_back(c);
  }
  return idx;
}

KeyTuple TupleAt(const Dataset& data, const std::vector<int>& cols, size_t row) {
  KeyTuple t;
  t.reserve(cols.size());
  for (int c : cols) t.push_back(CanonicalKey(data.column(c).cells[row]));
  return t;
}

// Kind of the first non-missing cell: 0 none, 1 label, 2 number, 3 date.
size_t ObservedKind(const Column& col) {
  for (const Cell& c : col.cells) {
    if (!IsMissing(c)) return c.index();
  }
  return 0;
}

std::string RenderValue(const ColumnSpec& spec, double v) {
  if (spec.kind == ColumnKind::kDate) return FormatDate(Date{static_cast<int64_t>(v)});
  const int decimals = spec.unit ? DecimalsOfUnit(*spec.unit) : spec.decimals;
  return FormatNumber(v, decimals);
}

}  // namespace

absl::StatusOr<KeyCounts> CountKeyCombos(const Dataset& data, const KeySpec& keys,
                                         const AffixRule& affix) {
  LFSD_ASSIGN_OR_RETURN(std::vector<int> cols, ResolveKeys(data, keys, affix, "given"));
  KeyCounts counts;
  for (size_t r = 0; r < data.row_count(); ++r) ++counts[TupleAt(data, cols, r)];
  return counts;
}

std::string_view RiskyClassName(RiskyClass c) {
  return c == RiskyClass::kReplicatedUnique ? "replicated_unique" : "unique_in_original";
}

std::optional<RiskyClass> ParseRiskyClass(std::string_view name) {
  if (name == "replicated_unique") return RiskyClass::kReplicatedUnique;
  if (name == "unique_in_original") return RiskyClass::kUniqueInOriginal;
  return std::nullopt;
}

absl::StatusOr<RiskReport> ClassifyRiskyRecords(const Dataset& synth, const Dataset& original,
                                                const KeySpec& keys,
                                                int64_t synth_count_threshold,
                                                const AffixRule& affix) {
  if (synth_count_threshold < 1) {
    return MakeError(ErrorKind::kConfigError, "synth_count_threshold must be at least 1");
  }
  LFSD_ASSIGN_OR_RETURN(std::vector<int> s_cols, ResolveKeys(synth, keys, affix, "synthetic"));
  // The original never carries the affix; resolving by plain name first
  // avoids picking up an unrelated column that happens to start with it.
  std::vector<int> o_cols;
  for (const std::string& k : keys.columns) {
    const int c = original.FindColumn(k);
    if (c < 0) {
      return MakeError(ErrorKind::kUnknownKeyColumn,
                       StrCat("key '", k, "' not found in the original data"));
    }
    o_cols.push_back(c);
  }
  for (size_t i = 0; i < keys.columns.size(); ++i) {
    const size_t sk = ObservedKind(synth.column(s_cols[i]));
    const size_t ok = ObservedKind(original.column(o_cols[i]));
    if (sk != 0 && ok != 0 && sk != ok) {
      return MakeError(ErrorKind::kKeyAfterAffixMismatch,
                       StrCat("key '", keys.columns[i], "' resolves to '",
                                    synth.column(s_cols[i]).name,
                                    "' whose values differ in kind from the original"));
    }
  }

  std::vector<KeyTuple> s_tuples(synth.row_count());
  KeyCounts s_counts;
  for (size_t r = 0; r < synth.row_count(); ++r) {
    s_tuples[r] = TupleAt(synth, s_cols, r);
    ++s_counts[s_tuples[r]];
  }
  KeyCounts o_counts;
  for (size_t r = 0; r < original.row_count(); ++r) ++o_counts[TupleAt(original, o_cols, r)];

  RiskReport report;
  report.n_synth = synth.row_count();
  report.synth_count_threshold = synth_count_threshold;
  report.keys = keys.columns;
  for (size_t r = 0; r < synth.row_count(); ++r) {
    if (s_counts[s_tuples[r]] > synth_count_threshold) continue;
    report.synth_unique_rows.push_back(r);
    const auto it = o_counts.find(s_tuples[r]);
    const int64_t n_orig = it == o_counts.end() ? 0 : it->second;
    if (n_orig >= 1) report.unique_in_original_rows.push_back(r);
    if (n_orig == 1) report.replicated_unique_rows.push_back(r);
  }
  return report;
}

std::vector<SingletonValue> DetectSingletonValues(const Dataset& original,
                                                  const TableSchema& schema,
                                                  int64_t rarity_threshold) {
  std::vector<SingletonValue> out;
  for (const ColumnSpec& spec : schema.columns) {
    const int c = original.FindColumn(spec.name);
    if (c < 0) continue;
    struct Tally {
      size_t first_row;
      int64_t count;
      const Cell* cell;
    };
    std::unordered_map<std::string, Tally> tally;
    std::optional<double> lo, hi;
    const std::vector<Cell>& cells = original.column(c).cells;
    for (size_t r = 0; r < cells.size(); ++r) {
      if (IsMissing(cells[r])) continue;
      auto [it, inserted] = tally.try_emplace(CanonicalKey(cells[r]), Tally{r, 0, &cells[r]});
      ++it->second.count;
      if (std::optional<double> v = NumericValue(cells[r])) {
        lo = lo ? std::min(*lo, *v) : *v;
        hi = hi ? std::max(*hi, *v) : *v;
      }
    }
    std::vector<std::pair<const std::string*, const Tally*>> rare;
    for (const auto& [key, t] : tally) {
      if (t.count < rarity_threshold) rare.emplace_back(&key, &t);
    }
    const bool ordered = spec.kind != ColumnKind::kCategorical;
    std::sort(rare.begin(), rare.end(), [&](const auto& a, const auto& b) {
      if (ordered) {
        const double va = NumericValue(*a.second->cell).value_or(0);
        const double vb = NumericValue(*b.second->cell).value_or(0);
        if (va != vb) return va < vb;
      }
      return a.second->first_row < b.second->first_row;
    });
    for (const auto& [key, t] : rare) {
      SingletonValue s;
      s.column = spec.name;
      s.value = RenderCell(*t->cell);
      s.count = t->count;
      if (std::optional<double> v = NumericValue(*t->cell)) {
        s.is_range_endpoint = (v == lo || v == hi) ||
                              (spec.range && (*v == spec.range->min || *v == spec.range->max));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<SingletonValue> MetadataRangeExposures(const TableSchema& schema) {
  std::vector<SingletonValue> out;
  for (const ColumnSpec& spec : schema.columns) {
    if (spec.kind == ColumnKind::kCategorical || !spec.range) continue;
    out.push_back({spec.name, RenderValue(spec, spec.range->min), 0, true});
    if (spec.range->max != spec.range->min) {
      out.push_back({spec.name, RenderValue(spec, spec.range->max), 0, true});
    }
  }
  return out;
}

}  // namespace lfsd
