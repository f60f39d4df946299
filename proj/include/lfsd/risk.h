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

// Identity-disclosure risk.
//
// A synthetic record is a candidate risk when its key combination occurs at
// most `synth_count_threshold` times in the synthetic data (1 = unique).
// Candidates are then looked up in the original:
//
//   replicated unique   - the combination occurs exactly once in the original
//   unique in original  - the combination occurs at least once
//
// so replicated uniques are a subset of uniques in the original, which are a
// subset of the candidates.

#ifndef LFSD_RISK_H_
#define LFSD_RISK_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/affix.h"
#include "lfsd/dataset.h"
#include "lfsd/schema.h"

namespace lfsd {

// Quasi-identifier columns, named as in the original.
struct KeySpec {
  std::vector<std::string> columns;
  // Free-text note on how keys were coarsened, carried into reports.
  std::string coarsening_note;
};

using KeyTuple = std::vector<std::string>;
using KeyCounts = std::map<KeyTuple, int64_t>;

// Tally of key combinations. Cells are compared by CanonicalKey, and missing
// is a value of its own. Key columns are resolved with ResolveColumn.
absl::StatusOr<KeyCounts> CountKeyCombos(const Dataset& data, const KeySpec& keys,
                                         const AffixRule& affix = {});

enum class RiskyClass { kReplicatedUnique, kUniqueInOriginal };

std::string_view RiskyClassName(RiskyClass c);
std::optional<RiskyClass> ParseRiskyClass(std::string_view name);

struct RiskReport {
  size_t n_synth = 0;
  int64_t synth_count_threshold = 1;
  std::vector<std::string> keys;

  // 0-based synthetic row indices, ascending.
  std::vector<size_t> synth_unique_rows;
  std::vector<size_t> replicated_unique_rows;
  std::vector<size_t> unique_in_original_rows;

  size_t n_synth_unique() const { return synth_unique_rows.size(); }
  size_t n_replicated_unique() const { return replicated_unique_rows.size(); }
  size_t n_unique_in_original() const { return unique_in_original_rows.size(); }

  double Proportion(size_t count) const {
    return n_synth == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n_synth);
  }
  double synth_unique_proportion() const { return Proportion(n_synth_unique()); }
  double replicated_unique_proportion() const { return Proportion(n_replicated_unique()); }
  double unique_in_original_proportion() const { return Proportion(n_unique_in_original()); }

  const std::vector<size_t>& Rows(RiskyClass c) const {
    return c == RiskyClass::kReplicatedUnique ? replicated_unique_rows : unique_in_original_rows;
  }
};

// `synth` key columns are found through `affix`, `original` key columns by
// their plain names.
absl::StatusOr<RiskReport> ClassifyRiskyRecords(const Dataset& synth, const Dataset& original,
                                                const KeySpec& keys,
                                                int64_t synth_count_threshold = 1,
                                                const AffixRule& affix = {});

struct SingletonValue {
  std::string column;
  // Rendered as released (CanonicalKey-equivalent, human readable).
  std::string value;
  int64_t count = 0;
  // The value is the column minimum or maximum; a metadata range would
  // expose it.
  bool is_range_endpoint = false;

  friend bool operator==(const SingletonValue&, const SingletonValue&) = default;
};

inline constexpr int64_t kDefaultRarityThreshold = 5;

// Values occurring fewer than `rarity_threshold` times in the original.
// For numeric and date columns the observed minimum and maximum, and the
// schema's declared range endpoints, are always evaluated and flagged as
// endpoints. Missing cells are not values.
std::vector<SingletonValue> DetectSingletonValues(const Dataset& original,
                                                  const TableSchema& schema,
                                                  int64_t rarity_threshold = kDefaultRarityThreshold);

// Metadata-only variant: with no data there are no counts, so this lists the
// declared range endpoints of every numeric/date column (count reported as
// 0 = not evaluated) as values a metadata-driven generator will expose.
std::vector<SingletonValue> MetadataRangeExposures(const TableSchema& schema);

}  // namespace lfsd

#endif  // LFSD_RISK_H_
