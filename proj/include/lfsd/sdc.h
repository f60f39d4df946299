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

// Statistical disclosure control mitigations. Each operation returns the
// modified data together with a MitigationAction that records every
// parameter needed to replay it, so the trail alone reproduces the result.

#ifndef LFSD_SDC_H_
#define LFSD_SDC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/affix.h"
#include "lfsd/dataset.h"
#include "lfsd/risk.h"
#include "lfsd/schema.h"

namespace lfsd {

enum class MitigationKind {
  kReducePrecision,
  kTopBottomCode,
  kPoolCategories,
  kRemoveRecords,
  kCoarsenKey,
};

std::string_view MitigationKindName(MitigationKind kind);
std::optional<MitigationKind> ParseMitigationKind(std::string_view name);

struct PrecisionParams {
  // Exactly one is set.
  std::optional<double> unit;
  std::optional<DateGranularity> granularity;
};

struct CodingMode {
  enum class Type { kPercentile, kCountThreshold };
  Type type = Type::kPercentile;
  double p_low = 1.0;
  double p_high = 99.0;
  int64_t count_threshold = 5;

  static CodingMode Percentile(double low, double high) {
    return {Type::kPercentile, low, high, 0};
  }
  static CodingMode CountThreshold(int64_t t) { return {Type::kCountThreshold, 0, 0, t}; }
};

// Values below `lower` are raised to it, above `upper` lowered to it.
struct CodingCuts {
  double lower = 0;
  double upper = 0;
};

struct CodingParams {
  CodingMode mode;
  CodingCuts cuts;
};

inline constexpr std::string_view kDefaultPooledLabel = "OTHER_POOLED";
inline constexpr int64_t kDefaultPoolThreshold = 5;

struct PoolingParams {
  int64_t count_threshold = kDefaultPoolThreshold;
  std::string pooled_label{kDefaultPooledLabel};
  // Labels that were relabelled, in ascending order.
  std::vector<std::string> pooled_categories;
};

struct RemovalParams {
  RiskyClass risky_class = RiskyClass::kUniqueInOriginal;
  // Positions in the data the action was applied to.
  std::vector<size_t> removed_rows;
};

struct CoarseningParams {
  std::map<std::string, std::string> mapping;
};

using MitigationParams =
    std::variant<PrecisionParams, CodingParams, PoolingParams, RemovalParams, CoarseningParams>;

struct MitigationAction {
  std::vector<std::string> columns;
  MitigationParams params;
  // Position in the pipeline's audit trail.
  size_t applied_at = 0;
  // False when the action left the data untouched.
  bool changed = false;

  MitigationKind kind() const;
};

struct Mitigated {
  Dataset data;
  MitigationAction action;
};

using CategoryCounts = std::map<std::string, int64_t>;

// Counts of each non-missing label in a categorical column.
CategoryCounts CountCategories(const Column& column);

absl::StatusOr<Mitigated> ReducePrecision(const Dataset& data, std::string_view column,
                                          double unit);
absl::StatusOr<Mitigated> ReducePrecision(const Dataset& data, std::string_view column,
                                          DateGranularity granularity);

// Nearest-rank percentiles, or count-threshold tails, over non-missing cells.
absl::StatusOr<CodingCuts> ComputeCodingCuts(const Column& column, const CodingMode& mode);

// Cuts computed from `data` itself.
absl::StatusOr<Mitigated> TopBottomCode(const Dataset& data, std::string_view column,
                                        const CodingMode& mode);

// Cuts supplied, e.g. computed on the original and applied to synthetic data.
absl::StatusOr<Mitigated> TopBottomCodeWithCuts(const Dataset& data, std::string_view column,
                                                const CodingMode& mode, CodingCuts cuts);

// Relabels every category whose count in `original_counts` is below the
// threshold (labels absent from the counts count as 0).
absl::StatusOr<Mitigated> PoolCategories(const Dataset& data, std::string_view column,
                                         const CategoryCounts& original_counts,
                                         int64_t count_threshold = kDefaultPoolThreshold,
                                         std::string_view pooled_label = kDefaultPooledLabel);

// Deletes the rows the report flags for `risky_class`.
absl::StatusOr<Mitigated> RemoveRecords(const Dataset& synth, const RiskReport& report,
                                        RiskyClass risky_class);

// Labels that are already a mapping target pass through unchanged.
absl::StatusOr<Mitigated> CoarsenKey(const Dataset& data, std::string_view column,
                                     const std::map<std::string, std::string>& mapping);

// Re-applies a recorded action using only its recorded parameters. The
// target column is looked up by its recorded name, or with `affix` stripped
// or applied, so a trail recorded on synthetic data can be replayed on the
// original. Row removal is only replayable on the data it was recorded on.
absl::StatusOr<Dataset> ReplayAction(const Dataset& data, const MitigationAction& action,
                                     const AffixRule& affix = {});

absl::StatusOr<Dataset> ReplayTrail(const Dataset& data, std::span<const MitigationAction> trail,
                                    const AffixRule& affix = {});

// Value-level actions only (precision, coding, pooling, coarsening); removal
// is skipped. Used to view the original at released precision.
absl::StatusOr<Dataset> ReplayValueActions(const Dataset& data,
                                           std::span<const MitigationAction> trail,
                                           const AffixRule& affix = {});

// Updates the spec of the action's column: precision, range, categories.
void ApplyActionToSchema(TableSchema& schema, const MitigationAction& action,
                         const AffixRule& affix = {});

}  // namespace lfsd

#endif  // LFSD_SDC_H_
