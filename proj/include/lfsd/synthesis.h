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

// Low-fidelity synthesis. Two generators are provided:
//
//  * SynthFromMetadata draws every column uniformly over what the schema
//    declares (categories, ranges at the declared precision). It never sees
//    data.
//  * SynthFromMargins resamples each column of the original independently,
//    with replacement, so univariate distributions are preserved and every
//    relationship between columns is broken.
//
// Transforms re-express columns before resampling so that logical
// constraints that would otherwise be broken by independent sampling
// (death before diagnosis, totals that do not add up) hold by construction.

#ifndef LFSD_SYNTHESIS_H_
#define LFSD_SYNTHESIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/affix.h"
#include "lfsd/dataset.h"
#include "lfsd/schema.h"

namespace lfsd {

enum class SynthesisMethod { kFromMetadata, kFromMargins };

std::string_view SynthesisMethodName(SynthesisMethod m);
// Accepts "from_metadata"/"metadata" and "from_margins"/"margins".
std::optional<SynthesisMethod> ParseSynthesisMethod(std::string_view name);

struct TransformSpec {
  enum class Kind { kDatePairToOriginPlusDuration, kTotalToComponents };

  Kind kind = Kind::kDatePairToOriginPlusDuration;

  // Date pair: `later` is replaced by `duration_column` = later - earlier in
  // days, and rebuilt as earlier + duration after synthesis.
  std::string earlier;
  std::string later;
  std::string duration_column;
  // Only used by SynthFromMetadata, which has no durations to resample.
  std::optional<ValueRange> duration_range;

  // Total: `total` is dropped and recomputed as the sum of `components`.
  std::string total;
  std::vector<std::string> components;

  static TransformSpec DatePair(std::string earlier, std::string later);
  static TransformSpec Total(std::string total, std::vector<std::string> components);

  std::string_view KindName() const;
};

inline constexpr double kDefaultMetadataMissingRate = 0.05;

struct SynthesisConfig {
  SynthesisMethod method = SynthesisMethod::kFromMargins;
  size_t n_synth = 0;
  uint64_t seed = 0;
  AffixRule affix;
  std::vector<TransformSpec> transforms;
  // Rate at which SynthFromMetadata blanks cells of missing_allowed columns.
  double metadata_missing_rate = kDefaultMetadataMissingRate;

  absl::Status CheckInvariants() const;
};

// A column's resampling pool: its original cells, missing included.
struct MarginalDistribution {
  std::string column;
  std::vector<Cell> pool;
};

MarginalDistribution BuildMarginal(const Column& column);

absl::StatusOr<Dataset> SynthFromMetadata(const TableSchema& schema, const SynthesisConfig& config);

absl::StatusOr<Dataset> SynthFromMargins(const Dataset& original, const SynthesisConfig& config);

// Forward transform. Verifies each spec's precondition on `original` and
// reports every violating row rather than repairing it.
absl::StatusOr<Dataset> ApplyTransformPipeline(const Dataset& original,
                                               std::span<const TransformSpec> specs);

// Inverse transform. When `column_order` is non-empty the result's columns
// are reordered to match it.
absl::StatusOr<Dataset> InvertTransformPipeline(const Dataset& transformed,
                                                std::span<const TransformSpec> specs,
                                                std::span<const std::string> column_order = {});

// Schema for a synthetic dataset derived from the original's schema: names
// carry the affix, only columns present in `synth` are kept, row_count and
// missing_rate describe `synth`, and the synthetic flag is set.
TableSchema DeriveSynthSchema(const TableSchema& original, const Dataset& synth,
                              const AffixRule& affix);

}  // namespace lfsd

#endif  // LFSD_SYNTHESIS_H_
