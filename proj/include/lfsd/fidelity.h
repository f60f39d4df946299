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

// What low-fidelity data preserves, measured with total variation distance:
// per-column margins against the original, and how far a pair of columns is
// from empirical independence.

#ifndef LFSD_FIDELITY_H_
#define LFSD_FIDELITY_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/affix.h"
#include "lfsd/dataset.h"

namespace lfsd {

inline constexpr int kDefaultBinCount = 10;

// Bin edges e0 < ... < ek define k bins [e_i, e_{i+1}), the last one closed.
// Values below e0 or above ek fall into two overflow cells so that values
// outside the reference range still count as different.
struct BinSpec {
  std::vector<double> edges;

  static BinSpec EqualWidth(double min, double max, int bins = kDefaultBinCount);
  // Label of the cell `value` falls into.
  std::string CellFor(double value) const;
};

// Distribution over cells, probabilities summing to one (empty if no rows).
using Distribution = std::map<std::string, double>;

double TotalVariationDistance(const Distribution& p, const Distribution& q);

// Empirical distribution of a column. Categorical cells by label, numeric
// and date cells by bin (bins required), missing as its own cell.
Distribution EmpiricalDistribution(const Column& column, const std::optional<BinSpec>& bins);

enum class MarginStatistic { kTvdCategorical, kTvdBinnedNumeric };

std::string_view MarginStatisticName(MarginStatistic s);

struct MarginComparison {
  std::string column;
  MarginStatistic statistic = MarginStatistic::kTvdCategorical;
  double value = 0;
  std::optional<BinSpec> bins;
  size_t n_original = 0;
  size_t n_synth = 0;
};

// TVD between the column's margin in `original` and in `synth` (found via
// `affix`). Numeric/date columns default to kDefaultBinCount equal-width
// bins over the original's observed range.
absl::StatusOr<MarginComparison> CompareMargin(const Dataset& original, const Dataset& synth,
                                               std::string_view column,
                                               std::optional<BinSpec> bins = std::nullopt,
                                               const AffixRule& affix = {});

// TVD between the empirical joint distribution of two columns and the product
// of their empirical margins; 0 means exact empirical independence. Numeric
// columns default to equal-width bins over their own range.
absl::StatusOr<double> PairwiseAssociation(const Dataset& data, std::string_view column_a,
                                           std::string_view column_b,
                                           std::optional<BinSpec> bins_a = std::nullopt,
                                           std::optional<BinSpec> bins_b = std::nullopt);

struct PairAssociation {
  std::string column_a;
  std::string column_b;
  double original = 0;
  double synth = 0;
};

struct FidelityReport {
  std::vector<MarginComparison> margins;
  std::vector<PairAssociation> pairs;
};

// Margins for every synthetic column and association for every pair of them,
// on both sides.
absl::StatusOr<FidelityReport> BuildFidelityReport(const Dataset& original, const Dataset& synth,
                                                   const AffixRule& affix);

}  // namespace lfsd

#endif  // LFSD_FIDELITY_H_
