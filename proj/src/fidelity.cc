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

#include "lfsd/fidelity.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

constexpr char kBelowCell[] = "b:below";
constexpr char kAboveCell[] = "b:above";

bool IsOrdered(const Column& col) {
  return std::any_of(col.cells.begin(), col.cells.end(),
                     [](const Cell& c) { return NumericValue(c).has_value(); });
}

std::optional<std::pair<double, double>> ObservedRange(const Column& col) {
  std::optional<std::pair<double, double>> r;
  for (const Cell& c : col.cells) {
    if (std::optional<double> v = NumericValue(c)) {
      r = r ? std::pair{std::min(r->first, *v), std::max(r->second, *v)} : std::pair{*v, *v};
    }
  }
  return r;
}

// Equal-width bins over `reference`, or nullopt for label columns.
std::optional<BinSpec> DefaultBins(const Column& reference, const Column* fallback = nullptr) {
  std::optional<std::pair<double, double>> r = ObservedRange(reference);
  if (!r && fallback != nullptr) r = ObservedRange(*fallback);
  if (!r) return std::nullopt;
  return BinSpec::EqualWidth(r->first, r->second);
}

std::string CellLabel(const Cell& c, const std::optional<BinSpec>& bins) {
  if (bins) {
    if (std::optional<double> v = NumericValue(c)) return bins->CellFor(*v);
  }
  return CanonicalKey(c);
}

}  // namespace

BinSpec BinSpec::EqualWidth(double min, double max, int bins) {
  BinSpec spec;
  if (!(max > min) || bins < 1) {
    spec.edges = {min, min};
    return spec;
  }
  const double width = (max - min) / bins;
  for (int i = 0; i < bins; ++i) spec.edges.push_back(min + width * i);
  spec.edges.push_back(max);
  return spec;
}

std::string BinSpec::CellFor(double value) const {
  if (edges.empty()) return "b:all";
  if (value < edges.front()) return kBelowCell;
  if (value > edges.back()) return kAboveCell;
  const size_t last = edges.size() >= 2 ? edges.size() - 2 : 0;
  size_t i = static_cast<size_t>(std::upper_bound(edges.begin(), edges.end(), value) -
                                 edges.begin());
  i = i == 0 ? 0 : std::min(i - 1, last);
  return absl::StrFormat("b:%03d", i);
}

double TotalVariationDistance(const Distribution& p, const Distribution& q) {
  double sum = 0;
  for (const auto& [k, pv] : p) {
    auto it = q.find(k);
    sum += std::fabs(pv - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, qv] : q) {
    if (!p.contains(k)) sum += qv;
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

Distribution EmpiricalDistribution(const Column& column, const std::optional<BinSpec>& bins) {
  Distribution d;
  if (column.cells.empty()) return d;
  const double w = 1.0 / static_cast<double>(column.cells.size());
  for (const Cell& c : column.cells) d[CellLabel(c, bins)] += w;
  return d;
}

std::string_view MarginStatisticName(MarginStatistic s) {
  return s == MarginStatistic::kTvdCategorical ? "tvd_categorical" : "tvd_binned_numeric";
}

absl::StatusOr<MarginComparison> CompareMargin(const Dataset& original, const Dataset& synth,
                                               std::string_view column,
                                               std::optional<BinSpec> bins,
                                               const AffixRule& affix) {
  const int o = original.FindColumn(column);
  const int s = ResolveColumn(synth, column, affix);
  if (o < 0 || s < 0) {
    return MakeError(ErrorKind::kUnknownColumn,
                     StrCat("column '", column, "' not in both datasets"));
  }
  const Column& oc = original.column(o);
  const Column& sc = synth.column(s);
  MarginComparison m;
  m.column = std::string(column);
  m.n_original = oc.cells.size();
  m.n_synth = sc.cells.size();
  if (IsOrdered(oc) || IsOrdered(sc)) {
    if (!bins) bins = DefaultBins(oc, &sc);
    m.statistic = MarginStatistic::kTvdBinnedNumeric;
    m.bins = bins;
  }
  m.value = TotalVariationDistance(EmpiricalDistribution(oc, m.bins),
                                   EmpiricalDistribution(sc, m.bins));
  return m;
}

absl::StatusOr<double> PairwiseAssociation(const Dataset& data, std::string_view column_a,
                                           std::string_view column_b,
                                           std::optional<BinSpec> bins_a,
                                           std::optional<BinSpec> bins_b) {
  const int a = data.FindColumn(column_a);
  const int b = data.FindColumn(column_b);
  if (a < 0 || b < 0) {
    return MakeError(ErrorKind::kUnknownColumn,
                     StrCat("pair ('", column_a, "', '", column_b, "') not in the data"));
  }
  const Column& ca = data.column(a);
  const Column& cb = data.column(b);
  if (!bins_a) bins_a = DefaultBins(ca);
  if (!bins_b) bins_b = DefaultBins(cb);
  const size_t n = data.row_count();
  if (n == 0) return 0.0;
  const double w = 1.0 / static_cast<double>(n);
  Distribution pa, pb;
  std::map<std::pair<std::string, std::string>, double> joint;
  for (size_t r = 0; r < n; ++r) {
    std::string la = CellLabel(ca.cells[r], bins_a);
    std::string lb = CellLabel(cb.cells[r], bins_b);
    pa[la] += w;
    pb[lb] += w;
    joint[{std::move(la), std::move(lb)}] += w;
  }
  // Cells outside the joint support contribute their product mass, which
  // totals one minus the product mass on the support.
  double on_support = 0;
  double product_on_support = 0;
  for (const auto& [key, pj] : joint) {
    const double prod = pa[key.first] * pb[key.second];
    on_support += std::fabs(pj - prod);
    product_on_support += prod;
  }
  const double off_support = std::max(0.0, 1.0 - product_on_support);
  return std::clamp(0.5 * (on_support + off_support), 0.0, 1.0);
}

absl::StatusOr<FidelityReport> BuildFidelityReport(const Dataset& original, const Dataset& synth,
                                                   const AffixRule& affix) {
  FidelityReport report;
  std::vector<std::string> names;
  for (const Column& c : synth.columns()) {
    const std::string base = affix.Strip(c.name).value_or(c.name);
    if (original.FindColumn(base) < 0) continue;
    LFSD_ASSIGN_OR_RETURN(MarginComparison m, CompareMargin(original, synth, base, {}, affix));
    report.margins.push_back(std::move(m));
    names.push_back(base);
  }
  for (size_t i = 0; i < names.size(); ++i) {
    for (size_t j = i + 1; j < names.size(); ++j) {
      const Column& oa = original.column(original.FindColumn(names[i]));
      const Column& ob = original.column(original.FindColumn(names[j]));
      const std::optional<BinSpec> ba = DefaultBins(oa);
      const std::optional<BinSpec> bb = DefaultBins(ob);
      PairAssociation p{names[i], names[j], 0, 0};
      LFSD_ASSIGN_OR_RETURN(p.original, PairwiseAssociation(original, names[i], names[j], ba, bb));
      LFSD_ASSIGN_OR_RETURN(
          p.synth, PairwiseAssociation(synth, synth.column(ResolveColumn(synth, names[i], affix)).name,
                                       synth.column(ResolveColumn(synth, names[j], affix)).name,
                                       ba, bb));
      report.pairs.push_back(std::move(p));
    }
  }
  return report;
}

}  // namespace lfsd
