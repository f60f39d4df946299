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

#include "lfsd/checks.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "lfsd/schema_io.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

// Rows or labels spelled out in a finding before truncating.
constexpr size_t kMaxListed = 20;

template <typename T>
std::string ListSome(const std::vector<T>& items) {
  std::vector<T> shown(items.begin(), items.begin() + std::min(items.size(), kMaxListed));
  std::string out = absl::StrJoin(shown, ", ");
  if (items.size() > shown.size()) StrAppend(&out, ", ... (", items.size(), " total)");
  return out;
}

std::string Percent(double p) { return absl::StrFormat("%.4f", p); }

bool ColumnHasMissing(const Column& col) {
  return std::any_of(col.cells.begin(), col.cells.end(), IsMissing);
}

// Normalized comparison key for a rendered value.
std::string ValueKey(std::string_view rendered) { return CanonicalKey(ParseCell(rendered)); }

// Which trail actions touch the column with original name `name`.
struct Explanations {
  // Label -> label it may legitimately become.
  std::multimap<std::string, std::string> relabel;
  std::set<std::string> new_labels;
  bool precision = false;
  bool range = false;
};

Explanations ExplainFor(std::string_view name, std::span<const MitigationAction> trail,
                        const AffixRule& affix) {
  Explanations e;
  for (const MitigationAction& a : trail) {
    if (a.kind() == MitigationKind::kRemoveRecords || a.columns.empty()) continue;
    const std::string& col = a.columns[0];
    if (col != name && affix.Strip(col).value_or("") != name) continue;
    if (const auto* p = std::get_if<PoolingParams>(&a.params)) {
      for (const std::string& label : p->pooled_categories) e.relabel.emplace(label, p->pooled_label);
      e.new_labels.insert(p->pooled_label);
    } else if (const auto* p = std::get_if<CoarseningParams>(&a.params)) {
      for (const auto& [from, to] : p->mapping) {
        e.relabel.emplace(from, to);
        e.new_labels.insert(to);
      }
    } else if (std::holds_alternative<PrecisionParams>(a.params)) {
      e.precision = true;
      e.range = true;
    } else if (std::holds_alternative<CodingParams>(a.params)) {
      e.range = true;
    }
  }
  return e;
}

bool Relabelled(const Explanations& e, const std::string& from) {
  return e.relabel.contains(from);
}

bool RelabelledTo(const Explanations& e, const std::string& from, const std::string& to) {
  auto [lo, hi] = e.relabel.equal_range(from);
  return std::any_of(lo, hi, [&](const auto& kv) { return kv.second == to; });
}

std::string FormatOverride(std::string_view field, std::string_view from, std::string_view to) {
  return StrCat(field, ": ", from, " -> ", to);
}

std::string Num(double v) { return absl::StrFormat("%g", v); }

}  // namespace

std::string_view CheckIdName(CheckId id) {
  switch (id) {
    case CheckId::kLabelling:
      return "labelling";
    case CheckId::kDisclosure:
      return "disclosure";
    case CheckId::kStructure:
      return "structure";
    case CheckId::kDocumentation:
      return "documentation";
  }
  return "";
}

std::string_view VerdictName(Verdict v) { return v == Verdict::kPass ? "pass" : "fail"; }

std::string_view SeverityName(Severity s) {
  switch (s) {
    case Severity::kInfo:
      return "info";
    case Severity::kWarn:
      return "warn";
    case Severity::kFail:
      return "fail";
  }
  return "";
}

Verdict CheckOutcome::verdict() const {
  const bool failed = std::any_of(findings_.begin(), findings_.end(),
                                  [](const Finding& f) { return f.severity == Severity::kFail; });
  return failed ? Verdict::kFail : Verdict::kPass;
}

void CheckOutcome::Add(Severity severity, std::string code, std::string message,
                       std::string location) {
  findings_.push_back({severity, std::move(code), std::move(message), std::move(location)});
}

bool CheckOutcome::HasCode(std::string_view code) const {
  return std::any_of(findings_.begin(), findings_.end(),
                     [&](const Finding& f) { return f.code == code; });
}

absl::Status ReleasePolicy::CheckInvariants() const {
  auto in_unit = [](double p) { return p >= 0 && p <= 1; };
  if (!in_unit(max_replicated_unique_proportion) || !in_unit(max_unique_in_original_proportion)) {
    return MakeError(ErrorKind::kConfigError, "policy proportions must lie in [0,1]");
  }
  if (max_replicated_unique_proportion > max_unique_in_original_proportion) {
    return MakeError(ErrorKind::kConfigError,
                     "replicated-unique bound exceeds the unique-in-original bound");
  }
  if (synth_count_threshold < 1 || rarity_threshold < 1) {
    return MakeError(ErrorKind::kConfigError, "policy thresholds must be at least 1");
  }
  if (required_affix.text.empty() || required_filename_token.empty()) {
    return MakeError(ErrorKind::kConfigError, "policy affix and filename token must be non-empty");
  }
  return absl::OkStatus();
}

std::vector<std::string> ReleasePolicy::Overrides() const {
  const ReleasePolicy d;
  std::vector<std::string> out;
  if (max_replicated_unique_proportion != d.max_replicated_unique_proportion) {
    out.push_back(FormatOverride("max_replicated_unique_proportion",
                                 Num(d.max_replicated_unique_proportion),
                                 Num(max_replicated_unique_proportion)));
  }
  if (max_unique_in_original_proportion != d.max_unique_in_original_proportion) {
    out.push_back(FormatOverride("max_unique_in_original_proportion",
                                 Num(d.max_unique_in_original_proportion),
                                 Num(max_unique_in_original_proportion)));
  }
  if (gating_class != d.gating_class) {
    out.push_back(FormatOverride("gating_class", RiskyClassName(d.gating_class),
                                 RiskyClassName(gating_class)));
  }
  if (synth_count_threshold != d.synth_count_threshold) {
    out.push_back(FormatOverride("synth_count_threshold", StrCat(d.synth_count_threshold),
                                 StrCat(synth_count_threshold)));
  }
  if (rarity_threshold != d.rarity_threshold) {
    out.push_back(FormatOverride("rarity_threshold", StrCat(d.rarity_threshold),
                                 StrCat(rarity_threshold)));
  }
  if (!(required_affix == d.required_affix)) {
    out.push_back(FormatOverride("required_affix", d.required_affix.ToString(),
                                 required_affix.ToString()));
  }
  if (required_filename_token != d.required_filename_token) {
    out.push_back(FormatOverride("required_filename_token", d.required_filename_token,
                                 required_filename_token));
  }
  return out;
}

CheckOutcome CheckLabelling(std::string_view dataset_path, const TableSchema& synth_schema,
                            bool banner_present, const ReleasePolicy& policy) {
  CheckOutcome out(CheckId::kLabelling);
  if (!synth_schema.is_synthetic) {
    out.Add(Severity::kFail, "LABEL_NOT_SYNTHETIC",
            "schema header does not mark the data as synthetic", "header.is_synthetic");
  }
  if (!banner_present) {
    out.Add(Severity::kFail, "LABEL_BANNER",
            StrCat("schema does not begin with the banner line \"", kSyntheticBanner,
                         "\""),
            "header");
  }
  const std::string file = std::filesystem::path(std::string(dataset_path)).filename().string();
  if (!absl::StrContains(absl::AsciiStrToLower(file),
                         absl::AsciiStrToLower(policy.required_filename_token))) {
    out.Add(Severity::kFail, "LABEL_FILENAME",
            StrCat("file name lacks the token \"", policy.required_filename_token, "\""),
            file);
  }
  std::vector<std::string> bare;
  for (const ColumnSpec& c : synth_schema.columns) {
    if (!policy.required_affix.Matches(c.name)) bare.push_back(c.name);
  }
  if (!bare.empty()) {
    out.Add(Severity::kFail, "LABEL_AFFIX",
            StrCat("columns without the affix ", policy.required_affix.ToString(), ": ",
                         ListSome(bare)),
            absl::StrJoin(bare, ","));
  }
  return out;
}

absl::StatusOr<DisclosureResult> CheckDisclosure(const Dataset& synth, const Dataset* original,
                                                 const TableSchema& original_schema,
                                                 const KeySpec& keys,
                                                 std::span<const MitigationAction> trail,
                                                 const ReleasePolicy& policy) {
  LFSD_RETURN_IF_ERROR(policy.CheckInvariants());
  const AffixRule& affix = policy.required_affix;
  DisclosureResult result;
  CheckOutcome& out = result.outcome;

  TableSchema released_schema = original_schema;
  for (const MitigationAction& a : trail) ApplyActionToSchema(released_schema, a, affix);

  if (original == nullptr) {
    out.Add(Severity::kWarn, "DISC_KEYS_NOT_EVALUATED",
            "no original data: key matching was not evaluated");
    result.singletons = MetadataRangeExposures(released_schema);
    for (const SingletonValue& s : result.singletons) {
      out.Add(Severity::kWarn, "DISC_METADATA_RANGE",
              StrCat("declared range endpoint ", s.value,
                           " of '", s.column, "' is exposed; confirm it is not an actual value"),
              s.column);
    }
    return result;
  }

  LFSD_ASSIGN_OR_RETURN(Dataset released, ReplayValueActions(*original, trail, affix));

  if (keys.columns.empty()) {
    out.Add(Severity::kWarn, "DISC_KEYS_NOT_EVALUATED", "no key columns declared");
  } else {
    LFSD_ASSIGN_OR_RETURN(RiskReport risk, ClassifyRiskyRecords(synth, released, keys,
                                                                policy.synth_count_threshold,
                                                                affix));
    const std::string key_list = absl::StrJoin(keys.columns, ",");
    if (risk.replicated_unique_proportion() > policy.max_replicated_unique_proportion) {
      out.Add(Severity::kFail, "DISC_REPLICATED_UNIQUES",
              StrCat(risk.n_replicated_unique(), " replicated unique(s), proportion ",
                           Percent(risk.replicated_unique_proportion()), " exceeds ",
                           Percent(policy.max_replicated_unique_proportion),
                           "; rows ", ListSome(risk.replicated_unique_rows)),
              key_list);
    } else if (risk.n_replicated_unique() > 0) {
      out.Add(Severity::kInfo, "DISC_REPLICATED_UNIQUES",
              StrCat(risk.n_replicated_unique(), " replicated unique(s) within bound"),
              key_list);
    }
    const bool gated = policy.gating_class == RiskyClass::kUniqueInOriginal;
    if (gated && risk.unique_in_original_proportion() > policy.max_unique_in_original_proportion) {
      out.Add(Severity::kFail, "DISC_UNIQUES_IN_ORIGINAL",
              StrCat(risk.n_unique_in_original(), " unique(s) in the original, proportion ",
                           Percent(risk.unique_in_original_proportion()), " exceeds ",
                           Percent(policy.max_unique_in_original_proportion), "; rows ",
                           ListSome(risk.unique_in_original_rows)),
              key_list);
    } else if (risk.n_unique_in_original() > 0) {
      out.Add(Severity::kInfo, "DISC_UNIQUES_IN_ORIGINAL",
              StrCat(risk.n_unique_in_original(), " unique(s) in the original",
                           gated ? " within bound" : " (class not gated)"),
              key_list);
    }
    result.risk = std::move(risk);
  }

  result.singletons = DetectSingletonValues(released, released_schema, policy.rarity_threshold);
  for (const SingletonValue& s : result.singletons) {
    const int col = ResolveColumn(synth, s.column, affix);
    if (col < 0) continue;  // not released
    const std::string key = ValueKey(s.value);
    const bool released_value =
        std::any_of(synth.column(col).cells.begin(), synth.column(col).cells.end(),
                    [&](const Cell& c) { return !IsMissing(c) && ValueKey(RenderCell(c)) == key; });
    if (!released_value) continue;
    out.Add(Severity::kFail, "DISC_SINGLETON_VALUE",
            StrCat("'", s.column, "' value ", s.value, " occurs ", s.count,
                         " time(s) in the original (threshold ", policy.rarity_threshold,
                         ")", s.is_range_endpoint ? ", a range endpoint," : "",
                         " and is released"),
            synth.column(col).name);
  }
  return result;
}

CheckOutcome CheckStructure(const TableSchema& original_schema, const TableSchema& synth_schema,
                            const Dataset& synth_data, std::span<const MitigationAction> trail,
                            const ReleasePolicy& policy) {
  CheckOutcome out(CheckId::kStructure);
  const AffixRule& affix = policy.required_affix;
  auto base_name = [&](const std::string& n) -> std::optional<std::string> {
    if (auto s = affix.Strip(n); s && original_schema.FindColumn(*s)) return *s;
    if (original_schema.FindColumn(n)) return n;
    return std::nullopt;
  };

  std::set<std::string> reported;
  TableSchema known = synth_schema;
  known.columns.clear();
  for (const ColumnSpec& c : synth_schema.columns) {
    if (base_name(c.name)) {
      known.columns.push_back(c);
    } else if (reported.insert(c.name).second) {
      out.Add(Severity::kFail, "STRUCT_UNKNOWN_COLUMN",
              StrCat("'", c.name, "' has no counterpart in the original"), c.name);
    }
  }
  for (const Column& c : synth_data.columns()) {
    if (!base_name(c.name) && reported.insert(c.name).second) {
      out.Add(Severity::kFail, "STRUCT_UNKNOWN_COLUMN",
              StrCat("'", c.name, "' has no counterpart in the original"), c.name);
    }
  }

  absl::StatusOr<SchemaDiff> diff = DiffSchemas(original_schema, known, affix);
  if (!diff.ok()) {
    out.Add(Severity::kFail, "STRUCT_SCHEMA_VIOLATION", std::string(diff.status().message()));
    return out;
  }

  for (const ColumnDiff& d : diff->columns) {
    if (d.missing_in_synth()) {
      out.Add(Severity::kInfo, "STRUCT_COLUMN_OMITTED",
              StrCat("'", d.original_name, "' is not released"), d.original_name);
      continue;
    }
    const std::string& loc = *d.synth_name;
    const Explanations why = ExplainFor(d.original_name, trail, affix);
    if (d.kind_change) {
      out.Add(Severity::kFail, "STRUCT_KIND_MISMATCH",
              StrCat("kind ", ColumnKindName(d.kind_change->first), " became ",
                           ColumnKindName(d.kind_change->second)),
              loc);
    }

    std::vector<std::string> unexplained;
    std::vector<std::string> explained;
    for (const auto& [from, to] : d.pooled_categories) {
      (RelabelledTo(why, from, to) ? explained : unexplained)
          .push_back(StrCat(from, " -> ", to));
    }
    for (const std::string& label : d.removed_categories) {
      (Relabelled(why, label) ? explained : unexplained).push_back(StrCat("-", label));
    }
    for (const std::string& label : d.added_categories) {
      (why.new_labels.contains(label) ? explained : unexplained)
          .push_back(StrCat("+", label));
    }
    if (!unexplained.empty()) {
      out.Add(Severity::kFail, "STRUCT_CATEGORY_MISMATCH",
              StrCat("category changes not explained by the mitigation trail: ",
                           ListSome(unexplained)),
              loc);
    }
    if (!explained.empty()) {
      out.Add(Severity::kInfo, "STRUCT_DOCUMENTED_DIFFERENCE",
              StrCat("categories changed by mitigation: ", ListSome(explained)), loc);
    }

    if (d.precision_change) {
      const std::string msg = StrCat("precision ", d.precision_change->first, " became ",
                                           d.precision_change->second);
      if (why.precision) {
        out.Add(Severity::kInfo, "STRUCT_DOCUMENTED_DIFFERENCE",
                StrCat(msg, " by precision reduction"), loc);
      } else {
        out.Add(Severity::kFail, "STRUCT_PRECISION_MISMATCH", msg, loc);
      }
    }
    if (d.range_change) {
      out.Add(why.range ? Severity::kInfo : Severity::kWarn,
              why.range ? "STRUCT_DOCUMENTED_DIFFERENCE" : "STRUCT_RANGE_DIFFERENCE",
              why.range ? "range changed by mitigation" : "range differs from the original",
              loc);
    }

    // Presence of missing values is judged on the released data itself.
    const ColumnSpec* orig = original_schema.FindColumn(d.original_name);
    const int col = synth_data.FindColumn(loc);
    const bool synth_missing = col >= 0 ? ColumnHasMissing(synth_data.column(col))
                                        : synth_schema.FindColumn(loc)->missing_allowed;
    if (orig->missing_allowed != synth_missing) {
      out.Add(Severity::kFail, "MISSINGNESS_DISAGREE",
              StrCat("original ", orig->missing_allowed ? "has" : "has no",
                           " missing values, synthetic ", synth_missing ? "has" : "has none"),
              loc);
    }
  }

  // Cell-level conformance of the released data to its own schema.
  std::map<std::pair<std::string, ViolationKind>, std::vector<size_t>> grouped;
  for (const Violation& v : Validate(synth_data, known)) {
    if (reported.contains(v.column)) continue;
    auto& rows = grouped[{v.column, v.kind}];
    if (v.row) rows.push_back(*v.row);
  }
  for (const auto& [key, rows] : grouped) {
    out.Add(Severity::kFail, "STRUCT_SCHEMA_VIOLATION",
            StrCat(ViolationKindName(key.second),
                         rows.empty() ? "" : StrCat(" at rows ", ListSome(rows))),
            key.first);
  }
  return out;
}

std::string ExpectationStatement(SynthesisMethod method) {
  if (method == SynthesisMethod::kFromMargins) {
    return "Each column was resampled on its own from the original column, so only tables of "
           "one variable at a time are expected to resemble those from the original data. "
           "Cross-tabulations, correlations, regression models and any other result that "
           "involves two or more variables are not expected to resemble the original.";
  }
  return "Values were drawn from the declared metadata alone, without access to any record, so "
         "no tables calculated from this synthetic data are expected to resemble those from "
         "the original data.";
}

absl::StatusOr<DocBundle> GenerateDocumentation(std::string_view original_metadata_reference,
                                                const SynthesisConfig& config,
                                                const SchemaDiff& diff,
                                                std::span<const MitigationAction> trail,
                                                const ReleasePolicy& policy) {
  if (original_metadata_reference.empty()) {
    return MakeError(ErrorKind::kMissingOriginalReference,
                     "no pointer to the original metadata was supplied");
  }
  DocBundle b;
  b.original_metadata_reference = std::string(original_metadata_reference);
  b.method = config.method;
  b.config = config;
  b.diff = diff;
  b.trail.assign(trail.begin(), trail.end());
  b.expectation_statement = ExpectationStatement(config.method);
  b.policy_overrides = policy.Overrides();
  return b;
}

CheckOutcome CheckDocumentation(const DocBundle& bundle, const SchemaDiff& diff) {
  CheckOutcome out(CheckId::kDocumentation);
  if (bundle.original_metadata_reference.empty()) {
    out.Add(Severity::kFail, "DOC_MISSING_REFERENCE",
            "the bundle does not point to the original metadata");
  }
  if (bundle.expectation_statement != ExpectationStatement(bundle.method)) {
    out.Add(Severity::kFail, "DOC_EXPECTATION_MISMATCH",
            StrCat("expectation statement does not match method ",
                         SynthesisMethodName(bundle.method)));
  }
  std::vector<std::string> undocumented;
  for (const ColumnDiff& d : diff.columns) {
    if (!d.HasStructuralDifference() && !d.missing_in_synth()) continue;
    const ColumnDiff* listed = bundle.diff.Find(d.original_name);
    if (listed == nullptr || listed->missing_in_synth() != d.missing_in_synth() ||
        listed->HasStructuralDifference() != d.HasStructuralDifference()) {
      undocumented.push_back(d.original_name);
    }
  }
  if (!undocumented.empty()) {
    out.Add(Severity::kFail, "DOC_DIFF_INCOMPLETE",
            StrCat("differences not listed for: ", ListSome(undocumented)));
  }
  if (!bundle.policy_overrides.empty()) {
    out.Add(Severity::kInfo, "DOC_POLICY_OVERRIDES",
            StrCat("policy differs from defaults: ",
                         absl::StrJoin(bundle.policy_overrides, "; ")));
  }
  return out;
}

}  // namespace lfsd
