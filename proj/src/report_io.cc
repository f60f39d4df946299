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

#include "lfsd/report_io.h"

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "lfsd/config.h"
#include "lfsd/schema_io.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

using json = nlohmann::ordered_json;

constexpr char kPolicyNote[] =
    "Risk bounds and thresholds are release policy set by the data controller; the "
    "defaults are tool choices, not published standards.";

json CodingModeToJson(const CodingMode& mode) {
  json j;
  if (mode.type == CodingMode::Type::kPercentile) {
    j["mode"] = "percentile";
    j["p_low"] = mode.p_low;
    j["p_high"] = mode.p_high;
  } else {
    j["mode"] = "count_threshold";
    j["count_threshold"] = mode.count_threshold;
  }
  return j;
}

json ParamsToJson(const MitigationParams& params) {
  json j = json::object();
  if (const auto* p = std::get_if<PrecisionParams>(&params)) {
    if (p->unit) j["unit"] = *p->unit;
    if (p->granularity) j["granularity"] = GranularityName(*p->granularity);
  } else if (const auto* p = std::get_if<CodingParams>(&params)) {
    j = CodingModeToJson(p->mode);
    j["cuts"] = {{"lower", p->cuts.lower}, {"upper", p->cuts.upper}};
  } else if (const auto* p = std::get_if<PoolingParams>(&params)) {
    j["count_threshold"] = p->count_threshold;
    j["pooled_label"] = p->pooled_label;
    j["pooled_categories"] = p->pooled_categories;
  } else if (const auto* p = std::get_if<RemovalParams>(&params)) {
    j["risky_class"] = RiskyClassName(p->risky_class);
    j["removed_rows"] = p->removed_rows;
  } else if (const auto* p = std::get_if<CoarseningParams>(&params)) {
    json m = json::object();
    for (const auto& [from, to] : p->mapping) m[from] = to;
    j["mapping"] = std::move(m);
  }
  return j;
}

absl::Status Bad(std::string_view what) {
  return MakeError(ErrorKind::kParseError, StrCat("mitigation action: ", what));
}

template <typename T>
absl::StatusOr<T> Field(const json& j, const char* key) {
  if (!j.contains(key)) return Bad(StrCat("missing '", key, "'"));
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    return Bad(StrCat("'", key, "' has the wrong type"));
  }
}

std::string Fixed(double v) { return absl::StrFormat("%.4f", v); }

// Escapes the characters that would break a Markdown table cell.
std::string MdCell(std::string_view s) {
  return absl::StrReplaceAll(ToAbsl(s), {{"|", "\\|"}, {"\n", " "}});
}

void AppendOutcomeMarkdown(std::string& out, const CheckOutcome& o, std::string_view title) {
  StrAppend(&out, "## ", title, ": ", absl::AsciiStrToUpper(ToAbsl(VerdictName(o.verdict()))),
                  "\n\n");
  if (o.findings().empty()) {
    StrAppend(&out, "No findings.\n\n");
    return;
  }
  StrAppend(&out, "| severity | code | location | message |\n|---|---|---|---|\n");
  for (const Finding& f : o.findings()) {
    StrAppend(&out, "| ", SeverityName(f.severity), " | ", f.code, " | ", MdCell(f.location),
                    " | ", MdCell(f.message), " |\n");
  }
  StrAppend(&out, "\n");
}

std::string ActionSummary(const MitigationAction& a) {
  std::string params = ParamsToJson(a.params).dump();
  return StrCat(a.applied_at, ". ", MitigationKindName(a.kind()), " on ",
                      absl::StrJoin(a.columns, ", "), a.changed ? "" : " (no change)", ": ",
                      params);
}

}  // namespace

json RiskReportToJson(const RiskReport& r) {
  json j;
  j["n_synth"] = r.n_synth;
  j["synth_count_threshold"] = r.synth_count_threshold;
  j["keys"] = r.keys;
  j["counts"] = {{"synth_unique", r.n_synth_unique()},
                 {"replicated_unique", r.n_replicated_unique()},
                 {"unique_in_original", r.n_unique_in_original()}};
  j["proportions"] = {{"synth_unique", r.synth_unique_proportion()},
                      {"replicated_unique", r.replicated_unique_proportion()},
                      {"unique_in_original", r.unique_in_original_proportion()}};
  j["rows"] = {{"synth_unique", r.synth_unique_rows},
               {"replicated_unique", r.replicated_unique_rows},
               {"unique_in_original", r.unique_in_original_rows}};
  return j;
}

json SingletonsToJson(const std::vector<SingletonValue>& singletons) {
  json a = json::array();
  for (const SingletonValue& s : singletons) {
    a.push_back({{"column", s.column},
                 {"value", s.value},
                 {"count", s.count},
                 {"is_range_endpoint", s.is_range_endpoint}});
  }
  return a;
}

json MitigationActionToJson(const MitigationAction& action) {
  json j;
  j["applied_at"] = action.applied_at;
  j["kind"] = MitigationKindName(action.kind());
  j["columns"] = action.columns;
  j["changed"] = action.changed;
  j["parameters"] = ParamsToJson(action.params);
  return j;
}

absl::StatusOr<MitigationAction> MitigationActionFromJson(const json& j) {
  if (!j.is_object()) return Bad("not an object");
  MitigationAction a;
  LFSD_ASSIGN_OR_RETURN(a.applied_at, Field<size_t>(j, "applied_at"));
  LFSD_ASSIGN_OR_RETURN(a.columns, Field<std::vector<std::string>>(j, "columns"));
  LFSD_ASSIGN_OR_RETURN(a.changed, Field<bool>(j, "changed"));
  LFSD_ASSIGN_OR_RETURN(std::string kind_name, Field<std::string>(j, "kind"));
  const std::optional<MitigationKind> kind = ParseMitigationKind(kind_name);
  if (!kind) return Bad(StrCat("unknown kind '", kind_name, "'"));
  if (!j.contains("parameters") || !j["parameters"].is_object()) return Bad("missing parameters");
  const json& p = j["parameters"];
  switch (*kind) {
    case MitigationKind::kReducePrecision: {
      PrecisionParams pp;
      if (p.contains("unit")) {
        LFSD_ASSIGN_OR_RETURN(pp.unit, Field<double>(p, "unit"));
      }
      if (p.contains("granularity")) {
        LFSD_ASSIGN_OR_RETURN(std::string g, Field<std::string>(p, "granularity"));
        pp.granularity = ParseGranularity(g);
        if (!pp.granularity) return Bad("bad granularity");
      }
      a.params = pp;
      break;
    }
    case MitigationKind::kTopBottomCode: {
      CodingParams cp;
      LFSD_ASSIGN_OR_RETURN(std::string mode, Field<std::string>(p, "mode"));
      if (mode == "percentile") {
        LFSD_ASSIGN_OR_RETURN(double lo, Field<double>(p, "p_low"));
        LFSD_ASSIGN_OR_RETURN(double hi, Field<double>(p, "p_high"));
        cp.mode = CodingMode::Percentile(lo, hi);
      } else {
        LFSD_ASSIGN_OR_RETURN(int64_t t, Field<int64_t>(p, "count_threshold"));
        cp.mode = CodingMode::CountThreshold(t);
      }
      if (!p.contains("cuts")) return Bad("missing cuts");
      LFSD_ASSIGN_OR_RETURN(cp.cuts.lower, Field<double>(p["cuts"], "lower"));
      LFSD_ASSIGN_OR_RETURN(cp.cuts.upper, Field<double>(p["cuts"], "upper"));
      a.params = cp;
      break;
    }
    case MitigationKind::kPoolCategories: {
      PoolingParams pp;
      LFSD_ASSIGN_OR_RETURN(pp.count_threshold, Field<int64_t>(p, "count_threshold"));
      LFSD_ASSIGN_OR_RETURN(pp.pooled_label, Field<std::string>(p, "pooled_label"));
      LFSD_ASSIGN_OR_RETURN(pp.pooled_categories,
                            Field<std::vector<std::string>>(p, "pooled_categories"));
      a.params = pp;
      break;
    }
    case MitigationKind::kRemoveRecords: {
      RemovalParams rp;
      LFSD_ASSIGN_OR_RETURN(std::string c, Field<std::string>(p, "risky_class"));
      std::optional<RiskyClass> rc = ParseRiskyClass(c);
      if (!rc) return Bad("bad risky_class");
      rp.risky_class = *rc;
      LFSD_ASSIGN_OR_RETURN(rp.removed_rows, Field<std::vector<size_t>>(p, "removed_rows"));
      a.params = rp;
      break;
    }
    case MitigationKind::kCoarsenKey: {
      CoarseningParams cp;
      LFSD_ASSIGN_OR_RETURN(cp.mapping,
                            (Field<std::map<std::string, std::string>>(p, "mapping")));
      a.params = cp;
      break;
    }
  }
  return a;
}

json TrailToJson(const std::vector<MitigationAction>& trail) {
  json a = json::array();
  for (const MitigationAction& m : trail) a.push_back(MitigationActionToJson(m));
  return a;
}

json CheckOutcomeToJson(const CheckOutcome& outcome) {
  json j;
  j["check"] = CheckIdName(outcome.id());
  j["verdict"] = VerdictName(outcome.verdict());
  json findings = json::array();
  for (const Finding& f : outcome.findings()) {
    findings.push_back({{"severity", SeverityName(f.severity)},
                        {"code", f.code},
                        {"message", f.message},
                        {"location", f.location}});
  }
  j["findings"] = std::move(findings);
  return j;
}

json PolicyToJson(const ReleasePolicy& policy) {
  json j;
  j["note"] = kPolicyNote;
  j["max_replicated_unique_proportion"] = policy.max_replicated_unique_proportion;
  j["max_unique_in_original_proportion"] = policy.max_unique_in_original_proportion;
  j["gating_class"] = RiskyClassName(policy.gating_class);
  j["synth_count_threshold"] = policy.synth_count_threshold;
  j["rarity_threshold"] = policy.rarity_threshold;
  j["required_affix"] = policy.required_affix.ToString();
  j["required_filename_token"] = policy.required_filename_token;
  j["overrides"] = policy.Overrides();
  return j;
}

json FidelityToJson(const FidelityReport& fidelity) {
  json margins = json::array();
  for (const MarginComparison& m : fidelity.margins) {
    json e;
    e["column"] = m.column;
    e["statistic"] = MarginStatisticName(m.statistic);
    e["value"] = m.value;
    if (m.bins) e["bin_edges"] = m.bins->edges;
    e["n_original"] = m.n_original;
    e["n_synth"] = m.n_synth;
    margins.push_back(std::move(e));
  }
  json pairs = json::array();
  for (const PairAssociation& p : fidelity.pairs) {
    pairs.push_back({{"column_a", p.column_a},
                     {"column_b", p.column_b},
                     {"association_original", p.original},
                     {"association_synthetic", p.synth}});
  }
  return {{"margins", std::move(margins)}, {"pairs", std::move(pairs)}};
}

json DocBundleToJson(const DocBundle& b) {
  json j;
  j["status"] = b.draft ? "DRAFT" : "final";
  j["original_metadata_reference"] = b.original_metadata_reference;
  json synthesis;
  synthesis["method"] = SynthesisMethodName(b.method);
  synthesis["n_synth"] = b.config.n_synth;
  synthesis["seed"] = b.config.seed;
  synthesis["affix"] = b.config.affix.ToString();
  if (b.method == SynthesisMethod::kFromMetadata) {
    synthesis["metadata_missing_rate"] = b.config.metadata_missing_rate;
  }
  json transforms = json::array();
  for (const TransformSpec& t : b.config.transforms) transforms.push_back(TransformSpecToJson(t));
  synthesis["transforms"] = std::move(transforms);
  j["synthesis"] = std::move(synthesis);
  j["expectation_statement"] = b.expectation_statement;
  j["schema_diff"] = SchemaDiffToJson(b.diff);
  j["mitigation_trail"] = TrailToJson(b.trail);
  j["policy_overrides"] = b.policy_overrides;
  return j;
}

json FullReportToJson(const FullReport& r) {
  json j;
  j["overall_verdict"] = r.overall_pass() ? "pass" : "fail";
  j["synthetic_data_file"] = r.synthetic_data_file;
  j["synthetic_schema_file"] = r.synthetic_schema_file;
  j["labelling"] = CheckOutcomeToJson(r.labelling);
  json disclosure = CheckOutcomeToJson(r.disclosure);
  if (r.risk) {
    disclosure["risk"] = RiskReportToJson(*r.risk);
  } else {
    disclosure["risk"] = {{"key_matching", "not_evaluated"}};
  }
  disclosure["singleton_values"] = SingletonsToJson(r.singletons);
  j["disclosure"] = std::move(disclosure);
  j["structure"] = CheckOutcomeToJson(r.structure);
  json documentation = CheckOutcomeToJson(r.documentation);
  documentation["docbundle"] = DocBundleToJson(r.doc);
  j["documentation"] = std::move(documentation);
  j["policy"] = PolicyToJson(r.policy);
  j["trail"] = TrailToJson(r.trail);
  if (r.fidelity) j["fidelity"] = FidelityToJson(*r.fidelity);
  return j;
}

std::string DumpJson(const json& j) { return StrCat(j.dump(2), "\n"); }

std::string RenderRiskReportMarkdown(const RiskReport& r) {
  std::string out;
  StrAppend(&out, "Keys: ", absl::StrJoin(r.keys, ", "), " (synthetic count threshold ",
                  r.synth_count_threshold, ")\n\n");
  StrAppend(&out, "| class | records | proportion of ", r.n_synth, " |\n|---|---|---|\n");
  StrAppend(&out, "| synthetic unique | ", r.n_synth_unique(), " | ",
                  Fixed(r.synth_unique_proportion()), " |\n");
  StrAppend(&out, "| unique in original | ", r.n_unique_in_original(), " | ",
                  Fixed(r.unique_in_original_proportion()), " |\n");
  StrAppend(&out, "| replicated unique | ", r.n_replicated_unique(), " | ",
                  Fixed(r.replicated_unique_proportion()), " |\n\n");
  return out;
}

std::string RenderFidelityMarkdown(const FidelityReport& f) {
  std::string out = "| column | statistic | TVD |\n|---|---|---|\n";
  for (const MarginComparison& m : f.margins) {
    StrAppend(&out, "| ", MdCell(m.column), " | ", MarginStatisticName(m.statistic), " | ",
                    Fixed(m.value), " |\n");
  }
  if (!f.pairs.empty()) {
    StrAppend(&out, "\n| pair | association (original) | association (synthetic) |\n"
                          "|---|---|---|\n");
    for (const PairAssociation& p : f.pairs) {
      StrAppend(&out, "| ", MdCell(p.column_a), " x ", MdCell(p.column_b), " | ",
                      Fixed(p.original), " | ", Fixed(p.synth), " |\n");
    }
  }
  StrAppend(&out, "\n");
  return out;
}

std::string RenderDocBundleMarkdown(const DocBundle& b) {
  std::string out;
  StrAppend(&out, "# Synthetic data documentation", b.draft ? " (DRAFT)" : "", "\n\n");
  StrAppend(&out, kSyntheticBanner, "\n\n");
  StrAppend(&out, "Original metadata: ",
                  b.original_metadata_reference.empty() ? "(missing)"
                                                        : b.original_metadata_reference,
                  "\n\n");
  StrAppend(&out, "## What to expect\n\n", b.expectation_statement, "\n\n");
  StrAppend(&out, "## Synthesis\n\n- method: ", SynthesisMethodName(b.method),
                  "\n- rows drawn: ", b.config.n_synth, "\n- seed: ", b.config.seed,
                  "\n- column affix: ", b.config.affix.ToString(), "\n");
  if (b.method == SynthesisMethod::kFromMetadata) {
    StrAppend(&out, "- missing-value rate for columns that allow missing: ",
                    b.config.metadata_missing_rate, "\n");
  }
  for (const TransformSpec& t : b.config.transforms) {
    StrAppend(&out, "- transform: ", TransformSpecToJson(t).dump(), "\n");
  }
  StrAppend(&out, "\n## Differences from the original\n\n");
  bool any = false;
  for (const ColumnDiff& d : b.diff.columns) {
    std::vector<std::string> items;
    if (d.missing_in_synth()) items.push_back("not released");
    for (const auto& [from, to] : d.pooled_categories) {
      items.push_back(StrCat("category ", from, " pooled into ", to));
    }
    for (const std::string& c : d.removed_categories) items.push_back(StrCat("category ", c, " removed"));
    for (const std::string& c : d.added_categories) items.push_back(StrCat("category ", c, " added"));
    if (d.kind_change) {
      items.push_back(StrCat("kind ", ColumnKindName(d.kind_change->first), " -> ",
                                   ColumnKindName(d.kind_change->second)));
    }
    if (d.precision_change) {
      items.push_back(StrCat("precision ", d.precision_change->first, " -> ",
                                   d.precision_change->second));
    }
    if (d.range_change) items.push_back("range changed");
    if (d.missingness_mismatch) items.push_back("presence of missing values differs");
    if (items.empty()) continue;
    any = true;
    StrAppend(&out, "- ", d.original_name,
                    d.synth_name ? StrCat(" (", *d.synth_name, ")") : std::string(), ": ",
                    absl::StrJoin(items, "; "), "\n");
  }
  if (!any) StrAppend(&out, "None beyond the column-name affix.\n");
  StrAppend(&out, "\n## Mitigations applied\n\n");
  if (b.trail.empty()) StrAppend(&out, "None.\n");
  for (const MitigationAction& a : b.trail) StrAppend(&out, "- ", ActionSummary(a), "\n");
  if (!b.policy_overrides.empty()) {
    StrAppend(&out, "\n## Policy overrides\n\n");
    for (const std::string& o : b.policy_overrides) StrAppend(&out, "- ", o, "\n");
  }
  return out;
}

std::string RenderFullReportMarkdown(const FullReport& r) {
  std::string out;
  StrAppend(&out, "# Release check report: ", r.overall_pass() ? "PASS" : "FAIL", "\n\n");
  StrAppend(&out, "Synthetic data file: ", r.synthetic_data_file, "\n\n");
  StrAppend(&out, "| check | verdict |\n|---|---|\n");
  for (const CheckOutcome* o : {&r.labelling, &r.disclosure, &r.structure, &r.documentation}) {
    StrAppend(&out, "| ", CheckIdName(o->id()), " | ", VerdictName(o->verdict()), " |\n");
  }
  StrAppend(&out, "\n");
  AppendOutcomeMarkdown(out, r.labelling, "1. Labelling");
  AppendOutcomeMarkdown(out, r.disclosure, "2. Disclosure");
  if (r.risk) {
    StrAppend(&out, RenderRiskReportMarkdown(*r.risk));
  } else {
    StrAppend(&out, "Key matching: not evaluated (no original data).\n\n");
  }
  AppendOutcomeMarkdown(out, r.structure, "3. Structure");
  AppendOutcomeMarkdown(out, r.documentation, "4. Documentation");
  StrAppend(&out, "## Policy\n\n", kPolicyNote, "\n\n");
  StrAppend(&out, "- max replicated-unique proportion: ",
                  r.policy.max_replicated_unique_proportion,
                  "\n- max unique-in-original proportion: ",
                  r.policy.max_unique_in_original_proportion,
                  "\n- gating class: ", RiskyClassName(r.policy.gating_class),
                  "\n- synthetic count threshold: ", r.policy.synth_count_threshold,
                  "\n- rarity threshold: ", r.policy.rarity_threshold,
                  "\n- required affix: ", r.policy.required_affix.ToString(),
                  "\n- required file name token: ", r.policy.required_filename_token, "\n\n");
  StrAppend(&out, "## Mitigation trail\n\n");
  if (r.trail.empty()) StrAppend(&out, "None.\n");
  for (const MitigationAction& a : r.trail) StrAppend(&out, "- ", ActionSummary(a), "\n");
  StrAppend(&out, "\n");
  if (r.fidelity) {
    StrAppend(&out, "## Fidelity (evidence, not a gate)\n\n", RenderFidelityMarkdown(*r.fidelity));
  }
  return out;
}

}  // namespace lfsd
