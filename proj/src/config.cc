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

#include "lfsd/config.h"

#include <filesystem>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "lfsd/file_util.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

using json = nlohmann::ordered_json;

// Collects every problem found while reading one document.
class Reader {
 public:
  std::vector<std::string>& problems() { return problems_; }

  void Problem(std::string_view where, std::string_view what) {
    problems_.push_back(StrCat(where, ": ", what));
  }

  void RejectUnknown(const json& obj, std::string_view where,
                     std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        Problem(where, StrCat("unknown field '", key, "'"));
      }
    }
  }

  std::optional<std::string> String(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_string()) {
      Problem(where, StrCat("'", key, "' must be a string"));
      return std::nullopt;
    }
    return obj[key].get<std::string>();
  }

  std::optional<double> Number(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_number()) {
      Problem(where, StrCat("'", key, "' must be a number"));
      return std::nullopt;
    }
    return obj[key].get<double>();
  }

  std::optional<int64_t> Integer(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_number_integer()) {
      Problem(where, StrCat("'", key, "' must be an integer"));
      return std::nullopt;
    }
    return obj[key].get<int64_t>();
  }

  const json* Object(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key) || obj[key].is_null()) return nullptr;
    if (!obj[key].is_object()) {
      Problem(where, StrCat("'", key, "' must be an object"));
      return nullptr;
    }
    return &obj[key];
  }

  const json* Array(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key) || obj[key].is_null()) return nullptr;
    if (!obj[key].is_array()) {
      Problem(where, StrCat("'", key, "' must be a list"));
      return nullptr;
    }
    return &obj[key];
  }

 private:
  std::vector<std::string> problems_;
};

std::optional<ValueRange> ReadRange(Reader& r, const json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    r.Problem(where, "range must be a [min, max] pair of numbers");
    return std::nullopt;
  }
  return ValueRange{j[0].get<double>(), j[1].get<double>()};
}

void ReadPaths(Reader& r, const json& j, PipelinePaths& paths) {
  constexpr std::string_view kWhere = "paths";
  r.RejectUnknown(j, kWhere,
                  {"original_data", "original_metadata", "synthetic_data", "synthetic_schema",
                   "output_dir", "output_stem"});
  paths.original_data = r.String(j, "original_data", kWhere);
  paths.original_metadata = r.String(j, "original_metadata", kWhere);
  paths.synthetic_data = r.String(j, "synthetic_data", kWhere);
  paths.synthetic_schema = r.String(j, "synthetic_schema", kWhere);
  if (auto v = r.String(j, "output_dir", kWhere)) paths.output_dir = *v;
  if (auto v = r.String(j, "output_stem", kWhere)) paths.output_stem = *v;
}

void ReadTransform(Reader& r, const json& j, size_t i, std::vector<TransformSpec>& out) {
  const std::string where = StrCat("synthesis.transforms[", i, "]");
  if (!j.is_object()) {
    r.Problem(where, "must be an object");
    return;
  }
  const std::string kind = r.String(j, "kind", where).value_or("");
  if (kind == "date_pair" || kind == "date_pair_to_origin_plus_duration") {
    r.RejectUnknown(j, where, {"kind", "earlier", "later", "duration_column", "duration_range"});
    const auto earlier = r.String(j, "earlier", where);
    const auto later = r.String(j, "later", where);
    if (!earlier || !later) {
      r.Problem(where, "date_pair needs 'earlier' and 'later'");
      return;
    }
    TransformSpec t = TransformSpec::DatePair(*earlier, *later);
    if (auto d = r.String(j, "duration_column", where)) t.duration_column = *d;
    if (j.contains("duration_range") && !j["duration_range"].is_null()) {
      t.duration_range = ReadRange(r, j["duration_range"], where);
    }
    out.push_back(std::move(t));
  } else if (kind == "total" || kind == "total_to_components") {
    r.RejectUnknown(j, where, {"kind", "total", "components"});
    const auto total = r.String(j, "total", where);
    std::vector<std::string> comps;
    if (const json* c = r.Array(j, "components", where)) {
      for (const json& name : *c) {
        if (name.is_string()) comps.push_back(name.get<std::string>());
        else r.Problem(where, "components must be strings");
      }
    }
    if (!total || comps.empty()) {
      r.Problem(where, "total transform needs 'total' and a non-empty 'components' list");
      return;
    }
    out.push_back(TransformSpec::Total(*total, std::move(comps)));
  } else {
    r.Problem(where, "kind must be date_pair or total");
  }
}

void ReadSynthesis(Reader& r, const json& j, SynthesisConfig& s) {
  constexpr std::string_view kWhere = "synthesis";
  r.RejectUnknown(j, kWhere,
                  {"method", "n_synth", "seed", "affix", "metadata_missing_rate", "transforms"});
  if (auto m = r.String(j, "method", kWhere)) {
    if (auto parsed = ParseSynthesisMethod(*m)) s.method = *parsed;
    else r.Problem(kWhere, StrCat("unknown method '", *m, "'"));
  }
  if (auto n = r.Integer(j, "n_synth", kWhere)) {
    if (*n < 1) r.Problem(kWhere, "n_synth must be at least 1");
    else s.n_synth = static_cast<size_t>(*n);
  }
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (j["seed"].is_number_unsigned()) s.seed = j["seed"].get<uint64_t>();
    else r.Problem(kWhere, "'seed' must be a non-negative integer");
  }
  if (auto a = r.String(j, "affix", kWhere)) {
    if (auto parsed = AffixRule::Parse(*a)) s.affix = *parsed;
    else r.Problem(kWhere, StrCat("bad affix '", *a, "'"));
  }
  if (auto rate = r.Number(j, "metadata_missing_rate", kWhere)) s.metadata_missing_rate = *rate;
  if (const json* ts = r.Array(j, "transforms", kWhere)) {
    for (size_t i = 0; i < ts->size(); ++i) ReadTransform(r, (*ts)[i], i, s.transforms);
  }
}

void ReadKeys(Reader& r, const json& j, KeySpec& keys) {
  const json* list = &j;
  if (j.is_object()) {
    r.RejectUnknown(j, "keys", {"columns", "coarsening_note"});
    keys.coarsening_note = r.String(j, "coarsening_note", "keys").value_or("");
    list = r.Array(j, "columns", "keys");
    if (list == nullptr) return;
  }
  if (!list->is_array()) {
    r.Problem("keys", "must be a list of column names");
    return;
  }
  for (const json& k : *list) {
    if (k.is_string()) keys.columns.push_back(k.get<std::string>());
    else r.Problem("keys", "key names must be strings");
  }
}

void ReadPolicy(Reader& r, const json& j, ReleasePolicy& p, bool& affix_given) {
  constexpr std::string_view kWhere = "policy";
  r.RejectUnknown(j, kWhere,
                  {"max_replicated_unique_proportion", "max_unique_in_original_proportion",
                   "gating_class", "synth_count_threshold", "rarity_threshold", "required_affix",
                   "required_filename_token"});
  if (auto v = r.Number(j, "max_replicated_unique_proportion", kWhere)) {
    p.max_replicated_unique_proportion = *v;
  }
  if (auto v = r.Number(j, "max_unique_in_original_proportion", kWhere)) {
    p.max_unique_in_original_proportion = *v;
  }
  if (auto v = r.String(j, "gating_class", kWhere)) {
    if (auto c = ParseRiskyClass(*v)) p.gating_class = *c;
    else r.Problem(kWhere, StrCat("unknown gating_class '", *v, "'"));
  }
  if (auto v = r.Integer(j, "synth_count_threshold", kWhere)) p.synth_count_threshold = *v;
  if (auto v = r.Integer(j, "rarity_threshold", kWhere)) p.rarity_threshold = *v;
  if (auto v = r.String(j, "required_affix", kWhere)) {
    if (auto a = AffixRule::Parse(*v)) {
      p.required_affix = *a;
      affix_given = true;
    } else {
      r.Problem(kWhere, StrCat("bad required_affix '", *v, "'"));
    }
  }
  if (auto v = r.String(j, "required_filename_token", kWhere)) p.required_filename_token = *v;
}

void ReadMitigation(Reader& r, const json& j, size_t i, std::vector<MitigationRequest>& out) {
  const std::string where = StrCat("mitigations[", i, "]");
  if (!j.is_object()) {
    r.Problem(where, "must be an object");
    return;
  }
  MitigationRequest m;
  const std::string kind = r.String(j, "kind", where).value_or("");
  std::optional<MitigationKind> parsed = ParseMitigationKind(kind);
  if (!parsed) {
    r.Problem(where, StrCat("unknown kind '", kind, "'"));
    return;
  }
  m.kind = *parsed;
  m.column = r.String(j, "column", where).value_or("");
  switch (m.kind) {
    case MitigationKind::kReducePrecision: {
      r.RejectUnknown(j, where, {"kind", "column", "unit", "granularity"});
      m.precision.unit = r.Number(j, "unit", where);
      if (auto g = r.String(j, "granularity", where)) {
        m.precision.granularity = ParseGranularity(*g);
        if (!m.precision.granularity) r.Problem(where, "granularity must be day, month or year");
      }
      break;
    }
    case MitigationKind::kTopBottomCode: {
      r.RejectUnknown(j, where, {"kind", "column", "mode", "p_low", "p_high", "count_threshold"});
      const std::string mode = r.String(j, "mode", where).value_or("percentile");
      if (mode == "percentile") {
        m.coding = CodingMode::Percentile(r.Number(j, "p_low", where).value_or(1.0),
                                          r.Number(j, "p_high", where).value_or(99.0));
      } else if (mode == "count_threshold") {
        m.coding = CodingMode::CountThreshold(r.Integer(j, "count_threshold", where).value_or(5));
      } else {
        r.Problem(where, "mode must be percentile or count_threshold");
      }
      break;
    }
    case MitigationKind::kPoolCategories: {
      r.RejectUnknown(j, where, {"kind", "column", "count_threshold", "pooled_label"});
      m.pool_threshold = r.Integer(j, "count_threshold", where).value_or(kDefaultPoolThreshold);
      m.pooled_label = r.String(j, "pooled_label", where).value_or(std::string(kDefaultPooledLabel));
      break;
    }
    case MitigationKind::kRemoveRecords: {
      r.RejectUnknown(j, where, {"kind", "column", "risky_class"});
      if (auto c = r.String(j, "risky_class", where)) {
        if (auto rc = ParseRiskyClass(*c)) m.risky_class = *rc;
        else r.Problem(where, StrCat("unknown risky_class '", *c, "'"));
      }
      break;
    }
    case MitigationKind::kCoarsenKey: {
      r.RejectUnknown(j, where, {"kind", "column", "mapping"});
      if (const json* map = r.Object(j, "mapping", where)) {
        for (const auto& [from, to] : map->items()) {
          if (to.is_string()) m.mapping[from] = to.get<std::string>();
          else r.Problem(where, "mapping targets must be strings");
        }
      }
      break;
    }
  }
  out.push_back(std::move(m));
}

}  // namespace

std::string_view ReportFormatName(ReportFormat f) {
  switch (f) {
    case ReportFormat::kStructured:
      return "structured";
    case ReportFormat::kHuman:
      return "human";
    case ReportFormat::kBoth:
      return "both";
  }
  return "both";
}

std::optional<ReportFormat> ParseReportFormat(std::string_view name) {
  if (name == "structured") return ReportFormat::kStructured;
  if (name == "human") return ReportFormat::kHuman;
  if (name == "both") return ReportFormat::kBoth;
  return std::nullopt;
}

std::vector<std::string> PipelineConfig::Problems() const {
  std::vector<std::string> out;
  if (!paths.original_data && !paths.original_metadata) {
    out.push_back("paths: at least one of original_data and original_metadata is required");
  }
  if (synthesis.method == SynthesisMethod::kFromMargins && !paths.original_data) {
    out.push_back("synthesis: from_margins requires paths.original_data");
  }
  if (paths.synthetic_schema && !paths.synthetic_data) {
    out.push_back("paths: synthetic_schema given without synthetic_data");
  }
  if (paths.output_stem.empty()) out.push_back("paths: output_stem must be non-empty");
  if (synthesis.affix.text.empty()) out.push_back("synthesis: affix must be non-empty");
  if (!(synthesis.metadata_missing_rate >= 0 && synthesis.metadata_missing_rate <= 1)) {
    out.push_back("synthesis: metadata_missing_rate must lie in [0,1]");
  }
  for (const TransformSpec& t : synthesis.transforms) {
    if (t.duration_range &&
        (t.duration_range->min < 0 || t.duration_range->min > t.duration_range->max)) {
      out.push_back(StrCat("synthesis: duration_range of '", t.later,
                                 "' must satisfy 0 <= min <= max"));
    }
    if (synthesis.method == SynthesisMethod::kFromMetadata &&
        t.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration && !t.duration_range) {
      out.push_back(StrCat("synthesis: date_pair on '", t.later,
                                 "' needs duration_range under from_metadata"));
    }
  }
  if (absl::Status s = policy.CheckInvariants(); !s.ok()) {
    out.push_back(StrCat("policy: ", s.message()));
  }
  if (!(policy.required_affix == synthesis.affix)) {
    out.push_back("policy: required_affix differs from synthesis.affix");
  }
  for (size_t i = 0; i < mitigations.size(); ++i) {
    const MitigationRequest& m = mitigations[i];
    const std::string where = StrCat("mitigations[", i, "]: ");
    if (m.kind != MitigationKind::kRemoveRecords && m.column.empty()) {
      out.push_back(StrCat(where, "'column' is required"));
    }
    switch (m.kind) {
      case MitigationKind::kReducePrecision:
        if (m.precision.unit.has_value() == m.precision.granularity.has_value()) {
          out.push_back(StrCat(where, "give exactly one of 'unit' and 'granularity'"));
        } else if (m.precision.unit && !(*m.precision.unit > 0)) {
          out.push_back(StrCat(where, "unit must be > 0"));
        }
        break;
      case MitigationKind::kTopBottomCode:
        if (m.coding.type == CodingMode::Type::kPercentile &&
            !(m.coding.p_low >= 0 && m.coding.p_high <= 100 && m.coding.p_low < m.coding.p_high)) {
          out.push_back(StrCat(where, "need 0 <= p_low < p_high <= 100"));
        }
        if (m.coding.type == CodingMode::Type::kCountThreshold && m.coding.count_threshold < 1) {
          out.push_back(StrCat(where, "count_threshold must be at least 1"));
        }
        break;
      case MitigationKind::kPoolCategories:
        if (m.pool_threshold < 1) out.push_back(StrCat(where, "count_threshold must be >= 1"));
        if (m.pooled_label.empty()) out.push_back(StrCat(where, "pooled_label is empty"));
        break;
      case MitigationKind::kRemoveRecords:
        if (keys.columns.empty()) {
          out.push_back(StrCat(where, "remove_records needs key columns"));
        }
        break;
      case MitigationKind::kCoarsenKey:
        if (m.mapping.empty()) out.push_back(StrCat(where, "mapping is empty"));
        break;
    }
  }
  return out;
}

std::string PipelineConfig::Resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

absl::Status ValidatePipelineConfig(const PipelineConfig& config) {
  std::vector<std::string> problems = config.Problems();
  if (problems.empty()) return absl::OkStatus();
  return MakeError(ErrorKind::kConfigError,
                   StrCat(problems.size(), " problem(s):\n  ",
                                absl::StrJoin(problems, "\n  ")));
}

absl::StatusOr<PipelineConfig> ParsePipelineConfig(std::string_view text, std::string base_dir) {
  json j = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return MakeError(ErrorKind::kConfigError, "config is not a JSON object");
  }
  Reader r;
  PipelineConfig c;
  c.base_dir = std::move(base_dir);
  r.RejectUnknown(j, "config",
                  {"paths", "synthesis", "keys", "policy", "mitigations", "report_format",
                   "missing_token"});
  if (const json* p = r.Object(j, "paths", "config")) ReadPaths(r, *p, c.paths);
  if (const json* s = r.Object(j, "synthesis", "config")) ReadSynthesis(r, *s, c.synthesis);
  if (j.contains("keys") && !j["keys"].is_null()) ReadKeys(r, j["keys"], c.keys);
  bool affix_given = false;
  if (const json* p = r.Object(j, "policy", "config")) ReadPolicy(r, *p, c.policy, affix_given);
  if (!affix_given) c.policy.required_affix = c.synthesis.affix;
  if (const json* ms = r.Array(j, "mitigations", "config")) {
    for (size_t i = 0; i < ms->size(); ++i) ReadMitigation(r, (*ms)[i], i, c.mitigations);
  }
  if (auto f = r.String(j, "report_format", "config")) {
    if (auto parsed = ParseReportFormat(*f)) c.report_format = *parsed;
    else r.Problem("config", "report_format must be structured, human or both");
  }
  c.csv.missing_token = r.String(j, "missing_token", "config");

  std::vector<std::string> problems = std::move(r.problems());
  if (problems.empty()) {
    // Cross-field checks only make sense once every field parsed.
    problems = c.Problems();
  }
  if (!problems.empty()) {
    return MakeError(ErrorKind::kConfigError,
                     StrCat(problems.size(), " problem(s):\n  ",
                                  absl::StrJoin(problems, "\n  ")));
  }
  return c;
}

absl::StatusOr<PipelineConfig> ReadPipelineConfigFile(const std::string& path) {
  LFSD_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  std::string dir = std::filesystem::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  absl::StatusOr<PipelineConfig> config = ParsePipelineConfig(text, dir);
  if (!config.ok()) return Annotate(config.status(), path);
  return config;
}

json TransformSpecToJson(const TransformSpec& spec) {
  json j;
  j["kind"] = spec.KindName();
  if (spec.kind == TransformSpec::Kind::kDatePairToOriginPlusDuration) {
    j["earlier"] = spec.earlier;
    j["later"] = spec.later;
    j["duration_column"] = spec.duration_column;
    if (spec.duration_range) {
      j["duration_range"] = {spec.duration_range->min, spec.duration_range->max};
    }
  } else {
    j["total"] = spec.total;
    j["components"] = spec.components;
  }
  return j;
}

}  // namespace lfsd
