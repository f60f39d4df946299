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

#include "lfsd/schema_io.h"

#include <algorithm>
#include <iterator>

#include "absl/strings/str_cat.h"
#include "lfsd/file_util.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

using json = nlohmann::ordered_json;

json RangeToJson(const ColumnSpec& spec, const ValueRange& range) {
  if (spec.kind == ColumnKind::kDate) {
    return json::array({FormatDate(Date{static_cast<int64_t>(range.min)}),
                        FormatDate(Date{static_cast<int64_t>(range.max)})});
  }
  return json::array({range.min, range.max});
}

absl::StatusOr<ValueRange> RangeFromJson(ColumnKind kind, const json& j, std::string_view name) {
  auto bad = [&] {
    return MakeError(ErrorKind::kParseError,
                     StrCat("column '", name, "': numeric_range must be a [min, max] pair"));
  };
  if (!j.is_array() || j.size() != 2) return bad();
  ValueRange r;
  double* ends[2] = {&r.min, &r.max};
  for (int i = 0; i < 2; ++i) {
    if (kind == ColumnKind::kDate) {
      if (!j[i].is_string()) return bad();
      std::optional<Date> d = ParseDate(j[i].get<std::string>());
      if (!d) return bad();
      *ends[i] = static_cast<double>(d->days);
    } else {
      if (!j[i].is_number()) return bad();
      *ends[i] = j[i].get<double>();
    }
  }
  return r;
}

std::string RenderRangeForDiff(ColumnKind kind, const std::optional<ValueRange>& range) {
  if (!range) return "none";
  if (kind == ColumnKind::kDate) {
    return StrCat("[", FormatDate(Date{static_cast<int64_t>(range->min)}), ", ",
                        FormatDate(Date{static_cast<int64_t>(range->max)}), "]");
  }
  return StrCat("[", FormatNumber(range->min, DecimalsOfUnit(range->min)), ", ",
                      FormatNumber(range->max, DecimalsOfUnit(range->max)), "]");
}

}  // namespace

json ColumnSpecToJson(const ColumnSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["kind"] = ColumnKindName(spec.kind);
  if (spec.kind == ColumnKind::kCategorical) {
    j["categories"] = spec.categories;
  } else {
    j["numeric_range"] = spec.range ? RangeToJson(spec, *spec.range) : json(nullptr);
  }
  if (spec.kind == ColumnKind::kNumeric) {
    j["precision"] = spec.decimals;
    if (spec.unit) j["precision_unit"] = *spec.unit;
    if (spec.precision_flagged) j["precision_flagged"] = true;
  } else if (spec.kind == ColumnKind::kDate) {
    j["precision"] = GranularityName(spec.granularity);
  }
  j["missing_allowed"] = spec.missing_allowed;
  if (spec.missing_rate) j["missing_rate"] = *spec.missing_rate;
  return j;
}

absl::StatusOr<ColumnSpec> ColumnSpecFromJson(const json& j) {
  if (!j.is_object()) return MakeError(ErrorKind::kParseError, "column entry must be an object");
  ColumnSpec spec;
  if (!j.contains("name") || !j["name"].is_string()) {
    return MakeError(ErrorKind::kParseError, "column entry lacks a string 'name'");
  }
  spec.name = j["name"].get<std::string>();
  auto fail = [&](std::string_view what) {
    return MakeError(ErrorKind::kParseError, StrCat("column '", spec.name, "': ", what));
  };
  static constexpr std::string_view kKnownFields[] = {
      "name",           "kind",      "categories",      "numeric_range", "precision",
      "precision_unit", "precision_flagged", "missing_allowed", "missing_rate"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnownFields), std::end(kKnownFields), key) ==
        std::end(kKnownFields)) {
      return fail(StrCat("unknown field '", key, "'"));
    }
  }
  if (!j.contains("kind") || !j["kind"].is_string()) return fail("missing 'kind'");
  std::optional<ColumnKind> kind = ParseColumnKind(j["kind"].get<std::string>());
  if (!kind) return fail("unknown kind");
  spec.kind = *kind;

  if (spec.kind == ColumnKind::kCategorical) {
    if (!j.contains("categories") || !j["categories"].is_array()) {
      return fail("categorical column needs a 'categories' list");
    }
    for (const json& c : j["categories"]) {
      if (!c.is_string()) return fail("categories must be strings");
      spec.categories.push_back(c.get<std::string>());
    }
  } else if (j.contains("numeric_range") && !j["numeric_range"].is_null()) {
    LFSD_ASSIGN_OR_RETURN(spec.range, RangeFromJson(spec.kind, j["numeric_range"], spec.name));
  }

  if (spec.kind == ColumnKind::kNumeric && j.contains("precision")) {
    if (!j["precision"].is_number_integer()) return fail("numeric precision must be an integer");
    spec.decimals = j["precision"].get<int>();
    if (j.contains("precision_unit")) {
      if (!j["precision_unit"].is_number()) return fail("precision_unit must be a number");
      spec.unit = j["precision_unit"].get<double>();
    }
    spec.precision_flagged = j.value("precision_flagged", false);
  } else if (spec.kind == ColumnKind::kDate && j.contains("precision")) {
    if (!j["precision"].is_string()) return fail("date precision must be day, month or year");
    std::optional<DateGranularity> g = ParseGranularity(j["precision"].get<std::string>());
    if (!g) return fail("date precision must be day, month or year");
    spec.granularity = *g;
  }
  if (j.contains("missing_allowed")) {
    if (!j["missing_allowed"].is_boolean()) return fail("missing_allowed must be a boolean");
    spec.missing_allowed = j["missing_allowed"].get<bool>();
  }
  if (j.contains("missing_rate") && !j["missing_rate"].is_null()) {
    if (!j["missing_rate"].is_number()) return fail("missing_rate must be a number");
    spec.missing_rate = j["missing_rate"].get<double>();
  }
  return spec;
}

json SchemaToJson(const TableSchema& schema) {
  json j;
  json header;
  header["is_synthetic"] = schema.is_synthetic;
  header["provenance"] = ProvenanceName(schema.provenance);
  header["row_count"] = schema.row_count;
  header["source_metadata_reference"] = schema.source_metadata_reference;
  j["header"] = std::move(header);
  json columns = json::array();
  for (const ColumnSpec& c : schema.columns) columns.push_back(ColumnSpecToJson(c));
  j["columns"] = std::move(columns);
  return j;
}

absl::StatusOr<TableSchema> SchemaFromJson(const json& j) {
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array()) {
    return MakeError(ErrorKind::kParseError, "schema must be an object with a 'columns' list");
  }
  TableSchema schema;
  if (j.contains("header")) {
    const json& h = j["header"];
    if (!h.is_object()) return MakeError(ErrorKind::kParseError, "'header' must be an object");
    schema.is_synthetic = h.value("is_synthetic", false);
    if (h.contains("provenance")) {
      std::optional<Provenance> p = ParseProvenance(h["provenance"].get<std::string>());
      if (!p) return MakeError(ErrorKind::kParseError, "unknown provenance");
      schema.provenance = *p;
    } else {
      schema.provenance = Provenance::kAuthoredMetadata;
    }
    schema.row_count = h.value("row_count", size_t{0});
    if (h.contains("source_metadata_reference") && h["source_metadata_reference"].is_string()) {
      schema.source_metadata_reference = h["source_metadata_reference"].get<std::string>();
    }
  }
  for (const json& c : j["columns"]) {
    LFSD_ASSIGN_OR_RETURN(ColumnSpec spec, ColumnSpecFromJson(c));
    schema.columns.push_back(std::move(spec));
  }
  absl::Status invariants = schema.CheckInvariants();
  if (!invariants.ok()) {
    return GetErrorKind(invariants) ? invariants
                                    : MakeError(ErrorKind::kParseError, ToStd(invariants.message()));
  }
  return schema;
}

std::string SerializeSchema(const TableSchema& schema) {
  std::string out;
  if (schema.is_synthetic) StrAppend(&out, kSyntheticBanner, "\n");
  StrAppend(&out, SchemaToJson(schema).dump(2), "\n");
  return out;
}

absl::StatusOr<LoadedSchema> ParseSchema(std::string_view text) {
  LoadedSchema loaded;
  if (text.substr(0, kSyntheticBanner.size()) == kSyntheticBanner) {
    loaded.banner_present = true;
    text.remove_prefix(kSyntheticBanner.size());
  }
  json j = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return MakeError(ErrorKind::kParseError, "schema is not valid JSON");
  LFSD_ASSIGN_OR_RETURN(loaded.schema, SchemaFromJson(j));
  return loaded;
}

absl::StatusOr<LoadedSchema> ReadSchemaFile(const std::string& path) {
  LFSD_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  absl::StatusOr<LoadedSchema> loaded = ParseSchema(text);
  if (!loaded.ok()) return Annotate(loaded.status(), path);
  return loaded;
}

absl::Status WriteSchemaFile(const std::string& path, const TableSchema& schema) {
  return WriteFileAtomically(path, SerializeSchema(schema));
}

json SchemaDiffToJson(const SchemaDiff& diff) {
  json columns = json::array();
  for (const ColumnDiff& d : diff.columns) {
    json c;
    c["original_name"] = d.original_name;
    c["missing_in_synth"] = d.missing_in_synth();
    if (d.synth_name) c["affix_mapping"] = {{"original", d.original_name}, {"synthetic", *d.synth_name}};
    if (!d.pooled_categories.empty()) {
      json pooled;
      for (const auto& [from, to] : d.pooled_categories) pooled[from] = to;
      c["pooled_categories"] = std::move(pooled);
    }
    if (!d.removed_categories.empty()) c["removed_categories"] = d.removed_categories;
    if (!d.added_categories.empty()) c["added_categories"] = d.added_categories;
    if (d.kind_change) {
      c["kind_change"] = {ColumnKindName(d.kind_change->first),
                          ColumnKindName(d.kind_change->second)};
    }
    if (d.precision_change) {
      c["precision_change"] = {d.precision_change->first, d.precision_change->second};
    }
    if (d.range_change) {
      c["range_change"] = {RenderRangeForDiff(d.kind, d.range_change->first),
                           RenderRangeForDiff(d.kind, d.range_change->second)};
    }
    if (d.missingness_mismatch) {
      c["missingness_mismatch"] = {{"original_has_missing", d.missingness_mismatch->first},
                                   {"synthetic_has_missing", d.missingness_mismatch->second}};
    }
    columns.push_back(std::move(c));
  }
  json j;
  j["has_structural_differences"] = diff.HasStructuralDifferences();
  j["columns"] = std::move(columns);
  return j;
}

}  // namespace lfsd
