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

#include "lfsd/pipeline.h"

#include <filesystem>
#include <system_error>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "lfsd/csv.h"
#include "lfsd/file_util.h"
#include "lfsd/report_io.h"
#include "lfsd/schema_io.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

std::string Basename(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

struct OutputNames {
  std::string csv;
  std::string schema;
  std::string report_json;
  std::string report_md;
  std::string doc_json;
  std::string doc_md;
};

OutputNames NamesFor(const PipelineConfig& config) {
  const std::string stem = SyntheticFileStem(config.paths.output_stem);
  return {StrCat(stem, ".csv"),         StrCat(stem, ".schema.json"),
          StrCat(stem, ".report.json"), StrCat(stem, ".report.md"),
          StrCat(stem, ".docbundle.json"), StrCat(stem, ".docbundle.md")};
}

absl::StatusOr<int> SynthColumnFor(const Dataset& synth, const std::string& column,
                                   const AffixRule& affix) {
  const int idx = ResolveColumn(synth, column, affix);
  if (idx < 0) {
    return MakeError(ErrorKind::kUnknownColumn,
                     StrCat("mitigation column '", column, "' is not in the synthetic data"));
  }
  return idx;
}

struct MitigationState {
  Dataset synth;
  std::vector<MitigationAction> trail;
  bool exhausted = false;
  std::string exhausted_detail;
};

void Append(MitigationState& state, MitigationAction action) {
  action.applied_at = state.trail.size();
  state.trail.push_back(std::move(action));
}

absl::Status ApplyRemoval(const PipelineConfig& config, const OriginalInputs& original,
                          const MitigationRequest& request, MitigationState& state) {
  if (!original.data) {
    return MakeError(ErrorKind::kConfigError, "remove_records needs the original data");
  }
  const AffixRule& affix = config.synthesis.affix;
  for (int round = 0; round < kMaxRemovalRounds; ++round) {
    LFSD_ASSIGN_OR_RETURN(Dataset released,
                          ReplayValueActions(*original.data, state.trail, affix));
    LFSD_ASSIGN_OR_RETURN(RiskReport risk,
                          ClassifyRiskyRecords(state.synth, released, config.keys,
                                               config.policy.synth_count_threshold, affix));
    if (risk.Rows(request.risky_class).empty()) {
      if (round == 0) {
        LFSD_ASSIGN_OR_RETURN(Mitigated m, RemoveRecords(state.synth, risk, request.risky_class));
        Append(state, std::move(m.action));
      }
      return absl::OkStatus();
    }
    LFSD_ASSIGN_OR_RETURN(Mitigated m, RemoveRecords(state.synth, risk, request.risky_class));
    state.synth = std::move(m.data);
    Append(state, std::move(m.action));
  }
  // One last look: the final round may have cleared the class.
  LFSD_ASSIGN_OR_RETURN(Dataset released, ReplayValueActions(*original.data, state.trail, affix));
  LFSD_ASSIGN_OR_RETURN(RiskReport risk,
                        ClassifyRiskyRecords(state.synth, released, config.keys,
                                             config.policy.synth_count_threshold, affix));
  if (!risk.Rows(request.risky_class).empty()) {
    state.exhausted = true;
    state.exhausted_detail =
        StrCat(risk.Rows(request.risky_class).size(), " ",
                     RiskyClassName(request.risky_class), " record(s) remain after ",
                     kMaxRemovalRounds, " removal rounds");
  }
  return absl::OkStatus();
}

absl::Status ApplyMitigations(const PipelineConfig& config, const OriginalInputs& original,
                              MitigationState& state) {
  const AffixRule& affix = config.synthesis.affix;
  for (const MitigationRequest& req : config.mitigations) {
    if (req.kind == MitigationKind::kRemoveRecords) {
      LFSD_RETURN_IF_ERROR(ApplyRemoval(config, original, req, state));
      continue;
    }
    LFSD_ASSIGN_OR_RETURN(int idx, SynthColumnFor(state.synth, req.column, affix));
    const std::string name = state.synth.column(idx).name;
    absl::StatusOr<Mitigated> m;
    switch (req.kind) {
      case MitigationKind::kReducePrecision:
        m = req.precision.unit ? ReducePrecision(state.synth, name, *req.precision.unit)
                               : ReducePrecision(state.synth, name, *req.precision.granularity);
        break;
      case MitigationKind::kTopBottomCode: {
        const int o = original.data ? original.data->FindColumn(req.column) : -1;
        if (o >= 0) {
          // Cuts come from the original so the released extremes are the
          // original's percentiles, not an artefact of resampling.
          LFSD_ASSIGN_OR_RETURN(Dataset released,
                                ReplayValueActions(*original.data, state.trail, affix));
          LFSD_ASSIGN_OR_RETURN(CodingCuts cuts,
                                ComputeCodingCuts(released.column(o), req.coding));
          m = TopBottomCodeWithCuts(state.synth, name, req.coding, cuts);
        } else {
          m = TopBottomCode(state.synth, name, req.coding);
        }
        break;
      }
      case MitigationKind::kPoolCategories: {
        const int o = original.data ? original.data->FindColumn(req.column) : -1;
        if (o < 0) {
          return MakeError(ErrorKind::kConfigError,
                           StrCat("pool_categories on '", req.column,
                                        "' needs the original column for its counts"));
        }
        LFSD_ASSIGN_OR_RETURN(Dataset released,
                              ReplayValueActions(*original.data, state.trail, affix));
        m = PoolCategories(state.synth, name, CountCategories(released.column(o)),
                           req.pool_threshold, req.pooled_label);
        break;
      }
      case MitigationKind::kCoarsenKey:
        m = CoarsenKey(state.synth, name, req.mapping);
        break;
      case MitigationKind::kRemoveRecords:
        break;
    }
    if (!m.ok()) return m.status();
    state.synth = std::move(m->data);
    Append(state, std::move(m->action));
  }
  return absl::OkStatus();
}

TableSchema KnownColumnsOnly(const TableSchema& original, const TableSchema& synth,
                             const AffixRule& affix) {
  TableSchema out = synth;
  out.columns.clear();
  for (const ColumnSpec& c : synth.columns) {
    const std::string base = affix.Strip(c.name).value_or(c.name);
    if (original.FindColumn(base) || original.FindColumn(c.name)) out.columns.push_back(c);
  }
  return out;
}

}  // namespace

std::string SyntheticFileStem(const std::string& stem) {
  if (absl::StrContains(absl::AsciiStrToLower(stem), "synthetic")) return stem;
  return StrCat(stem, "_synthetic");
}

absl::StatusOr<OriginalInputs> LoadOriginal(const PipelineConfig& config) {
  OriginalInputs in;
  std::optional<TableSchema> metadata;
  if (config.paths.original_metadata) {
    LFSD_ASSIGN_OR_RETURN(LoadedSchema loaded,
                          ReadSchemaFile(config.Resolve(*config.paths.original_metadata)));
    metadata = std::move(loaded.schema);
    in.metadata_reference = *config.paths.original_metadata;
  }
  if (config.paths.original_data) {
    const std::string path = config.Resolve(*config.paths.original_data);
    if (metadata) {
      LFSD_ASSIGN_OR_RETURN(in.data, ReadCsvFile(path, *metadata, config.csv));
    } else {
      LFSD_ASSIGN_OR_RETURN(in.data, ReadCsvFile(path, config.csv));
      absl::StatusOr<TableSchema> inferred = InferSchema(*in.data);
      if (!inferred.ok()) return Annotate(inferred.status(), path);
      metadata = *std::move(inferred);
      in.metadata_reference = *config.paths.original_data;
    }
  }
  if (!metadata) {
    return MakeError(ErrorKind::kConfigError, "neither original data nor metadata was given");
  }
  in.schema = *std::move(metadata);
  in.schema.source_metadata_reference = in.metadata_reference;
  return in;
}

absl::StatusOr<Dataset> Synthesize(const PipelineConfig& config, const OriginalInputs& original) {
  SynthesisConfig s = config.synthesis;
  if (s.n_synth == 0) s.n_synth = original.data ? original.data->row_count() : original.schema.row_count;
  if (s.n_synth == 0) {
    return MakeError(ErrorKind::kConfigError,
                     "n_synth not given and the original row count is unknown");
  }
  if (s.method == SynthesisMethod::kFromMargins) {
    if (!original.data) {
      return MakeError(ErrorKind::kConfigError, "from_margins requires the original data");
    }
    return SynthFromMargins(*original.data, s);
  }
  return SynthFromMetadata(original.schema, s);
}

absl::StatusOr<PipelineResult> RunAll(const PipelineConfig& config) {
  LFSD_RETURN_IF_ERROR(ValidatePipelineConfig(config));
  LFSD_ASSIGN_OR_RETURN(OriginalInputs original, LoadOriginal(config));
  const AffixRule& affix = config.synthesis.affix;
  const OutputNames names = NamesFor(config);

  PipelineResult result;
  SynthesisConfig effective = config.synthesis;
  MitigationState state;
  bool banner_present = true;
  std::optional<TableSchema> supplied_schema;
  if (config.paths.synthetic_data) {
    if (config.paths.synthetic_schema) {
      LFSD_ASSIGN_OR_RETURN(LoadedSchema loaded,
                            ReadSchemaFile(config.Resolve(*config.paths.synthetic_schema)));
      banner_present = loaded.banner_present;
      supplied_schema = std::move(loaded.schema);
      LFSD_ASSIGN_OR_RETURN(state.synth, ReadCsvFile(config.Resolve(*config.paths.synthetic_data),
                                                     *supplied_schema, config.csv));
    } else {
      banner_present = false;
      LFSD_ASSIGN_OR_RETURN(state.synth,
                            ReadCsvFile(config.Resolve(*config.paths.synthetic_data), config.csv));
    }
  } else {
    LFSD_ASSIGN_OR_RETURN(state.synth, Synthesize(config, original));
    result.synthesized = true;
  }
  if (effective.n_synth == 0) effective.n_synth = state.synth.row_count();

  LFSD_RETURN_IF_ERROR(ApplyMitigations(config, original, state));
  result.write_synthetic = result.synthesized || !state.trail.empty();

  // Synthetic schema: the original's, carried through the value actions and
  // restricted to the released columns.
  if (supplied_schema && !result.write_synthetic) {
    result.synth_schema = *supplied_schema;
  } else if (supplied_schema) {
    result.synth_schema = *supplied_schema;
    for (const MitigationAction& a : state.trail) ApplyActionToSchema(result.synth_schema, a, affix);
    result.synth_schema.row_count = state.synth.row_count();
    banner_present = result.synth_schema.is_synthetic;
  } else if (result.synthesized) {
    TableSchema base = original.schema;
    for (const MitigationAction& a : state.trail) ApplyActionToSchema(base, a, affix);
    result.synth_schema = DeriveSynthSchema(base, state.synth, affix);
  } else {
    // An existing file with no schema: describe it as found.
    LFSD_ASSIGN_OR_RETURN(result.synth_schema, InferSchema(state.synth));
    if (result.write_synthetic) {
      result.synth_schema.is_synthetic = true;
      banner_present = true;
    }
  }
  result.synth_schema.source_metadata_reference = original.metadata_reference;

  FullReport& report = result.report;
  report.policy = config.policy;
  report.trail = state.trail;
  report.synthetic_data_file =
      result.write_synthetic ? names.csv : Basename(*config.paths.synthetic_data);
  report.synthetic_schema_file =
      result.write_synthetic ? names.schema
                             : (config.paths.synthetic_schema
                                    ? Basename(*config.paths.synthetic_schema)
                                    : std::string());

  report.labelling =
      CheckLabelling(report.synthetic_data_file, result.synth_schema, banner_present, config.policy);

  LFSD_ASSIGN_OR_RETURN(
      DisclosureResult disclosure,
      CheckDisclosure(state.synth, original.data ? &*original.data : nullptr, original.schema,
                      config.keys, state.trail, config.policy));
  if (state.exhausted) {
    disclosure.outcome.Add(Severity::kFail, "DISC_MITIGATION_EXHAUSTED", state.exhausted_detail,
                           absl::StrJoin(config.keys.columns, ","));
  }
  report.disclosure = std::move(disclosure.outcome);
  report.risk = std::move(disclosure.risk);
  report.singletons = std::move(disclosure.singletons);

  report.structure =
      CheckStructure(original.schema, result.synth_schema, state.synth, state.trail, config.policy);

  SchemaDiff diff;
  if (absl::StatusOr<SchemaDiff> d =
          DiffSchemas(original.schema, KnownColumnsOnly(original.schema, result.synth_schema, affix),
                      affix);
      d.ok()) {
    diff = *std::move(d);
  }
  absl::StatusOr<DocBundle> bundle = GenerateDocumentation(original.metadata_reference, effective,
                                                           diff, state.trail, config.policy);
  if (bundle.ok()) {
    report.doc = *std::move(bundle);
  } else {
    // Reported by the documentation check rather than aborting the run.
    report.doc.method = effective.method;
    report.doc.config = effective;
    report.doc.diff = diff;
    report.doc.trail = state.trail;
    report.doc.expectation_statement = ExpectationStatement(effective.method);
    report.doc.policy_overrides = config.policy.Overrides();
  }
  report.documentation = CheckDocumentation(report.doc, diff);
  report.doc.draft = !report.overall_pass();

  if (original.data) {
    LFSD_ASSIGN_OR_RETURN(FidelityReport fidelity,
                          BuildFidelityReport(*original.data, state.synth, affix));
    report.fidelity = std::move(fidelity);
  }
  result.synth = std::move(state.synth);
  return result;
}

absl::Status WritePipelineOutputs(const PipelineConfig& config, const PipelineResult& result) {
  const std::string dir = config.Resolve(config.paths.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorKind::kIoError,
                     StrCat("cannot create output directory ", dir, ": ", ec.message()));
  }
  auto at = [&](const std::string& name) { return (std::filesystem::path(dir) / name).string(); };
  const OutputNames names = NamesFor(config);
  if (result.write_synthetic) {
    LFSD_RETURN_IF_ERROR(WriteFileAtomically(at(names.csv), WriteCsv(result.synth)));
    LFSD_RETURN_IF_ERROR(WriteSchemaFile(at(names.schema), result.synth_schema));
  }
  const bool structured = config.report_format != ReportFormat::kHuman;
  const bool human = config.report_format != ReportFormat::kStructured;
  if (structured) {
    LFSD_RETURN_IF_ERROR(
        WriteFileAtomically(at(names.report_json), DumpJson(FullReportToJson(result.report))));
    LFSD_RETURN_IF_ERROR(
        WriteFileAtomically(at(names.doc_json), DumpJson(DocBundleToJson(result.report.doc))));
  }
  if (human) {
    LFSD_RETURN_IF_ERROR(
        WriteFileAtomically(at(names.report_md), RenderFullReportMarkdown(result.report)));
    LFSD_RETURN_IF_ERROR(
        WriteFileAtomically(at(names.doc_md), RenderDocBundleMarkdown(result.report.doc)));
  }
  return absl::OkStatus();
}

int ExitCodeFor(const FullReport& report) {
  return report.overall_pass() ? kExitPass : kExitCheckFailed;
}

}  // namespace lfsd
