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

// lfsd: generate low-fidelity synthetic data and run the release checks.
//
//   lfsd infer --data original.csv --out original.schema.json
//   lfsd pipeline --config release.json
//
// Exit codes: 0 all checks pass, 1 usage/IO/config error, 2 a check failed.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_split.h"
#include "lfsd/checks.h"
#include "lfsd/config.h"
#include "lfsd/csv.h"
#include "lfsd/fidelity.h"
#include "lfsd/file_util.h"
#include "lfsd/pipeline.h"
#include "lfsd/report_io.h"
#include "lfsd/risk.h"
#include "lfsd/schema.h"
#include "lfsd/schema_io.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"
#include "lfsd/synthesis.h"

namespace lfsd {
namespace {

struct Overrides {
  std::string config;
  std::string data;
  std::string metadata;
  std::string out;
  std::optional<uint64_t> seed;
  std::string keys;
  std::string method;
  std::optional<size_t> n;
  std::string affix;
  std::string missing_token;
  std::string format;
};

bool UseColor() {
  return std::getenv("LFSD_NO_COLOR") == nullptr && isatty(fileno(stdout)) != 0;
}

std::string Styled(std::string_view text, const char* code) {
  if (!UseColor()) return std::string(text);
  return StrCat("\033[", code, "m", text, "\033[0m");
}

int ReportError(const absl::Status& status) {
  std::cerr << "lfsd: error: " << ToStd(status.message()) << "\n";
  return kExitError;
}

std::string Absolute(const std::string& path) {
  return std::filesystem::absolute(path).lexically_normal().string();
}

absl::StatusOr<PipelineConfig> BuildConfig(const Overrides& o) {
  PipelineConfig config;
  if (!o.config.empty()) {
    LFSD_ASSIGN_OR_RETURN(config, ReadPipelineConfigFile(o.config));
  } else {
    config.base_dir = ".";
    // Without a config file the policy simply follows the affix.
    config.policy.required_affix = config.synthesis.affix;
  }
  if (!o.data.empty()) config.paths.original_data = Absolute(o.data);
  if (!o.metadata.empty()) config.paths.original_metadata = Absolute(o.metadata);
  if (!o.out.empty()) config.paths.output_dir = Absolute(o.out);
  if (o.seed) config.synthesis.seed = *o.seed;
  if (o.n) config.synthesis.n_synth = *o.n;
  if (!o.keys.empty()) {
    config.keys.columns = absl::StrSplit(o.keys, ',', absl::SkipWhitespace());
  }
  if (!o.method.empty()) {
    std::optional<SynthesisMethod> m = ParseSynthesisMethod(o.method);
    if (!m) return MakeError(ErrorKind::kConfigError, StrCat("unknown method '", o.method, "'"));
    config.synthesis.method = *m;
  }
  if (!o.affix.empty()) {
    std::optional<AffixRule> a = AffixRule::Parse(o.affix);
    if (!a) a = AffixRule::Prefix(o.affix);
    config.synthesis.affix = *a;
    config.policy.required_affix = *a;
  }
  if (!o.missing_token.empty()) config.csv.missing_token = o.missing_token;
  if (!o.format.empty()) {
    std::optional<ReportFormat> f = ParseReportFormat(o.format);
    if (!f) return MakeError(ErrorKind::kConfigError, StrCat("unknown format '", o.format, "'"));
    config.report_format = *f;
  }
  LFSD_RETURN_IF_ERROR(ValidatePipelineConfig(config));
  return config;
}

std::string OutputPath(const PipelineConfig& config, const std::string& name) {
  return (std::filesystem::path(config.Resolve(config.paths.output_dir)) / name).string();
}

absl::Status EnsureOutputDir(const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.Resolve(config.paths.output_dir), ec);
  if (ec) return MakeError(ErrorKind::kIoError, StrCat("cannot create output directory: ", ec.message()));
  return absl::OkStatus();
}

// The synthetic data a risk or fidelity run looks at: the configured file,
// or a fresh synthesis.
absl::StatusOr<Dataset> SyntheticFor(const PipelineConfig& config, const OriginalInputs& original) {
  if (config.paths.synthetic_data) {
    return ReadCsvFile(config.Resolve(*config.paths.synthetic_data), config.csv);
  }
  return Synthesize(config, original);
}

absl::Status WriteReport(const PipelineConfig& config, const std::string& stem,
                         const nlohmann::ordered_json& j, const std::string& markdown) {
  LFSD_RETURN_IF_ERROR(EnsureOutputDir(config));
  if (config.report_format != ReportFormat::kHuman) {
    LFSD_RETURN_IF_ERROR(WriteFileAtomically(OutputPath(config, stem + ".json"), DumpJson(j)));
  }
  if (config.report_format != ReportFormat::kStructured) {
    LFSD_RETURN_IF_ERROR(WriteFileAtomically(OutputPath(config, stem + ".md"), markdown));
  }
  return absl::OkStatus();
}

int RunInfer(const Overrides& o) {
  if (o.data.empty() || o.out.empty()) {
    return ReportError(MakeError(ErrorKind::kConfigError, "infer needs --data and --out"));
  }
  CsvOptions csv;
  if (!o.missing_token.empty()) csv.missing_token = o.missing_token;
  absl::StatusOr<Dataset> data = ReadCsvFile(o.data, csv);
  if (!data.ok()) return ReportError(data.status());
  absl::StatusOr<TableSchema> schema = InferSchema(*data);
  if (!schema.ok()) return ReportError(Annotate(schema.status(), o.data));
  if (absl::Status s = WriteSchemaFile(o.out, *schema); !s.ok()) return ReportError(s);
  std::cout << "wrote " << o.out << " (" << schema->columns.size() << " columns, "
            << schema->row_count << " rows)\n";
  return kExitPass;
}

int RunSynth(const Overrides& o) {
  absl::StatusOr<PipelineConfig> config = BuildConfig(o);
  if (!config.ok()) return ReportError(config.status());
  absl::StatusOr<OriginalInputs> original = LoadOriginal(*config);
  if (!original.ok()) return ReportError(original.status());
  absl::StatusOr<Dataset> synth = Synthesize(*config, *original);
  if (!synth.ok()) return ReportError(synth.status());
  TableSchema schema = DeriveSynthSchema(original->schema, *synth, config->synthesis.affix);
  const std::string stem = SyntheticFileStem(config->paths.output_stem);
  if (absl::Status s = EnsureOutputDir(*config); !s.ok()) return ReportError(s);
  const std::string csv_path = OutputPath(*config, stem + ".csv");
  if (absl::Status s = WriteFileAtomically(csv_path, WriteCsv(*synth)); !s.ok()) {
    return ReportError(s);
  }
  if (absl::Status s = WriteSchemaFile(OutputPath(*config, stem + ".schema.json"), schema);
      !s.ok()) {
    return ReportError(s);
  }
  std::cout << "wrote " << csv_path << " (" << synth->row_count() << " rows)\n";
  return kExitPass;
}

int RunRisk(const Overrides& o) {
  absl::StatusOr<PipelineConfig> config = BuildConfig(o);
  if (!config.ok()) return ReportError(config.status());
  if (!config->paths.original_data || config->keys.columns.empty()) {
    return ReportError(
        MakeError(ErrorKind::kConfigError, "risk needs original data and at least one key"));
  }
  absl::StatusOr<OriginalInputs> original = LoadOriginal(*config);
  if (!original.ok()) return ReportError(original.status());
  absl::StatusOr<Dataset> synth = SyntheticFor(*config, *original);
  if (!synth.ok()) return ReportError(synth.status());
  absl::StatusOr<RiskReport> risk =
      ClassifyRiskyRecords(*synth, *original->data, config->keys,
                           config->policy.synth_count_threshold, config->synthesis.affix);
  if (!risk.ok()) return ReportError(risk.status());
  const std::vector<SingletonValue> singletons =
      DetectSingletonValues(*original->data, original->schema, config->policy.rarity_threshold);

  nlohmann::ordered_json j;
  j["risk"] = RiskReportToJson(*risk);
  j["singleton_values"] = SingletonsToJson(singletons);
  j["policy"] = PolicyToJson(config->policy);
  std::string md = StrCat("# Disclosure risk\n\n", RenderRiskReportMarkdown(*risk));
  const std::string stem = SyntheticFileStem(config->paths.output_stem) + ".risk";
  if (absl::Status s = WriteReport(*config, stem, j, md); !s.ok()) return ReportError(s);
  std::cout << "replicated uniques: " << risk->n_replicated_unique()
            << ", unique in original: " << risk->n_unique_in_original() << " of "
            << risk->n_synth << " rows\n";
  return kExitPass;
}

int RunFidelity(const Overrides& o) {
  absl::StatusOr<PipelineConfig> config = BuildConfig(o);
  if (!config.ok()) return ReportError(config.status());
  absl::StatusOr<OriginalInputs> original = LoadOriginal(*config);
  if (!original.ok()) return ReportError(original.status());
  if (!original->data) {
    return ReportError(MakeError(ErrorKind::kConfigError, "fidelity needs the original data"));
  }
  absl::StatusOr<Dataset> synth = SyntheticFor(*config, *original);
  if (!synth.ok()) return ReportError(synth.status());
  absl::StatusOr<FidelityReport> fidelity =
      BuildFidelityReport(*original->data, *synth, config->synthesis.affix);
  if (!fidelity.ok()) return ReportError(fidelity.status());
  const std::string md = StrCat("# Fidelity\n\n", RenderFidelityMarkdown(*fidelity));
  const std::string stem = SyntheticFileStem(config->paths.output_stem) + ".fidelity";
  if (absl::Status s = WriteReport(*config, stem, FidelityToJson(*fidelity), md); !s.ok()) {
    return ReportError(s);
  }
  std::cout << md;
  return kExitPass;
}

void PrintSummary(const FullReport& report) {
  for (const CheckOutcome* outcome :
       {&report.labelling, &report.disclosure, &report.structure, &report.documentation}) {
    const bool ok = outcome->passed();
    std::cout << Styled(ok ? "PASS" : "FAIL", ok ? "32" : "31") << "  "
              << CheckIdName(outcome->id()) << "\n";
    for (const Finding& f : outcome->findings()) {
      if (f.severity == Severity::kInfo) continue;
      std::cout << "      " << SeverityName(f.severity) << " " << f.code << ": " << f.message
                << "\n";
    }
  }
}

int RunChecks(const Overrides& o, bool require_existing) {
  absl::StatusOr<PipelineConfig> config = BuildConfig(o);
  if (!config.ok()) return ReportError(config.status());
  if (require_existing && !config->paths.synthetic_data) {
    return ReportError(MakeError(ErrorKind::kConfigError,
                                 "check needs paths.synthetic_data; use pipeline to synthesize"));
  }
  absl::StatusOr<PipelineResult> result = RunAll(*config);
  if (!result.ok()) return ReportError(result.status());
  if (absl::Status s = WritePipelineOutputs(*config, *result); !s.ok()) return ReportError(s);
  PrintSummary(result->report);
  return ExitCodeFor(result->report);
}

void AddConfigFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Pipeline config file (JSON)");
  cmd->add_option("--data", o.data, "Original data CSV");
  cmd->add_option("--metadata", o.metadata, "Original metadata (schema JSON)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--keys", o.keys, "Comma-separated key columns");
  cmd->add_option("--method", o.method, "Synthesis method")
      ->check(CLI::IsMember({"metadata", "margins", "from_metadata", "from_margins"}));
  cmd->add_option("--n", o.n, "Number of synthetic rows");
  cmd->add_option("--affix", o.affix, "Column affix, e.g. prefix:synth_ or suffix:_synth");
  cmd->add_option("--missing-token", o.missing_token, "Extra string read as missing");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"structured", "human", "both"}));
}

int Main(int argc, char** argv) {
  CLI::App app{"Low-fidelity synthetic data generation and release checks"};
  app.require_subcommand(1);
  Overrides o;

  CLI::App* infer = app.add_subcommand("infer", "Infer a schema file from a CSV");
  infer->add_option("--data", o.data, "Input CSV")->required();
  infer->add_option("--out", o.out, "Schema file to write")->required();
  infer->add_option("--missing-token", o.missing_token, "Extra string read as missing");

  CLI::App* synth = app.add_subcommand("synth", "Write synthetic data and its schema");
  CLI::App* risk = app.add_subcommand("risk", "Classify risky synthetic records");
  CLI::App* check = app.add_subcommand("check", "Run the four checks on an existing file");
  CLI::App* pipeline = app.add_subcommand("pipeline", "Synthesize, mitigate and check");
  CLI::App* fidelity = app.add_subcommand("fidelity", "Compare margins with the original");
  for (CLI::App* cmd : {synth, risk, check, pipeline, fidelity}) AddConfigFlags(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  if (infer->parsed()) return RunInfer(o);
  if (synth->parsed()) return RunSynth(o);
  if (risk->parsed()) return RunRisk(o);
  if (check->parsed()) return RunChecks(o, /*require_existing=*/true);
  if (pipeline->parsed()) return RunChecks(o, /*require_existing=*/false);
  if (fidelity->parsed()) return RunFidelity(o);
  return kExitError;
}

}  // namespace
}  // namespace lfsd

int main(int argc, char** argv) { return lfsd::Main(argc, argv); }
