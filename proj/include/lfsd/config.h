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

// Pipeline configuration file. It is a JSON document in the same format
// family as schemas and reports:
//
//   {
//     "paths": {"original_data": "census.csv", "original_metadata": null,
//               "synthetic_data": null, "synthetic_schema": null,
//               "output_dir": "out", "output_stem": "census"},
//     "synthesis": {"method": "from_margins", "n_synth": 500, "seed": 7,
//                   "affix": "prefix:synth_", "metadata_missing_rate": 0.05,
//                   "transforms": [...]},
//     "keys": ["age", "sex"],
//     "policy": {...},
//     "mitigations": [{"kind": "reduce_precision", "column": "income",
//                      "unit": 1000}, ...],
//     "report_format": "both",
//     "missing_token": "NA"
//   }
//
// Relative paths are resolved against the directory holding the config.

#ifndef LFSD_CONFIG_H_
#define LFSD_CONFIG_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "lfsd/checks.h"
#include "lfsd/csv.h"
#include "lfsd/risk.h"
#include "lfsd/sdc.h"
#include "lfsd/synthesis.h"

namespace lfsd {

// A mitigation as declared by the user, before it is applied. Applying it
// produces a MitigationAction with the computed parameters (cuts, pooled
// labels, removed rows).
struct MitigationRequest {
  MitigationKind kind = MitigationKind::kReducePrecision;
  std::string column;

  PrecisionParams precision;
  CodingMode coding;
  int64_t pool_threshold = kDefaultPoolThreshold;
  std::string pooled_label{kDefaultPooledLabel};
  std::map<std::string, std::string> mapping;
  RiskyClass risky_class = RiskyClass::kUniqueInOriginal;
};

struct PipelinePaths {
  std::optional<std::string> original_data;
  std::optional<std::string> original_metadata;
  // When set, checks run on this existing file instead of synthesizing.
  std::optional<std::string> synthetic_data;
  std::optional<std::string> synthetic_schema;
  std::string output_dir = ".";
  std::string output_stem = "lfsd";
};

enum class ReportFormat { kStructured, kHuman, kBoth };

std::string_view ReportFormatName(ReportFormat f);
std::optional<ReportFormat> ParseReportFormat(std::string_view name);

struct PipelineConfig {
  PipelinePaths paths;
  SynthesisConfig synthesis;
  KeySpec keys;
  ReleasePolicy policy;
  std::vector<MitigationRequest> mitigations;
  ReportFormat report_format = ReportFormat::kBoth;
  CsvOptions csv;
  // Directory relative paths are resolved against.
  std::string base_dir = ".";

  // Every problem with the config, empty if valid.
  std::vector<std::string> Problems() const;
  std::string Resolve(const std::string& path) const;
};

// Parse errors and validation problems are all reported in one status.
absl::StatusOr<PipelineConfig> ParsePipelineConfig(std::string_view text,
                                                   std::string base_dir = ".");
absl::StatusOr<PipelineConfig> ReadPipelineConfigFile(const std::string& path);

// Configs built from flags alone (no file) go through the same validation.
absl::Status ValidatePipelineConfig(const PipelineConfig& config);

nlohmann::ordered_json TransformSpecToJson(const TransformSpec& spec);

}  // namespace lfsd

#endif  // LFSD_CONFIG_H_
