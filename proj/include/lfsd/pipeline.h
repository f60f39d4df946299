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

// End-to-end release pipeline: synthesis (or loading an existing synthetic
// file), the declared mitigations, then all four checks.

#ifndef LFSD_PIPELINE_H_
#define LFSD_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/checks.h"
#include "lfsd/config.h"
#include "lfsd/dataset.h"
#include "lfsd/fidelity.h"
#include "lfsd/risk.h"
#include "lfsd/schema.h"
#include "lfsd/sdc.h"

namespace lfsd {

// Upper bound on remove-then-reclassify rounds before the disclosure check
// gives up.
inline constexpr int kMaxRemovalRounds = 10;

struct FullReport {
  CheckOutcome labelling{CheckId::kLabelling};
  CheckOutcome disclosure{CheckId::kDisclosure};
  CheckOutcome structure{CheckId::kStructure};
  CheckOutcome documentation{CheckId::kDocumentation};

  // Absent when key matching could not be evaluated (no original data).
  std::optional<RiskReport> risk;
  std::vector<SingletonValue> singletons;
  DocBundle doc;
  ReleasePolicy policy;
  std::vector<MitigationAction> trail;
  std::optional<FidelityReport> fidelity;

  // Output file names, relative to the output directory.
  std::string synthetic_data_file;
  std::string synthetic_schema_file;

  bool overall_pass() const {
    return labelling.passed() && disclosure.passed() && structure.passed() &&
           documentation.passed();
  }
};

struct PipelineResult {
  FullReport report;
  Dataset synth;
  TableSchema synth_schema;
  // False when the run checked an existing synthetic file.
  bool synthesized = false;
  // True when the synthetic data differs from any file on disk (fresh
  // synthesis or mitigations applied), so it has to be written out.
  bool write_synthetic = false;
};

// Synthetic file name for a stem; always contains "synthetic".
std::string SyntheticFileStem(const std::string& stem);

// Loads the original data and/or schema named by the config. The schema is
// the metadata file if given, otherwise inferred from the data.
struct OriginalInputs {
  std::optional<Dataset> data;
  TableSchema schema;
  std::string metadata_reference;
};
absl::StatusOr<OriginalInputs> LoadOriginal(const PipelineConfig& config);

// Synthesis only, per config.synthesis.
absl::StatusOr<Dataset> Synthesize(const PipelineConfig& config, const OriginalInputs& original);

absl::StatusOr<PipelineResult> RunAll(const PipelineConfig& config);

// Writes the synthetic CSV and schema (when write_synthetic) and the report in
// the configured formats into the output directory, each atomically.
absl::Status WritePipelineOutputs(const PipelineConfig& config, const PipelineResult& result);

// 0 when every check passed, 2 otherwise.
int ExitCodeFor(const FullReport& report);

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

}  // namespace lfsd

#endif  // LFSD_PIPELINE_H_
