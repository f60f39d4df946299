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

// The four release checks for low-fidelity synthetic data:
//
//   1. labelling      - nobody can mistake the data for real records
//   2. disclosure     - no identifying values or key combinations leak
//   3. structure      - names, labels, missingness and precision match
//   4. documentation  - differences and expectations are written down
//
// Each check yields a CheckOutcome whose verdict is derived from its
// findings: it passes iff no finding has fail severity.

#ifndef LFSD_CHECKS_H_
#define LFSD_CHECKS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/affix.h"
#include "lfsd/dataset.h"
#include "lfsd/risk.h"
#include "lfsd/schema.h"
#include "lfsd/sdc.h"
#include "lfsd/synthesis.h"

namespace lfsd {

enum class CheckId { kLabelling, kDisclosure, kStructure, kDocumentation };
enum class Verdict { kPass, kFail };
enum class Severity { kInfo, kWarn, kFail };

std::string_view CheckIdName(CheckId id);
std::string_view VerdictName(Verdict v);
std::string_view SeverityName(Severity s);

struct Finding {
  Severity severity = Severity::kInfo;
  std::string code;
  std::string message;
  // Column, row list, file name... whatever pins the finding down.
  std::string location;
};

class CheckOutcome {
 public:
  explicit CheckOutcome(CheckId id) : id_(id) {}

  CheckId id() const { return id_; }
  Verdict verdict() const;
  bool passed() const { return verdict() == Verdict::kPass; }
  const std::vector<Finding>& findings() const { return findings_; }

  void Add(Severity severity, std::string code, std::string message, std::string location = {});
  bool HasCode(std::string_view code) const;

 private:
  CheckId id_;
  std::vector<Finding> findings_;
};

struct ReleasePolicy {
  // Artifact defaults; the controller owns these numbers.
  double max_replicated_unique_proportion = 0.0;
  double max_unique_in_original_proportion = 0.01;
  RiskyClass gating_class = RiskyClass::kUniqueInOriginal;
  int64_t synth_count_threshold = 1;
  int64_t rarity_threshold = kDefaultRarityThreshold;
  AffixRule required_affix;
  std::string required_filename_token = "synthetic";

  absl::Status CheckInvariants() const;
  // "field: default -> value" for every field that differs from the defaults.
  std::vector<std::string> Overrides() const;
};

// Check 1. `banner_present` says whether the schema file began with the
// synthetic banner line.
CheckOutcome CheckLabelling(std::string_view dataset_path, const TableSchema& synth_schema,
                            bool banner_present, const ReleasePolicy& policy);

struct DisclosureResult {
  CheckOutcome outcome{CheckId::kDisclosure};
  // Absent when there was no original to match keys against.
  std::optional<RiskReport> risk;
  std::vector<SingletonValue> singletons;
};

// Check 2. `original` may be null (metadata-only release), in which case
// key matching is reported as not evaluated and only the metadata ranges are
// analysed. Value-level actions of `trail` are replayed on the original so
// matching happens at released precision.
absl::StatusOr<DisclosureResult> CheckDisclosure(const Dataset& synth, const Dataset* original,
                                                 const TableSchema& original_schema,
                                                 const KeySpec& keys,
                                                 std::span<const MitigationAction> trail,
                                                 const ReleasePolicy& policy);

// Check 3. Differences are failures unless the trail explains them (pooling
// and coarsening for labels, precision reduction and coding for
// precision/range), in which case they are recorded as documented.
CheckOutcome CheckStructure(const TableSchema& original_schema, const TableSchema& synth_schema,
                            const Dataset& synth_data, std::span<const MitigationAction> trail,
                            const ReleasePolicy& policy);

struct DocBundle {
  std::string original_metadata_reference;
  SynthesisMethod method = SynthesisMethod::kFromMargins;
  SynthesisConfig config;
  SchemaDiff diff;
  std::vector<MitigationAction> trail;
  std::string expectation_statement;
  std::vector<std::string> policy_overrides;
  // Set when any check failed; the bundle is still produced.
  bool draft = false;
};

// What analyses of the synthetic data can be expected to reproduce.
std::string ExpectationStatement(SynthesisMethod method);

absl::StatusOr<DocBundle> GenerateDocumentation(std::string_view original_metadata_reference,
                                                const SynthesisConfig& config,
                                                const SchemaDiff& diff,
                                                std::span<const MitigationAction> trail,
                                                const ReleasePolicy& policy);

// Check 4: the bundle points at the original metadata, carries the
// method's expectation statement, and lists every schema difference.
CheckOutcome CheckDocumentation(const DocBundle& bundle, const SchemaDiff& diff);

}  // namespace lfsd

#endif  // LFSD_CHECKS_H_
