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

// Structured (JSON) and human-readable (Markdown) renderings of reports.
// Output is deterministic: fixed key order, no timestamps, no absolute
// paths beyond what the config supplied.

#ifndef LFSD_REPORT_IO_H_
#define LFSD_REPORT_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "lfsd/checks.h"
#include "lfsd/fidelity.h"
#include "lfsd/pipeline.h"
#include "lfsd/risk.h"
#include "lfsd/sdc.h"

namespace lfsd {

nlohmann::ordered_json RiskReportToJson(const RiskReport& report);
nlohmann::ordered_json SingletonsToJson(const std::vector<SingletonValue>& singletons);
nlohmann::ordered_json MitigationActionToJson(const MitigationAction& action);
absl::StatusOr<MitigationAction> MitigationActionFromJson(const nlohmann::ordered_json& j);
nlohmann::ordered_json TrailToJson(const std::vector<MitigationAction>& trail);
nlohmann::ordered_json CheckOutcomeToJson(const CheckOutcome& outcome);
nlohmann::ordered_json PolicyToJson(const ReleasePolicy& policy);
nlohmann::ordered_json FidelityToJson(const FidelityReport& fidelity);
nlohmann::ordered_json DocBundleToJson(const DocBundle& bundle);
nlohmann::ordered_json FullReportToJson(const FullReport& report);

// Pretty-printed JSON text with a trailing newline.
std::string DumpJson(const nlohmann::ordered_json& j);

std::string RenderDocBundleMarkdown(const DocBundle& bundle);
std::string RenderFullReportMarkdown(const FullReport& report);
std::string RenderRiskReportMarkdown(const RiskReport& report);
std::string RenderFidelityMarkdown(const FidelityReport& fidelity);

}  // namespace lfsd

#endif  // LFSD_REPORT_IO_H_
