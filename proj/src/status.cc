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

#include "lfsd/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

constexpr char kErrorKindUrl[] = "type.lfsd/ErrorKind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array kKinds = {
    KindInfo{ErrorKind::kEmptyDataset, "EmptyDataset", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMixedKindColumn, "MixedKindColumn", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kSynthColumnNotInOriginal, "SynthColumnNotInOriginal",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kMethodMismatch, "MethodMismatch", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kDegenerateRange, "DegenerateRange", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kEmptyOriginal, "EmptyOriginal", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kTransformPreconditionViolated, "TransformPreconditionViolated",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kUnknownKeyColumn, "UnknownKeyColumn", absl::StatusCode::kNotFound},
    KindInfo{ErrorKind::kKeyAfterAffixMismatch, "KeyAfterAffixMismatch",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kNotNumericOrDate, "NotNumericOrDate", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidPercentiles, "InvalidPercentiles",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kNotCategorical, "NotCategorical", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kPooledLabelCollision, "PooledLabelCollision",
             absl::StatusCode::kAlreadyExists},
    KindInfo{ErrorKind::kStaleReport, "StaleReport", absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kPartialMapping, "PartialMapping", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMissingOriginalReference, "MissingOriginalReference",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kUnknownColumn, "UnknownColumn", absl::StatusCode::kNotFound},
    KindInfo{ErrorKind::kParseError, "ParseError", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kIoError, "IoError", absl::StatusCode::kUnavailable},
    KindInfo{ErrorKind::kConfigError, "ConfigError", absl::StatusCode::kInvalidArgument},
};

const KindInfo& Info(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds.back();
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Info(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Info(kind);
  absl::Status status(info.code, StrCat(info.name, ": ", message));
  status.SetPayload(kErrorKindUrl, absl::Cord(ToAbsl(info.name)));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  absl::optional<absl::Cord> payload = status.GetPayload(kErrorKindUrl);
  if (!payload) return std::nullopt;
  const std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

absl::Status Annotate(const absl::Status& status, std::string_view context) {
  if (status.ok()) return status;
  absl::Status out(status.code(), StrCat(context, ": ", ToStd(status.message())));
  status.ForEachPayload(
      [&out](absl::string_view url, const absl::Cord& payload) { out.SetPayload(url, payload); });
  return out;
}

}  // namespace lfsd
