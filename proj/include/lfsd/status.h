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

#ifndef LFSD_STATUS_H_
#define LFSD_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"

namespace lfsd {

// Domain error kinds. Every non-OK status produced by this library carries
// one of these as a payload so callers and tests can branch on the kind
// without parsing messages.
enum class ErrorKind {
  kEmptyDataset,
  kMixedKindColumn,
  kSynthColumnNotInOriginal,
  kMethodMismatch,
  kDegenerateRange,
  kEmptyOriginal,
  kTransformPreconditionViolated,
  kUnknownKeyColumn,
  kKeyAfterAffixMismatch,
  kNotNumericOrDate,
  kInvalidPercentiles,
  kNotCategorical,
  kPooledLabelCollision,
  kStaleReport,
  kPartialMapping,
  kMissingOriginalReference,
  kUnknownColumn,
  kParseError,
  kIoError,
  kConfigError,
};

std::string_view ErrorKindName(ErrorKind kind);

// Builds a status whose message is prefixed with the kind name and whose
// payload records the kind.
absl::Status MakeError(ErrorKind kind, std::string_view message);

std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

// Same status with "<context>: " prefixed to the message; payloads kept.
absl::Status Annotate(const absl::Status& status, std::string_view context);

inline bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  return GetErrorKind(status) == kind;
}

}  // namespace lfsd

#define LFSD_RETURN_IF_ERROR(expr)            \
  do {                                        \
    ::absl::Status lfsd_status_ = (expr);     \
    if (!lfsd_status_.ok()) return lfsd_status_; \
  } while (false)

#define LFSD_CONCAT_INNER_(a, b) a##b
#define LFSD_CONCAT_(a, b) LFSD_CONCAT_INNER_(a, b)

#define LFSD_ASSIGN_OR_RETURN(lhs, rexpr) \
  LFSD_ASSIGN_OR_RETURN_IMPL_(LFSD_CONCAT_(lfsd_statusor_, __LINE__), lhs, rexpr)

#define LFSD_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                \
  if (!statusor.ok()) return statusor.status();           \
  lhs = std::move(statusor).value()

#endif  // LFSD_STATUS_H_
