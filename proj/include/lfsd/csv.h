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

// CSV dialect: comma separated, first row is the header, RFC-4180 quoting,
// UTF-8, empty field = missing. Output always uses "\n" line endings.

#ifndef LFSD_CSV_H_
#define LFSD_CSV_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "lfsd/dataset.h"

namespace lfsd {

struct TableSchema;

struct CsvOptions {
  // Extra sentinel string read as missing (e.g. "NA").
  std::optional<std::string> missing_token;
};

// Raw RFC-4180 split. Errors name the 1-based line of the offending record.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRecords(
    std::string_view text);

// Cells are typed by their natural kind; a column may end up mixed, which
// InferSchema reports.
absl::StatusOr<Dataset> ParseCsv(std::string_view text, const CsvOptions& options = {});

// Cells are coerced to the kind the schema declares for the column of the
// same name. Columns absent from the schema keep their natural kinds.
absl::StatusOr<Dataset> ParseCsv(std::string_view text, const TableSchema& schema,
                                 const CsvOptions& options = {});

std::string WriteCsv(const Dataset& data);

absl::StatusOr<Dataset> ReadCsvFile(const std::string& path, const CsvOptions& options = {});
absl::StatusOr<Dataset> ReadCsvFile(const std::string& path, const TableSchema& schema,
                                    const CsvOptions& options = {});

}  // namespace lfsd

#endif  // LFSD_CSV_H_
