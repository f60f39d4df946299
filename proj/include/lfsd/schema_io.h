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

// Schema file format. A schema file is a JSON document:
//
//   {
//     "header": {"is_synthetic": ..., "provenance": ..., "row_count": ...,
//                "source_metadata_reference": ...},
//     "columns": [{"name": ..., "kind": ..., ...}, ...]
//   }
//
// A synthetic schema is preceded by the banner line kSyntheticBanner, which
// readers strip before parsing the JSON body.

#ifndef LFSD_SCHEMA_IO_H_
#define LFSD_SCHEMA_IO_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "lfsd/schema.h"

namespace lfsd {

inline constexpr std::string_view kSyntheticBanner = "SYNTHETIC DATA — NOT REAL RECORDS";

struct LoadedSchema {
  TableSchema schema;
  bool banner_present = false;
};

nlohmann::ordered_json ColumnSpecToJson(const ColumnSpec& spec);
absl::StatusOr<ColumnSpec> ColumnSpecFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json SchemaToJson(const TableSchema& schema);
absl::StatusOr<TableSchema> SchemaFromJson(const nlohmann::ordered_json& j);

// Banner (if synthetic) + pretty-printed JSON + trailing newline.
std::string SerializeSchema(const TableSchema& schema);
absl::StatusOr<LoadedSchema> ParseSchema(std::string_view text);

absl::StatusOr<LoadedSchema> ReadSchemaFile(const std::string& path);
absl::Status WriteSchemaFile(const std::string& path, const TableSchema& schema);

nlohmann::ordered_json SchemaDiffToJson(const SchemaDiff& diff);

}  // namespace lfsd

#endif  // LFSD_SCHEMA_IO_H_
