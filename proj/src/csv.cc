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

#include "lfsd/csv.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "lfsd/file_util.h"
#include "lfsd/schema.h"
#include "lfsd/status.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

struct Record {
  size_t line = 0;  // 1-based line the record starts on
  std::vector<std::string> fields;
  bool blank = false;
};

absl::StatusOr<std::vector<Record>> SplitRecords(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Record> records;
  Record current;
  std::string field;
  size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    current.blank = !record_has_content;
    records.push_back(std::move(current));
    current = Record{};
    record_has_content = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          return MakeError(ErrorKind::kParseError,
                           StrCat("line ", line, ": unexpected quote inside field ",
                                        current.fields.size() + 1));
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        if (field_was_quoted) {
          return MakeError(ErrorKind::kParseError,
                           StrCat("line ", line, ": text after closing quote in field ",
                                        current.fields.size() + 1));
        }
        field.push_back(c);
        record_has_content = true;
        break;
    }
  }
  if (in_quotes) {
    return MakeError(ErrorKind::kParseError,
                     StrCat("line ", current.line, ": unterminated quoted field"));
  }
  if (record_has_content || !field.empty()) end_record();
  return records;
}

bool NeedsQuoting(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void AppendField(std::string& out, std::string_view s) {
  if (!NeedsQuoting(s)) {
    out.append(s);
    return;
  }
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

absl::StatusOr<Cell> CoerceCell(const std::string& text, const ColumnSpec& spec, size_t line,
                                const CsvOptions& options) {
  if (text.empty() || (options.missing_token && text == *options.missing_token)) {
    return Missing{};
  }
  switch (spec.kind) {
    case ColumnKind::kCategorical:
      return Cell(text);
    case ColumnKind::kNumeric:
      if (auto n = ParseNumber(text)) return Cell(*n);
      break;
    case ColumnKind::kDate:
      if (auto d = ParseDate(text)) return Cell(*d);
      break;
  }
  return MakeError(ErrorKind::kParseError,
                   StrCat("line ", line, ", column '", spec.name, "': '", text,
                                "' is not a valid ", ColumnKindName(spec.kind), " value"));
}

absl::StatusOr<Dataset> BuildDataset(std::string_view text, const TableSchema* schema,
                                     const CsvOptions& options) {
  LFSD_ASSIGN_OR_RETURN(std::vector<Record> records, SplitRecords(text));
  while (!records.empty() && records.front().blank) records.erase(records.begin());
  // A blank line is a single missing cell in a one-column table and noise
  // otherwise.
  if (!records.empty() && records.front().fields.size() != 1) {
    std::erase_if(records, [](const Record& r) { return r.blank; });
  }
  if (records.empty()) {
    return MakeError(ErrorKind::kEmptyDataset, "CSV input has no header row");
  }
  const std::vector<std::string>& header = records[0].fields;
  const size_t width = header.size();
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != width) {
      return MakeError(ErrorKind::kParseError,
                       StrCat("row ", r, " (line ", records[r].line, ") has ",
                                    records[r].fields.size(), " fields, header has ", width));
    }
  }

  std::vector<Column> columns;
  columns.reserve(width);
  for (size_t c = 0; c < width; ++c) {
    if (header[c].empty()) {
      return MakeError(ErrorKind::kParseError,
                       StrCat("line ", records[0].line, ": column ", c + 1,
                                    " has an empty name"));
    }
    Column column{header[c], {}};
    column.cells.reserve(records.size() - 1);
    const ColumnSpec* spec = schema ? schema->FindColumn(header[c]) : nullptr;
    for (size_t r = 1; r < records.size(); ++r) {
      const std::string& field = records[r].fields[c];
      if (spec) {
        LFSD_ASSIGN_OR_RETURN(Cell cell, CoerceCell(field, *spec, records[r].line, options));
        column.cells.push_back(std::move(cell));
      } else {
        std::optional<std::string_view> token;
        if (options.missing_token) token = *options.missing_token;
        column.cells.push_back(ParseCell(field, token));
      }
    }
    columns.push_back(std::move(column));
  }
  absl::StatusOr<Dataset> data = Dataset::FromColumns(std::move(columns));
  if (!data.ok()) return MakeError(ErrorKind::kParseError, ToStd(data.status().message()));
  return data;
}

}  // namespace

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRecords(std::string_view text) {
  LFSD_ASSIGN_OR_RETURN(std::vector<Record> records, SplitRecords(text));
  std::vector<std::vector<std::string>> out;
  out.reserve(records.size());
  for (Record& r : records) out.push_back(std::move(r.fields));
  return out;
}

absl::StatusOr<Dataset> ParseCsv(std::string_view text, const CsvOptions& options) {
  return BuildDataset(text, nullptr, options);
}

absl::StatusOr<Dataset> ParseCsv(std::string_view text, const TableSchema& schema,
                                 const CsvOptions& options) {
  return BuildDataset(text, &schema, options);
}

std::string WriteCsv(const Dataset& data) {
  std::string out;
  for (size_t c = 0; c < data.column_count(); ++c) {
    if (c > 0) out.push_back(',');
    AppendField(out, data.column(c).name);
  }
  out.push_back('\n');
  for (size_t r = 0; r < data.row_count(); ++r) {
    for (size_t c = 0; c < data.column_count(); ++c) {
      if (c > 0) out.push_back(',');
      AppendField(out, RenderCell(data.column(c).cells[r]));
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<Dataset> ReadCsvFile(const std::string& path, const CsvOptions& options) {
  LFSD_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  absl::StatusOr<Dataset> data = ParseCsv(text, options);
  if (!data.ok()) return Annotate(data.status(), path);
  return data;
}

absl::StatusOr<Dataset> ReadCsvFile(const std::string& path, const TableSchema& schema,
                                    const CsvOptions& options) {
  LFSD_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  absl::StatusOr<Dataset> data = ParseCsv(text, schema, options);
  if (!data.ok()) return Annotate(data.status(), path);
  return data;
}

}  // namespace lfsd
