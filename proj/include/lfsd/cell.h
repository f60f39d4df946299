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

#ifndef LFSD_CELL_H_
#define LFSD_CELL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace lfsd {

// Numeric cell. `decimals` is the number of decimal places the value is
// quoted to; it is part of the value as released, so 7 and 7.00 render
// differently but compare equal under CanonicalKey.
struct Number {
  double value = 0.0;
  int decimals = 0;

  // Uses the shortest round-trip fixed representation of `v`.
  static Number FromDouble(double v);

  friend bool operator==(const Number&, const Number&) = default;
};

enum class DateGranularity { kDay, kMonth, kYear };

// Calendar date stored as days since 1970-01-01.
struct Date {
  int64_t days = 0;

  static Date FromYmd(int year, unsigned month, unsigned day);
  int year() const;
  unsigned month() const;
  unsigned day() const;

  // Truncates to the first day of the month or year.
  Date Truncate(DateGranularity granularity) const;
  // Finest granularity this particular date is consistent with.
  DateGranularity Granularity() const;

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

struct Missing {
  friend bool operator==(const Missing&, const Missing&) = default;
};

// A categorical label is a plain string.
using Cell = std::variant<Missing, std::string, Number, Date>;

inline bool IsMissing(const Cell& c) { return std::holds_alternative<Missing>(c); }

// Numeric view of a numeric or date cell (dates as day counts).
std::optional<double> NumericValue(const Cell& c);

// Text as written to CSV. Missing renders as the empty string.
std::string RenderCell(const Cell& c);

// Key used for tuple matching and value counting. Numbers are normalised so
// that trailing zeros do not matter; the kind is encoded so a label "7" never
// equals the number 7. Missing has its own token.
std::string CanonicalKey(const Cell& c);

// Parses untyped CSV text into its natural kind: number, ISO date
// (YYYY-MM-DD), otherwise a label. `missing_token`, when set, also maps to
// Missing in addition to the empty string.
Cell ParseCell(std::string_view text,
               std::optional<std::string_view> missing_token = std::nullopt);

std::optional<Number> ParseNumber(std::string_view text);
std::optional<Date> ParseDate(std::string_view text);
std::string FormatDate(Date d);
std::string FormatNumber(double value, int decimals);

// Half-away-from-zero rounding to a multiple of `unit`, tolerant of binary
// representation error at exact halves.
double RoundToUnit(double value, double unit);

// Decimal places needed to write `unit` exactly (1000 -> 0, 0.05 -> 2).
int DecimalsOfUnit(double unit);

std::string_view GranularityName(DateGranularity g);
std::optional<DateGranularity> ParseGranularity(std::string_view name);

}  // namespace lfsd

#endif  // LFSD_CELL_H_
