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

#include "lfsd/cell.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "lfsd/str_util.h"

namespace lfsd {
namespace {

constexpr int kMaxUnitDecimals = 15;
constexpr double kHalfTolerance = 1e-9;

std::chrono::year_month_day ToYmd(Date d) {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{d.days}}};
}

// Drops trailing fractional zeros and a dangling point, and the sign of zero.
std::string NormalizeDecimal(std::string s) {
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return absl::ascii_isdigit(c); });
}

}  // namespace

Number Number::FromDouble(double v) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  std::string_view text(buf, res.ptr - buf);
  int decimals = 0;
  if (size_t dot = text.find('.'); dot != std::string_view::npos) {
    decimals = static_cast<int>(text.size() - dot - 1);
  }
  return Number{v, decimals};
}

Date Date::FromYmd(int year, unsigned month, unsigned day) {
  std::chrono::sys_days sd{std::chrono::year_month_day{
      std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}}};
  return Date{sd.time_since_epoch().count()};
}

int Date::year() const { return static_cast<int>(ToYmd(*this).year()); }
unsigned Date::month() const { return static_cast<unsigned>(ToYmd(*this).month()); }
unsigned Date::day() const { return static_cast<unsigned>(ToYmd(*this).day()); }

Date Date::Truncate(DateGranularity granularity) const {
  switch (granularity) {
    case DateGranularity::kDay:
      return *this;
    case DateGranularity::kMonth:
      return FromYmd(year(), month(), 1);
    case DateGranularity::kYear:
      return FromYmd(year(), 1, 1);
  }
  return *this;
}

DateGranularity Date::Granularity() const {
  if (day() != 1) return DateGranularity::kDay;
  if (month() != 1) return DateGranularity::kMonth;
  return DateGranularity::kYear;
}

std::optional<double> NumericValue(const Cell& c) {
  if (const auto* n = std::get_if<Number>(&c)) return n->value;
  if (const auto* d = std::get_if<Date>(&c)) return static_cast<double>(d->days);
  return std::nullopt;
}

std::string FormatNumber(double value, int decimals) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                           std::max(decimals, 0));
  std::string s(buf, res.ptr - buf);
  if (!s.empty() && s[0] == '-' &&
      s.find_first_not_of("0.", 1) == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

std::string FormatDate(Date d) {
  const auto ymd = ToYmd(d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string RenderCell(const Cell& c) {
  struct Visitor {
    std::string operator()(const Missing&) const { return ""; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const Number& n) const { return FormatNumber(n.value, n.decimals); }
    std::string operator()(const Date& d) const { return FormatDate(d); }
  };
  return std::visit(Visitor{}, c);
}

std::string CanonicalKey(const Cell& c) {
  struct Visitor {
    std::string operator()(const Missing&) const { return "\x1f" "NA"; }
    std::string operator()(const std::string& s) const { return StrCat("c:", s); }
    std::string operator()(const Number& n) const {
      return StrCat("n:", NormalizeDecimal(FormatNumber(n.value, n.decimals)));
    }
    std::string operator()(const Date& d) const { return StrCat("d:", d.days); }
  };
  return std::visit(Visitor{}, c);
}

std::optional<Number> ParseNumber(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body.remove_prefix(1);
  }
  const size_t dot = body.find('.');
  std::string_view int_part = body.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view() : body.substr(dot + 1);
  if (!AllDigits(int_part)) return std::nullopt;
  if (dot != std::string_view::npos && !AllDigits(frac_part)) return std::nullopt;
  // Leading zeros mark a code ("007", "0131"), not a quantity.
  if (int_part.size() > 1 && int_part[0] == '0') return std::nullopt;

  double value = 0;
  auto res = std::from_chars(body.data(), body.data() + body.size(), value);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size()) return std::nullopt;
  return Number{negative ? -value : value, static_cast<int>(frac_part.size())};
}

std::optional<Date> ParseDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  std::string_view y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
  if (!AllDigits(y) || !AllDigits(m) || !AllDigits(d)) return std::nullopt;
  int yi = 0;
  unsigned mi = 0, di = 0;
  std::from_chars(y.data(), y.data() + y.size(), yi);
  std::from_chars(m.data(), m.data() + m.size(), mi);
  std::from_chars(d.data(), d.data() + d.size(), di);
  std::chrono::year_month_day ymd{std::chrono::year{yi}, std::chrono::month{mi},
                                  std::chrono::day{di}};
  if (!ymd.ok()) return std::nullopt;
  return Date::FromYmd(yi, mi, di);
}

Cell ParseCell(std::string_view text, std::optional<std::string_view> missing_token) {
  if (text.empty() || (missing_token && text == *missing_token)) return Missing{};
  if (auto n = ParseNumber(text)) return *n;
  if (auto d = ParseDate(text)) return *d;
  return std::string(text);
}

double RoundToUnit(double value, double unit) {
  const double q = std::fabs(value / unit);
  double whole = std::floor(q);
  const double frac = q - whole;
  if (frac >= 0.5 - kHalfTolerance * std::max(1.0, q)) whole += 1;
  double rounded = std::copysign(whole, value) * unit;
  // Snap to the unit's decimal grid to shed binary noise (0.1 * 3 -> 0.3).
  const std::string text = FormatNumber(rounded, DecimalsOfUnit(unit));
  double clean = 0;
  std::from_chars(text.data(), text.data() + text.size(), clean);
  return clean == 0 ? 0.0 : clean;
}

int DecimalsOfUnit(double unit) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), unit, std::chars_format::fixed);
  std::string_view text(buf, res.ptr - buf);
  const size_t dot = text.find('.');
  if (dot == std::string_view::npos) return 0;
  return std::min(static_cast<int>(text.size() - dot - 1), kMaxUnitDecimals);
}

std::string_view GranularityName(DateGranularity g) {
  switch (g) {
    case DateGranularity::kDay:
      return "day";
    case DateGranularity::kMonth:
      return "month";
    case DateGranularity::kYear:
      return "year";
  }
  return "day";
}

std::optional<DateGranularity> ParseGranularity(std::string_view name) {
  if (name == "day") return DateGranularity::kDay;
  if (name == "month") return DateGranularity::kMonth;
  if (name == "year") return DateGranularity::kYear;
  return std::nullopt;
}

}  // namespace lfsd
