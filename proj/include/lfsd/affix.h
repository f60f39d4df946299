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

#ifndef LFSD_AFFIX_H_
#define LFSD_AFFIX_H_

#include <optional>
#include <string>
#include <string_view>

namespace lfsd {

class Dataset;

// Marks synthetic column names, either "synth_age" or "age_synth".
struct AffixRule {
  enum class Position { kPrefix, kSuffix };

  Position position = Position::kPrefix;
  std::string text = "synth_";

  static AffixRule Prefix(std::string text) { return {Position::kPrefix, std::move(text)}; }
  static AffixRule Suffix(std::string text) { return {Position::kSuffix, std::move(text)}; }

  std::string Apply(std::string_view name) const;
  bool Matches(std::string_view name) const;
  // The original name, or nullopt when `name` does not carry the affix.
  std::optional<std::string> Strip(std::string_view name) const;

  // "prefix:synth_" / "suffix:_synth"; also the config-file spelling.
  std::string ToString() const;
  static std::optional<AffixRule> Parse(std::string_view spec);

  friend bool operator==(const AffixRule&, const AffixRule&) = default;
};

// Finds `original_name` in `data`, trying the affixed name first and then the
// bare name. Returns -1 if neither is present.
int ResolveColumn(const Dataset& data, std::string_view original_name, const AffixRule& affix);

}  // namespace lfsd

#endif  // LFSD_AFFIX_H_
