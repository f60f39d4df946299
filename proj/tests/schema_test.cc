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

#include "lfsd/schema.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lfsd/schema_io.h"
#include "lfsd/status.h"
#include "test_util.h"

namespace lfsd {
namespace {

using testing::Col;
using testing::D;
using testing::L;
using testing::N;
using testing::NA;
using testing::Table;

TEST(InferSchemaTest, NumericColumnTakesMaxObservedDecimals) {
  auto spec = InferColumnSpec(Col("x", {N(12.50, 2), N(3.1, 1), N(7, 0)}));
  ASSERT_TRUE(spec.ok());
  EXPECT_EQ(spec->kind, ColumnKind::kNumeric);
  EXPECT_EQ(spec->range, (ValueRange{3.1, 12.5}));
  EXPECT_EQ(spec->decimals, 2);
  EXPECT_FALSE(spec->missing_allowed);
}

TEST(InferSchemaTest, CategoricalColumnWithMissing) {
  auto spec = InferColumnSpec(Col("c", {L("A"), L("B"), L("A"), NA()}));
  ASSERT_TRUE(spec.ok());
  EXPECT_EQ(spec->kind, ColumnKind::kCategorical);
  EXPECT_EQ(spec->categories, (std::vector<std::string>{"A", "B"}));
  EXPECT_TRUE(spec->missing_allowed);
  EXPECT_DOUBLE_EQ(*spec->missing_rate, 0.25);
}

TEST(InferSchemaTest, DateGranularityIsFinestObserved) {
  auto spec = InferColumnSpec(Col("d", {D(2020, 1, 1), D(2021, 6, 1)}));
  ASSERT_TRUE(spec.ok());
  EXPECT_EQ(spec->granularity, DateGranularity::kMonth);
}

TEST(InferSchemaTest, MixedKindsAreRejected) {
  auto spec = InferColumnSpec(Col("m", {N(1), L("one")}));
  EXPECT_TRUE(HasErrorKind(spec.status(), ErrorKind::kMixedKindColumn));
}

TEST(InferSchemaTest, EmptyDatasetIsRejected) {
  EXPECT_TRUE(HasErrorKind(InferSchema(Dataset()).status(), ErrorKind::kEmptyDataset));
}

TEST(InferSchemaTest, PrecisionAboveCapIsFlagged) {
  auto spec = InferColumnSpec(Col("x", {N(0.123456789012, 12)}));
  ASSERT_TRUE(spec.ok());
  EXPECT_EQ(spec->decimals, kMaxInferredDecimals);
  EXPECT_TRUE(spec->precision_flagged);
}

// Generates 1000 rows from a known spec and checks the inferred schema
// recovers it field for field.
TEST(InferSchemaTest, RecoversGeneratorSpec) {
  std::mt19937_64 gen(42);
  const size_t n = 1000;
  const std::vector<std::string> labels = {"low", "mid", "high"};

  TableSchema truth;
  truth.row_count = n;
  truth.provenance = Provenance::kInferredFromData;
  ColumnSpec cat{.name = "grade", .kind = ColumnKind::kCategorical, .categories = labels};
  cat.missing_allowed = true;
  ColumnSpec num{.name = "score", .kind = ColumnKind::kNumeric};
  num.range = ValueRange{-5.25, 40.75};
  num.decimals = 2;
  ColumnSpec date{.name = "seen", .kind = ColumnKind::kDate};
  date.range = ValueRange{static_cast<double>(Date::FromYmd(2000, 1, 1).days),
                          static_cast<double>(Date::FromYmd(2009, 12, 1).days)};
  date.granularity = DateGranularity::kMonth;

  Column c0{"grade", {}}, c1{"score", {}}, c2{"seen", {}};
  size_t missing = 0;
  for (size_t r = 0; r < n; ++r) {
    // The first rows pin the first-appearance order and the extremes.
    if (r < 3) {
      c0.cells.push_back(L(labels[r]));
    } else if (gen() % 10 == 0) {
      c0.cells.push_back(NA());
      ++missing;
    } else {
      c0.cells.push_back(L(labels[gen() % 3]));
    }
    if (r == 0) {
      c1.cells.push_back(N(-5.25, 2));
      c2.cells.push_back(D(2000, 1, 1));
    } else if (r == 1) {
      c1.cells.push_back(N(40.75, 2));
      c2.cells.push_back(D(2009, 12, 1));
    } else {
      const int hundredths = -525 + static_cast<int>(gen() % 4601);
      c1.cells.push_back(N(hundredths / 100.0, 2));
      c2.cells.push_back(D(2000 + static_cast<int>(gen() % 10), 1 + gen() % 12, 1));
    }
  }
  cat.missing_rate = static_cast<double>(missing) / n;
  num.missing_rate = 0.0;
  date.missing_rate = 0.0;
  truth.columns = {cat, num, date};

  auto inferred = InferSchema(Table({c0, c1, c2}));
  ASSERT_TRUE(inferred.ok());
  EXPECT_EQ(*inferred, truth);
}

TEST(ValidateTest, UnknownCategory) {
  TableSchema schema;
  schema.columns.push_back({.name = "c", .kind = ColumnKind::kCategorical, .categories = {"A", "B"}});
  auto v = Validate(Table({Col("c", {L("A"), L("Z")})}), schema);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kUnknownCategory);
  EXPECT_EQ(v[0].row, 1u);
}

TEST(ValidateTest, ExcessPrecision) {
  TableSchema schema;
  ColumnSpec spec{.name = "x", .kind = ColumnKind::kNumeric};
  spec.range = ValueRange{0, 10};
  spec.decimals = 2;
  schema.columns.push_back(spec);
  auto v = Validate(Table({Col("x", {N(3.141, 3), N(3.14, 2)})}), schema);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kExcessPrecision);
}

TEST(ValidateTest, UnitPrecisionAndUnknownColumn) {
  TableSchema schema;
  ColumnSpec spec{.name = "income", .kind = ColumnKind::kNumeric};
  spec.unit = 1000;
  schema.columns.push_back(spec);
  auto v = Validate(Table({Col("income", {N(12000), N(12500)}), Col("extra", {L("a"), L("b")})}),
                    schema);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, ViolationKind::kExcessPrecision);
  EXPECT_EQ(v[1].kind, ViolationKind::kUnknownColumn);
}

// Independent cell-by-cell scan for the property test below.
size_t BruteViolationCount(const Dataset& data, const ColumnSpec& cat, const ColumnSpec& num) {
  size_t count = 0;
  for (const Cell& c : data.column(0).cells) {
    if (IsMissing(c)) {
      count += cat.missing_allowed ? 0 : 1;
    } else if (!std::holds_alternative<std::string>(c)) {
      ++count;
    } else {
      const std::string& s = std::get<std::string>(c);
      bool known = false;
      for (const std::string& k : cat.categories) known = known || k == s;
      count += known ? 0 : 1;
    }
  }
  for (const Cell& c : data.column(1).cells) {
    if (IsMissing(c)) {
      count += num.missing_allowed ? 0 : 1;
    } else if (!std::holds_alternative<Number>(c)) {
      ++count;
    } else {
      const double v = std::get<Number>(c).value;
      count += (v < num.range->min || v > num.range->max) ? 1 : 0;
      count += (v != std::floor(v)) ? 1 : 0;
    }
  }
  return count;
}

TEST(ValidateTest, CountMatchesBruteForceScan) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    ColumnSpec cat{.name = "c", .kind = ColumnKind::kCategorical, .categories = {"a", "b"}};
    cat.missing_allowed = gen() % 2 == 0;
    ColumnSpec num{.name = "n", .kind = ColumnKind::kNumeric};
    num.range = ValueRange{0, 5};
    num.missing_allowed = gen() % 2 == 0;
    TableSchema schema;
    schema.columns = {cat, num};

    Column c{"c", {}}, x{"n", {}};
    for (int r = 0; r < 30; ++r) {
      switch (gen() % 5) {
        case 0: c.cells.push_back(NA()); break;
        case 1: c.cells.push_back(N(1)); break;
        case 2: c.cells.push_back(L("zz")); break;
        default: c.cells.push_back(L(gen() % 2 ? "a" : "b"));
      }
      switch (gen() % 5) {
        case 0: x.cells.push_back(NA()); break;
        case 1: x.cells.push_back(L("q")); break;
        default: {
          const double v = static_cast<double>(gen() % 16) / 2.0 - 1.0;
          x.cells.push_back(N(v, v == std::floor(v) ? 0 : 1));
        }
      }
    }
    const Dataset data = Table({c, x});
    EXPECT_EQ(Validate(data, schema).size(), BruteViolationCount(data, cat, num));
  }
}

TableSchema SampleSchema() {
  TableSchema s;
  s.row_count = 10;
  s.columns.push_back({.name = "county", .kind = ColumnKind::kCategorical,
                       .categories = {"A", "X", "Y"}});
  ColumnSpec age{.name = "age", .kind = ColumnKind::kNumeric};
  age.range = ValueRange{18, 90};
  s.columns.push_back(age);
  return s;
}

TableSchema Affixed(TableSchema s, const AffixRule& affix) {
  for (ColumnSpec& c : s.columns) c.name = affix.Apply(c.name);
  return s;
}

TEST(DiffSchemasTest, AffixOnlyDiffHasNoStructuralEntries) {
  const AffixRule affix;
  auto diff = DiffSchemas(SampleSchema(), Affixed(SampleSchema(), affix), affix);
  ASSERT_TRUE(diff.ok());
  ASSERT_EQ(diff->columns.size(), 2u);
  EXPECT_FALSE(diff->HasStructuralDifferences());
  EXPECT_EQ(*diff->columns[0].synth_name, "synth_county");
  EXPECT_TRUE(diff->columns[0].renamed());
}

TEST(DiffSchemasTest, PooledCategoriesAreListed) {
  const AffixRule affix;
  TableSchema synth = Affixed(SampleSchema(), affix);
  synth.columns[0].categories = {"A", "OTHER_POOLED"};
  auto diff = DiffSchemas(SampleSchema(), synth, affix);
  ASSERT_TRUE(diff.ok());
  const ColumnDiff& d = diff->columns[0];
  EXPECT_EQ(d.pooled_categories,
            (std::map<std::string, std::string>{{"X", "OTHER_POOLED"}, {"Y", "OTHER_POOLED"}}));
  EXPECT_TRUE(d.removed_categories.empty());
}

TEST(DiffSchemasTest, UnmatchedSynthColumnIsRejected) {
  TableSchema synth = Affixed(SampleSchema(), AffixRule());
  synth.columns.push_back({.name = "synth_zzz", .kind = ColumnKind::kCategorical,
                           .categories = {"a"}});
  auto diff = DiffSchemas(SampleSchema(), synth, AffixRule());
  EXPECT_TRUE(HasErrorKind(diff.status(), ErrorKind::kSynthColumnNotInOriginal));
}

TEST(DiffSchemasTest, OmittedColumnIsPermittedAndReported) {
  TableSchema synth = Affixed(SampleSchema(), AffixRule());
  synth.columns.pop_back();
  auto diff = DiffSchemas(SampleSchema(), synth, AffixRule());
  ASSERT_TRUE(diff.ok());
  EXPECT_TRUE(diff->Find("age")->missing_in_synth());
}

TEST(DiffSchemasTest, RangePrecisionAndMissingness) {
  TableSchema synth = Affixed(SampleSchema(), AffixRule::Suffix("_synth"));
  synth.columns[1].range = ValueRange{20, 80};
  synth.columns[1].unit = 10;
  synth.columns[1].missing_allowed = true;
  auto diff = DiffSchemas(SampleSchema(), synth, AffixRule::Suffix("_synth"));
  ASSERT_TRUE(diff.ok());
  const ColumnDiff& d = *diff->Find("age");
  ASSERT_TRUE(d.range_change.has_value());
  ASSERT_TRUE(d.precision_change.has_value());
  ASSERT_TRUE(d.missingness_mismatch.has_value());
  EXPECT_EQ(*d.missingness_mismatch, std::make_pair(false, true));
}

TEST(SchemaIoTest, RoundTripWithBanner) {
  TableSchema s = SampleSchema();
  s.is_synthetic = true;
  s.columns[1].unit = 5;
  s.columns[1].missing_allowed = true;
  s.columns[1].missing_rate = 0.5;
  s.source_metadata_reference = "meta.json";
  const std::string text = SerializeSchema(s);
  EXPECT_EQ(text.rfind(kSyntheticBanner, 0), 0u);
  auto back = ParseSchema(text);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_TRUE(back->banner_present);
  EXPECT_EQ(back->schema, s);
}

TEST(SchemaIoTest, OriginalSchemaHasNoBanner) {
  auto back = ParseSchema(SerializeSchema(SampleSchema()));
  ASSERT_TRUE(back.ok());
  EXPECT_FALSE(back->banner_present);
  EXPECT_EQ(back->schema, SampleSchema());
}

TEST(SchemaIoTest, UnknownColumnFieldIsRejected) {
  auto parsed = ParseSchema(
      R"({"columns": [{"name": "a", "kind": "numeric", "range": [1, 2]}]})");
  EXPECT_TRUE(HasErrorKind(parsed.status(), ErrorKind::kParseError));
}

TEST(SchemaIoTest, DateRangesUseIsoText) {
  auto parsed = ParseSchema(R"({"columns": [{"name": "d", "kind": "date",
      "numeric_range": ["2010-01-01", "2010-12-31"], "precision": "month"}]})");
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  const ColumnSpec& d = parsed->schema.columns[0];
  EXPECT_EQ(d.granularity, DateGranularity::kMonth);
  EXPECT_EQ(d.range->min, static_cast<double>(Date::FromYmd(2010, 1, 1).days));
}

TEST(SchemaInvariantsTest, RejectsBadSpecs) {
  TableSchema s = SampleSchema();
  s.columns[1].range = ValueRange{5, 1};
  EXPECT_FALSE(s.CheckInvariants().ok());
  s = SampleSchema();
  s.columns.push_back(s.columns[0]);
  EXPECT_FALSE(s.CheckInvariants().ok());
  s = SampleSchema();
  s.columns[0].missing_rate = 0.2;
  EXPECT_FALSE(s.CheckInvariants().ok()) << "rate > 0 requires missing_allowed";
}

}  // namespace
}  // namespace lfsd
