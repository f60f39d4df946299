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

#include "lfsd/sdc.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lfsd/pipeline.h"
#include "lfsd/risk.h"
#include "lfsd/schema.h"
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

std::vector<double> Values(const Column& c) {
  std::vector<double> out;
  for (const Cell& cell : c.cells) {
    if (auto v = NumericValue(cell)) out.push_back(*v);
  }
  return out;
}

Dataset OneToHundred() {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 1);
  return Table({testing::IntColumn("x", v)});
}

// Nearest-rank percentile computed directly from the sorted values.
double NearestRank(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<size_t>(rank, 1, n);
  return v[rank - 1];
}

TEST(ReducePrecisionTest, IncomeToThousands) {
  const Dataset d = Table({testing::IntColumn("income", {12345, 987})});
  auto m = ReducePrecision(d, "income", 1000.0);
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(Values(m->data.column(0)), (std::vector<double>{12000, 1000}));
  EXPECT_TRUE(m->action.changed);
  EXPECT_EQ(m->action.kind(), MitigationKind::kReducePrecision);
}

TEST(ReducePrecisionTest, UnitOneOnIntegersIsIdentity) {
  const Dataset d = Table({testing::IntColumn("n", {3, -4, 0})});
  auto m = ReducePrecision(d, "n", 1.0);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->data, d);
  EXPECT_FALSE(m->action.changed);
}

TEST(ReducePrecisionTest, DatesToYear) {
  const Dataset d = Table({Col("dob", {D(1980, 7, 4), D(1991, 12, 31), NA()})});
  auto m = ReducePrecision(d, "dob", DateGranularity::kYear);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->data.column(0).cells, (std::vector<Cell>{D(1980, 1, 1), D(1991, 1, 1), NA()}));
}

TEST(ReducePrecisionTest, LabelsAreRejected) {
  const Dataset d = Table({Col("c", {L("a")})});
  EXPECT_TRUE(HasErrorKind(ReducePrecision(d, "c", 1.0).status(), ErrorKind::kNotNumericOrDate));
  EXPECT_TRUE(HasErrorKind(ReducePrecision(d, "c", DateGranularity::kYear).status(),
                           ErrorKind::kNotNumericOrDate));
}

TEST(TopBottomCodeTest, PercentileCutsAreNearestRank) {
  const Dataset d = OneToHundred();
  auto m = TopBottomCode(d, "x", CodingMode::Percentile(1, 99));
  ASSERT_TRUE(m.ok());
  const auto& cuts = std::get<CodingParams>(m->action.params).cuts;
  EXPECT_EQ(cuts.lower, NearestRank(Values(d.column(0)), 1));
  EXPECT_EQ(cuts.upper, NearestRank(Values(d.column(0)), 99));
  const std::vector<double> out = Values(m->data.column(0));
  EXPECT_EQ(*std::min_element(out.begin(), out.end()), 1);
  EXPECT_EQ(*std::max_element(out.begin(), out.end()), 99);
  EXPECT_EQ(out[99], 99);
}

TEST(TopBottomCodeTest, CountThresholdLeavesLargeTail) {
  std::vector<int> v;
  for (int i = 1; i <= 20; ++i) v.push_back(i);
  for (int i = 0; i < 7; ++i) v.push_back(50);
  const Dataset d = Table({testing::IntColumn("x", v)});
  auto m = TopBottomCode(d, "x", CodingMode::CountThreshold(5));
  ASSERT_TRUE(m.ok());
  const std::vector<double> out = Values(m->data.column(0));
  EXPECT_EQ(std::count(out.begin(), out.end(), 50.0), 7);
  // The bottom tail is collapsed until it holds five values.
  EXPECT_EQ(std::count(out.begin(), out.end(), 5.0), 5);
  EXPECT_EQ(*std::min_element(out.begin(), out.end()), 5);
}

TEST(TopBottomCodeTest, ConstantColumnIsIdentity) {
  const Dataset d = Table({testing::IntColumn("x", {4, 4, 4, 4})});
  for (const CodingMode& mode : {CodingMode::Percentile(1, 99), CodingMode::CountThreshold(3)}) {
    auto m = TopBottomCode(d, "x", mode);
    ASSERT_TRUE(m.ok());
    EXPECT_EQ(m->data, d);
    EXPECT_FALSE(m->action.changed);
  }
}

TEST(TopBottomCodeTest, InvalidPercentiles) {
  EXPECT_TRUE(HasErrorKind(TopBottomCode(OneToHundred(), "x", CodingMode::Percentile(50, 50)).status(),
                           ErrorKind::kInvalidPercentiles));
  EXPECT_TRUE(HasErrorKind(TopBottomCode(OneToHundred(), "x", CodingMode::Percentile(-1, 50)).status(),
                           ErrorKind::kInvalidPercentiles));
}

TEST(TopBottomCodeTest, RandomColumnsStayInsideNearestRankCuts) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> v(1 + gen() % 300);
    for (int& x : v) x = static_cast<int>(gen() % 1000) - 500;
    const Dataset d = Table({testing::IntColumn("x", v)});
    auto m = TopBottomCode(d, "x", CodingMode::Percentile(1, 99));
    ASSERT_TRUE(m.ok());
    const double lo = NearestRank(Values(d.column(0)), 1);
    const double hi = NearestRank(Values(d.column(0)), 99);
    for (double x : Values(m->data.column(0))) {
      EXPECT_GE(x, lo);
      EXPECT_LE(x, hi);
    }
  }
}

CategoryCounts Counties() { return {{"A", 100}, {"B", 4}, {"C", 3}}; }

Dataset CountyData() { return Table({testing::LabelColumn("county", {"A", "B", "C", "A", "B"})}); }

TEST(PoolCategoriesTest, RareOriginalCategoriesArePooled) {
  auto m = PoolCategories(CountyData(), "county", Counties(), 5);
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(m->data.column(0).cells,
            (std::vector<Cell>{L("A"), L("OTHER_POOLED"), L("OTHER_POOLED"), L("A"), L("OTHER_POOLED")}));
  EXPECT_EQ(std::get<PoolingParams>(m->action.params).pooled_categories,
            (std::vector<std::string>{"B", "C"}));
}

TEST(PoolCategoriesTest, NothingRareIsIdentity) {
  auto m = PoolCategories(CountyData(), "county", {{"A", 9}, {"B", 5}, {"C", 50}}, 5);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->data, CountyData());
  EXPECT_FALSE(m->action.changed);
}

TEST(PoolCategoriesTest, Errors) {
  EXPECT_TRUE(HasErrorKind(
      PoolCategories(CountyData(), "county", {{"A", 1}, {"OTHER_POOLED", 9}}).status(),
      ErrorKind::kPooledLabelCollision));
  const Dataset numbers = Table({testing::IntColumn("n", {1})});
  EXPECT_TRUE(HasErrorKind(PoolCategories(numbers, "n", {}).status(), ErrorKind::kNotCategorical));
}

TEST(PoolCategoriesTest, SurvivorsHaveOriginalCountAtLeastThreshold) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> original;
    for (int i = 0; i < 80; ++i) {
      // Geometric-ish label frequencies so some labels are rare.
      int k = 0;
      while (k < 9 && gen() % 2 == 0) ++k;
      original.push_back("L" + std::to_string(k));
    }
    const Column oc = testing::LabelColumn("c", original);
    const CategoryCounts counts = CountCategories(oc);
    auto m = PoolCategories(Table({oc}), "c", counts, 5);
    ASSERT_TRUE(m.ok());
    for (const Cell& c : m->data.column(0).cells) {
      const std::string& s = std::get<std::string>(c);
      if (s == kDefaultPooledLabel) continue;
      EXPECT_GE(counts.at(s), 5) << s;
    }
  }
}

TEST(RemoveRecordsTest, DropsFlaggedRows) {
  std::vector<std::string> labels(20, "common");
  labels[3] = "rare1";
  labels[17] = "rare2";
  const Dataset synth = Table({testing::LabelColumn("k", labels)});
  const Dataset original = Table({testing::LabelColumn("k", {"rare1", "rare2", "common"})});
  auto report = ClassifyRiskyRecords(synth, original, KeySpec{{"k"}, ""});
  ASSERT_TRUE(report.ok());
  ASSERT_EQ(report->replicated_unique_rows, (std::vector<size_t>{3, 17}));
  auto m = RemoveRecords(synth, *report, RiskyClass::kReplicatedUnique);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->data.row_count(), 18u);
  for (const Cell& c : m->data.column(0).cells) EXPECT_EQ(c, L("common"));
}

TEST(RemoveRecordsTest, EmptyFlagSetIsIdentityAndStaleReportErrors) {
  const Dataset synth = Table({testing::LabelColumn("k", {"a", "a"})});
  auto report = ClassifyRiskyRecords(synth, synth, KeySpec{{"k"}, ""});
  ASSERT_TRUE(report.ok());
  auto m = RemoveRecords(synth, *report, RiskyClass::kUniqueInOriginal);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->data, synth);
  EXPECT_FALSE(m->action.changed);
  const Dataset longer = Table({testing::LabelColumn("k", {"a", "a", "b"})});
  EXPECT_TRUE(HasErrorKind(RemoveRecords(longer, *report, RiskyClass::kUniqueInOriginal).status(),
                           ErrorKind::kStaleReport));
}

TEST(RemoveRecordsTest, FixpointIterationTerminatesWithoutReplicatedUniques) {
  std::mt19937_64 gen(1234);
  const KeySpec keys{{"k0", "k1", "k2"}, ""};
  for (int trial = 0; trial < 100; ++trial) {
    Dataset synth = testing::RandomKeyTable(gen, 200, 3);
    const Dataset original = testing::RandomKeyTable(gen, 200, 3);
    int rounds = 0;
    while (true) {
      auto report = ClassifyRiskyRecords(synth, original, keys);
      ASSERT_TRUE(report.ok());
      if (report->n_replicated_unique() == 0) break;
      const size_t before = synth.row_count();
      auto m = RemoveRecords(synth, *report, RiskyClass::kReplicatedUnique);
      ASSERT_TRUE(m.ok());
      synth = m->data;
      ASSERT_LT(synth.row_count(), before);
      ASSERT_LT(++rounds, kMaxRemovalRounds);
    }
  }
}

TEST(CoarsenKeyTest, PostcodesToAreas) {
  const Dataset d = Table({testing::LabelColumn("pc", {"EH1", "EH2", "G1", "EH1"})});
  auto m = CoarsenKey(d, "pc", {{"EH1", "Edinburgh"}, {"EH2", "Edinburgh"}, {"G1", "Glasgow"}});
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(CountCategories(m->data.column(0)).size(), 2u);
}

TEST(CoarsenKeyTest, IdentityMappingAndPartialMapping) {
  const Dataset d = Table({testing::LabelColumn("pc", {"EH1", "G1"})});
  auto m = CoarsenKey(d, "pc", {{"EH1", "EH1"}, {"G1", "G1"}});
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->data, d);
  EXPECT_TRUE(HasErrorKind(CoarsenKey(d, "pc", {{"EH1", "E"}}).status(), ErrorKind::kPartialMapping));
}

Dataset MixedData() {
  return Table({testing::IntColumn("income", {12345, 987, 40000, 55, 120000, 31000, 29999, 500}),
                testing::LabelColumn("county", {"A", "B", "C", "A", "B", "A", "A", "C"})});
}

std::vector<MitigationAction> SampleTrail() {
  std::vector<MitigationAction> trail;
  MitigationAction precision{{"income"}, PrecisionParams{1000.0, std::nullopt}};
  MitigationAction coding{{"income"}, CodingParams{CodingMode::Percentile(10, 90), {1000, 40000}}};
  MitigationAction pooling{{"county"}, PoolingParams{5, "OTHER_POOLED", {"B", "C"}}};
  MitigationAction coarsen{{"county"}, CoarseningParams{{{"A", "North"}, {"OTHER_POOLED", "South"}}}};
  return {precision, coding, pooling, coarsen};
}

TEST(MitigationPropertiesTest, EveryValueActionIsIdempotent) {
  Dataset input = MixedData();
  for (const MitigationAction& a : SampleTrail()) {
    auto once = ReplayAction(input, a);
    ASSERT_TRUE(once.ok()) << MitigationKindName(a.kind()) << ": " << once.status();
    auto twice = ReplayAction(*once, a);
    ASSERT_TRUE(twice.ok()) << twice.status();
    EXPECT_EQ(*twice, *once) << MitigationKindName(a.kind());
    input = *once;
  }
}

TEST(MitigationPropertiesTest, ValueActionsCommuteWithRowOrder) {
  std::vector<size_t> perm(MixedData().row_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 gen(5);
  std::shuffle(perm.begin(), perm.end(), gen);
  // Replaying the whole trail exercises each action on the outputs of the
  // earlier ones.
  auto after = ReplayTrail(MixedData(), SampleTrail());
  auto before = ReplayTrail(MixedData().SelectRows(perm), SampleTrail());
  ASSERT_TRUE(after.ok() && before.ok());
  EXPECT_EQ(after->SelectRows(perm), *before);
}

TEST(MitigationPropertiesTest, ReplayReproducesAppliedPipeline) {
  const Dataset start = MixedData();
  std::vector<MitigationAction> trail;
  auto a = ReducePrecision(start, "income", 1000.0);
  ASSERT_TRUE(a.ok());
  trail.push_back(a->action);
  auto b = TopBottomCode(a->data, "income", CodingMode::Percentile(10, 90));
  ASSERT_TRUE(b.ok());
  trail.push_back(b->action);
  auto c = PoolCategories(b->data, "county", CountCategories(start.column(1)), 3);
  ASSERT_TRUE(c.ok());
  trail.push_back(c->action);
  auto replayed = ReplayTrail(start, trail);
  ASSERT_TRUE(replayed.ok()) << replayed.status();
  EXPECT_EQ(*replayed, c->data);
}

TEST(MitigationPropertiesTest, PoolingAndCoarseningNeverAddKeyTuples) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = testing::RandomKeyTable(gen, 100, 2);
    auto before = CountKeyCombos(d, KeySpec{{"k0", "k1"}, ""});
    auto pooled = PoolCategories(d, "k0", CountCategories(d.column(0)), 1 + gen() % 40);
    ASSERT_TRUE(before.ok() && pooled.ok()) << pooled.status();
    auto after = CountKeyCombos(pooled->data, KeySpec{{"k0", "k1"}, ""});
    ASSERT_TRUE(after.ok());
    EXPECT_LE(after->size(), before->size());
  }
}

TEST(ApplyActionToSchemaTest, UpdatesPrecisionRangeAndCategories) {
  auto schema = InferSchema(MixedData());
  ASSERT_TRUE(schema.ok());
  for (const MitigationAction& a : SampleTrail()) ApplyActionToSchema(*schema, a);
  const ColumnSpec& income = schema->columns[0];
  EXPECT_EQ(income.unit, 1000.0);
  EXPECT_EQ(income.range, (ValueRange{1000, 40000}));
  EXPECT_EQ(schema->columns[1].categories, (std::vector<std::string>{"North", "South"}));
}

}  // namespace
}  // namespace lfsd
