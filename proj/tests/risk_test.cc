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

#include "lfsd/risk.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lfsd/schema.h"
#include "lfsd/sdc.h"
#include "lfsd/status.h"
#include "test_util.h"

namespace lfsd {
namespace {

using testing::Col;
using testing::L;
using testing::N;
using testing::NA;
using testing::Table;

KeySpec Keys(std::vector<std::string> names) { return KeySpec{std::move(names), ""}; }

std::vector<std::string> KeyNames(size_t k) {
  std::vector<std::string> out;
  for (size_t i = 0; i < k; ++i) out.push_back("k" + std::to_string(i));
  return out;
}

TEST(CountKeyCombosTest, TalliesTuples) {
  const Dataset d = Table({Col("a", {L("A"), L("A"), L("B")}), Col("b", {N(1), N(1), N(2)})});
  auto counts = CountKeyCombos(d, Keys({"a", "b"}));
  ASSERT_TRUE(counts.ok());
  ASSERT_EQ(counts->size(), 2u);
  int64_t total = 0;
  for (const auto& [tuple, n] : *counts) total += n;
  EXPECT_EQ(total, 3);
  std::vector<int64_t> sizes;
  for (const auto& [tuple, n] : *counts) sizes.push_back(n);
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<int64_t>{1, 2}));
}

TEST(CountKeyCombosTest, UnknownKeyIsRejected) {
  const Dataset d = Table({Col("a", {L("A")})});
  EXPECT_TRUE(HasErrorKind(CountKeyCombos(d, Keys({"zz"})).status(), ErrorKind::kUnknownKeyColumn));
  EXPECT_TRUE(HasErrorKind(CountKeyCombos(d, Keys({})).status(), ErrorKind::kUnknownKeyColumn));
}

TEST(CountKeyCombosTest, MissingIsADistinctValueAndPrecisionIsCanonical) {
  const Dataset d = Table({Col("a", {NA(), L(""), N(3.1, 1), N(3.10, 2)})});
  auto counts = CountKeyCombos(d, Keys({"a"}));
  ASSERT_TRUE(counts.ok());
  EXPECT_EQ(counts->size(), 3u);
}

TEST(CountKeyCombosTest, MatchesPairwiseOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = testing::RandomKeyTable(gen, 200, 3);
    auto counts = CountKeyCombos(d, Keys(KeyNames(3)));
    ASSERT_TRUE(counts.ok());
    // Oracle: a row's tuple count is the number of rows equal to it; the
    // number of distinct tuples is the sum over rows of 1/count.
    std::multiset<int64_t> oracle_sizes;
    std::vector<bool> seen(d.row_count(), false);
    for (size_t i = 0; i < d.row_count(); ++i) {
      if (seen[i]) continue;
      int64_t n = 0;
      for (size_t j = 0; j < d.row_count(); ++j) {
        if (testing::SameKey(d, i, d, j)) {
          seen[j] = true;
          ++n;
        }
      }
      oracle_sizes.insert(n);
    }
    std::multiset<int64_t> sizes;
    for (const auto& [tuple, n] : *counts) sizes.insert(n);
    EXPECT_EQ(sizes, oracle_sizes);
  }
}

TEST(ClassifyTest, UniqueMatchedOnceIsReplicatedUnique) {
  const Dataset synth = Table({Col("synth_age", {N(41), N(30), N(30)}),
                               Col("synth_sex", {L("F"), L("M"), L("M")})});
  const Dataset original = Table({Col("age", {N(41), N(52)}), Col("sex", {L("F"), L("F")})});
  auto r = ClassifyRiskyRecords(synth, original, Keys({"age", "sex"}));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->synth_unique_rows, (std::vector<size_t>{0}));
  EXPECT_EQ(r->replicated_unique_rows, (std::vector<size_t>{0}));
  EXPECT_EQ(r->unique_in_original_rows, (std::vector<size_t>{0}));
  EXPECT_DOUBLE_EQ(r->replicated_unique_proportion(), 1.0 / 3.0);
}

TEST(ClassifyTest, ThreeOriginalMatchesIsUniqueInOriginalOnly) {
  const Dataset synth = Table({Col("age", {N(41)}), Col("sex", {L("F")})});
  const Dataset original =
      Table({Col("age", {N(41), N(41), N(41)}), Col("sex", {L("F"), L("F"), L("F")})});
  auto r = ClassifyRiskyRecords(synth, original, Keys({"age", "sex"}));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->replicated_unique_rows.empty());
  EXPECT_EQ(r->unique_in_original_rows, (std::vector<size_t>{0}));
}

TEST(ClassifyTest, KindMismatchAfterAffixIsRejected) {
  const Dataset synth = Table({Col("synth_age", {L("forty")})});
  const Dataset original = Table({Col("age", {N(40)})});
  EXPECT_TRUE(HasErrorKind(ClassifyRiskyRecords(synth, original, Keys({"age"})).status(),
                           ErrorKind::kKeyAfterAffixMismatch));
}

TEST(ClassifyTest, ThresholdBelowOneIsRejected) {
  const Dataset d = Table({Col("a", {L("x")})});
  EXPECT_FALSE(ClassifyRiskyRecords(d, d, Keys({"a"}), 0).ok());
}

TEST(ClassifyTest, MatchesBruteForceOracle) {
  std::mt19937_64 gen(500);
  for (int trial = 0; trial < 40; ++trial) {
    const Dataset synth = testing::RandomKeyTable(gen, 500, 3);
    const Dataset original = testing::RandomKeyTable(gen, 500, 3);
    for (int64_t t : {1, 3}) {
      auto r = ClassifyRiskyRecords(synth, original, Keys(KeyNames(3)), t);
      ASSERT_TRUE(r.ok()) << r.status();
      const testing::BruteRisk b = testing::BruteForceClassify(synth, original, t);
      EXPECT_EQ(r->synth_unique_rows, b.synth_unique);
      EXPECT_EQ(r->replicated_unique_rows, b.replicated_unique);
      EXPECT_EQ(r->unique_in_original_rows, b.unique_in_original);
    }
  }
}

TEST(ClassifyTest, NestingAndMonotonicity) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t keys = 1 + gen() % 4;
    const Dataset synth = testing::RandomKeyTable(gen, 20 + gen() % 200, keys);
    const Dataset original = testing::RandomKeyTable(gen, 20 + gen() % 200, keys);
    auto r1 = ClassifyRiskyRecords(synth, original, Keys(KeyNames(keys)), 1);
    auto r3 = ClassifyRiskyRecords(synth, original, Keys(KeyNames(keys)), 3);
    ASSERT_TRUE(r1.ok() && r3.ok());
    EXPECT_TRUE(std::includes(r1->unique_in_original_rows.begin(),
                              r1->unique_in_original_rows.end(),
                              r1->replicated_unique_rows.begin(),
                              r1->replicated_unique_rows.end()));
    EXPECT_TRUE(std::includes(r1->synth_unique_rows.begin(), r1->synth_unique_rows.end(),
                              r1->unique_in_original_rows.begin(),
                              r1->unique_in_original_rows.end()));
    EXPECT_GE(r3->n_synth_unique(), r1->n_synth_unique());
    EXPECT_GE(r3->n_replicated_unique(), r1->n_replicated_unique());
    EXPECT_GE(r3->n_unique_in_original(), r1->n_unique_in_original());
  }
}

TEST(ClassifyTest, CoarseningNeverAddsSynthUniques) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset synth = testing::RandomKeyTable(gen, 150, 2);
    auto before = ClassifyRiskyRecords(synth, synth, Keys(KeyNames(2)));
    ASSERT_TRUE(before.ok());
    // A random surjection of k0's labels onto fewer labels.
    std::map<std::string, std::string> mapping;
    for (const Cell& c : synth.column(0).cells) {
      if (const auto* s = std::get_if<std::string>(&c)) {
        mapping[*s] = std::string(1, static_cast<char>('A' + gen() % 2));
      }
    }
    auto coarse = CoarsenKey(synth, "k0", mapping);
    ASSERT_TRUE(coarse.ok()) << coarse.status();
    auto after = ClassifyRiskyRecords(coarse->data, coarse->data, Keys(KeyNames(2)));
    ASSERT_TRUE(after.ok());
    EXPECT_LE(after->n_synth_unique(), before->n_synth_unique());
  }
}

TEST(SingletonTest, RareCategoryIsListed) {
  std::vector<std::string> county(20, "Fife");
  for (int i = 0; i < 3; ++i) county.push_back("Shetland");
  const Dataset d = Table({testing::LabelColumn("county", county)});
  auto schema = InferSchema(d);
  ASSERT_TRUE(schema.ok());
  const auto s = DetectSingletonValues(d, *schema, 5);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].column, "county");
  EXPECT_EQ(s[0].value, "Shetland");
  EXPECT_EQ(s[0].count, 3);
}

TEST(SingletonTest, UniqueMaximumIsARangeEndpoint) {
  std::vector<int> income;
  for (int i = 0; i < 30; ++i) income.push_back(20000 + (i % 3) * 1000);
  income.push_back(250000);
  const Dataset d = Table({testing::IntColumn("income", income)});
  auto schema = InferSchema(d);
  ASSERT_TRUE(schema.ok());
  const auto s = DetectSingletonValues(d, *schema, 5);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].value, "250000");
  EXPECT_EQ(s[0].count, 1);
  EXPECT_TRUE(s[0].is_range_endpoint);
}

TEST(SingletonTest, CommonValuesGiveNothing) {
  std::vector<std::string> v;
  for (int i = 0; i < 30; ++i) v.push_back(i % 2 ? "a" : "b");
  const Dataset d = Table({testing::LabelColumn("c", v)});
  auto schema = InferSchema(d);
  EXPECT_TRUE(DetectSingletonValues(d, *schema, 5).empty());
}

TEST(SingletonTest, MetadataRangesExposeEndpoints) {
  TableSchema s;
  ColumnSpec age{.name = "age", .kind = ColumnKind::kNumeric};
  age.range = ValueRange{18, 95};
  s.columns.push_back(age);
  const auto e = MetadataRangeExposures(s);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].value, "18");
  EXPECT_EQ(e[1].value, "95");
  EXPECT_TRUE(e[0].is_range_endpoint);
}

}  // namespace
}  // namespace lfsd
