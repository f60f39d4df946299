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

#include "lfsd/fidelity.h"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lfsd/status.h"
#include "lfsd/synthesis.h"
#include "test_util.h"

namespace lfsd {
namespace {

using testing::Col;
using testing::L;
using testing::NA;
using testing::Table;

// Independence statistic computed over the full product grid, including
// cells with no joint mass.
double OracleAssociation(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  std::map<int, double> pa, pb;
  std::map<std::pair<int, int>, double> joint;
  for (size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1 / n;
    pb[b[i]] += 1 / n;
    joint[{a[i], b[i]}] += 1 / n;
  }
  double sum = 0;
  for (const auto& [x, px] : pa) {
    for (const auto& [y, py] : pb) {
      const auto it = joint.find({x, y});
      sum += std::fabs((it == joint.end() ? 0.0 : it->second) - px * py);
    }
  }
  return sum / 2;
}

Dataset LabelPair(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::string> la, lb;
  for (int x : a) la.push_back("a" + std::to_string(x));
  for (int x : b) lb.push_back("b" + std::to_string(x));
  return Table({testing::LabelColumn("x", la), testing::LabelColumn("y", lb)});
}

TEST(TvdTest, IdenticalAndDisjoint) {
  EXPECT_EQ(TotalVariationDistance({{"A", 0.3}, {"B", 0.7}}, {{"A", 0.3}, {"B", 0.7}}), 0.0);
  EXPECT_EQ(TotalVariationDistance({{"A", 1.0}}, {{"B", 1.0}}), 1.0);
  EXPECT_DOUBLE_EQ(TotalVariationDistance({{"A", 0.5}, {"B", 0.5}}, {{"A", 0.8}, {"C", 0.2}}), 0.5);
}

TEST(CompareMarginTest, ExactCopyIsZeroAndDisjointIsOne) {
  const Dataset original = Table({Col("c", {L("A"), L("B"), NA(), L("A")})});
  const Dataset copy = Table({Col("synth_c", {L("B"), L("A"), L("A"), NA()})});
  auto same = CompareMargin(original, copy, "c", std::nullopt, AffixRule{});
  ASSERT_TRUE(same.ok()) << same.status();
  EXPECT_EQ(same->value, 0.0);
  EXPECT_EQ(same->statistic, MarginStatistic::kTvdCategorical);

  const Dataset all_a = Table({testing::LabelColumn("c", {"A", "A"})});
  const Dataset all_b = Table({testing::LabelColumn("synth_c", {"B", "B", "B"})});
  auto disjoint = CompareMargin(all_a, all_b, "c", std::nullopt, AffixRule{});
  ASSERT_TRUE(disjoint.ok());
  EXPECT_EQ(disjoint->value, 1.0);
}

TEST(CompareMarginTest, NumericValuesOutsideTheOriginalRangeCount) {
  const Dataset original = Table({testing::IntColumn("x", {0, 10, 20, 30})});
  const Dataset inside = Table({testing::IntColumn("synth_x", {30, 20, 10, 0})});
  const Dataset outside = Table({testing::IntColumn("synth_x", {100, 200, 300, 400})});
  auto a = CompareMargin(original, inside, "x");
  auto b = CompareMargin(original, outside, "x");
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->statistic, MarginStatistic::kTvdBinnedNumeric);
  EXPECT_EQ(a->value, 0.0);
  EXPECT_EQ(b->value, 1.0);
}

TEST(PairwiseAssociationTest, DiagonalUniformBinaryClosedForm) {
  // Joint mass 1/2 on each diagonal cell, product mass 1/4 on all four:
  // half of (1/4 + 1/4 + 1/4 + 1/4).
  const Dataset d = LabelPair({0, 1, 0, 1}, {0, 1, 0, 1});
  auto v = PairwiseAssociation(d, "x", "y");
  ASSERT_TRUE(v.ok());
  EXPECT_DOUBLE_EQ(*v, 0.5);
}

TEST(PairwiseAssociationTest, SingleCategoryColumnIsIndependent) {
  const Dataset d = LabelPair({0, 0, 0, 0}, {0, 1, 2, 1});
  EXPECT_EQ(*PairwiseAssociation(d, "x", "y"), 0.0);
}

TEST(PairwiseAssociationTest, UnknownColumn) {
  EXPECT_TRUE(HasErrorKind(PairwiseAssociation(LabelPair({0}, {0}), "x", "nope").status(),
                           ErrorKind::kUnknownColumn));
}

TEST(PairwiseAssociationTest, MatchesOracleAndIsSymmetric) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + gen() % 120;
    const int ka = 1 + static_cast<int>(gen() % 5);
    const int kb = 1 + static_cast<int>(gen() % 5);
    std::vector<int> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>(gen() % ka);
      // Sometimes copy a so strong association shows up too.
      b[i] = gen() % 3 == 0 ? a[i] % kb : static_cast<int>(gen() % kb);
    }
    const Dataset d = LabelPair(a, b);
    auto ab = PairwiseAssociation(d, "x", "y");
    auto ba = PairwiseAssociation(d, "y", "x");
    ASSERT_TRUE(ab.ok() && ba.ok());
    EXPECT_NEAR(*ab, OracleAssociation(a, b), 1e-12);
    EXPECT_NEAR(*ab, *ba, 1e-12);
    EXPECT_GE(*ab, 0.0);
    EXPECT_LE(*ab, 1.0);
  }
}

TEST(BuildFidelityReportTest, CoversEveryColumnAndPair) {
  const Dataset original = Table({testing::LabelColumn("a", {"x", "y", "x"}),
                                  testing::IntColumn("b", {1, 2, 3}),
                                  testing::LabelColumn("c", {"p", "p", "q"})});
  const Dataset synth = Table({testing::LabelColumn("synth_a", {"x", "x"}),
                               testing::IntColumn("synth_b", {2, 3}),
                               testing::LabelColumn("synth_c", {"q", "p"})});
  auto r = BuildFidelityReport(original, synth, AffixRule{});
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->margins.size(), 3u);
  EXPECT_EQ(r->pairs.size(), 3u);
}

// Mean per-column TVD of from_margins output over `seeds` seeds.
double MeanMarginTvd(const Dataset& original, size_t n_synth, int seeds) {
  double total = 0;
  for (int s = 0; s < seeds; ++s) {
    SynthesisConfig config;
    config.n_synth = n_synth;
    config.seed = 1000 + static_cast<uint64_t>(s);
    auto synth = SynthFromMargins(original, config);
    EXPECT_TRUE(synth.ok());
    auto m = CompareMargin(original, *synth, "c", std::nullopt, config.affix);
    EXPECT_TRUE(m.ok());
    total += m->value;
  }
  return total / seeds;
}

TEST(MarginTrendTest, ExpectedTvdFallsWithSampleSize) {
  std::vector<std::string> labels;
  for (int i = 0; i < 60; ++i) labels.push_back("A");
  for (int i = 0; i < 25; ++i) labels.push_back("B");
  for (int i = 0; i < 10; ++i) labels.push_back("C");
  for (int i = 0; i < 5; ++i) labels.push_back("D");
  const Dataset original = Table({testing::LabelColumn("c", labels)});
  const double t100 = MeanMarginTvd(original, 100, 100);
  const double t1000 = MeanMarginTvd(original, 1000, 100);
  const double t10000 = MeanMarginTvd(original, 10000, 100);
  EXPECT_GT(t100, t1000);
  EXPECT_GT(t1000, t10000);
}

}  // namespace
}  // namespace lfsd
