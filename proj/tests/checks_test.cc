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

#include "lfsd/checks.h"

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lfsd/schema.h"
#include "lfsd/sdc.h"
#include "lfsd/status.h"
#include "lfsd/synthesis.h"
#include "test_util.h"

namespace lfsd {
namespace {

using testing::Col;
using testing::L;
using testing::N;
using testing::NA;
using testing::Table;

TableSchema LabelledSchema() {
  TableSchema s;
  s.is_synthetic = true;
  s.columns.push_back(ColumnSpec{.name = "synth_age", .kind = ColumnKind::kNumeric});
  s.columns.push_back(ColumnSpec{.name = "synth_sex"});
  return s;
}

TEST(LabellingTest, FullyLabelledReleasePasses) {
  const CheckOutcome out =
      CheckLabelling("out/clinic_synthetic.csv", LabelledSchema(), true, ReleasePolicy{});
  EXPECT_TRUE(out.passed());
  EXPECT_TRUE(out.findings().empty());
}

TEST(LabellingTest, EachMissingLabelIsItsOwnFinding) {
  TableSchema s = LabelledSchema();
  s.is_synthetic = false;
  s.columns[1].name = "sex";
  const CheckOutcome out = CheckLabelling("release.csv", s, false, ReleasePolicy{});
  EXPECT_FALSE(out.passed());
  for (const char* code : {"LABEL_NOT_SYNTHETIC", "LABEL_BANNER", "LABEL_FILENAME", "LABEL_AFFIX"}) {
    EXPECT_TRUE(out.HasCode(code)) << code;
  }
  EXPECT_EQ(out.findings().size(), 4u);
}

TEST(LabellingTest, FilenameTokenIsCaseInsensitiveAndSuffixAffixWorks) {
  ReleasePolicy policy;
  policy.required_affix = AffixRule::Suffix("_synth");
  TableSchema s;
  s.is_synthetic = true;
  s.columns.push_back(ColumnSpec{.name = "age_synth"});
  EXPECT_TRUE(CheckLabelling("Clinic_SYNTHETIC.csv", s, true, policy).passed());
}

// 498 copies of one key plus two keys that are unique in both tables.
struct ReplicatedFixture {
  Dataset synth;
  Dataset original;
};

ReplicatedFixture TwoReplicatedUniques() {
  std::vector<std::string> synth(498, "common");
  synth.push_back("u1");
  synth.push_back("u2");
  std::vector<std::string> original(10, "common");
  original.push_back("u1");
  original.push_back("u2");
  return {Table({testing::LabelColumn("synth_id", synth)}),
          Table({testing::LabelColumn("id", original)})};
}

TEST(DisclosureTest, TwoReplicatedUniquesInFiveHundredFail) {
  const ReplicatedFixture f = TwoReplicatedUniques();
  auto schema = InferSchema(f.original);
  ASSERT_TRUE(schema.ok());
  ReleasePolicy policy;
  policy.rarity_threshold = 1;
  auto r = CheckDisclosure(f.synth, &f.original, *schema, KeySpec{{"id"}, ""}, {}, policy);
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_TRUE(r->risk.has_value());
  EXPECT_DOUBLE_EQ(r->risk->replicated_unique_proportion(), 2.0 / 500.0);
  EXPECT_FALSE(r->outcome.passed());
  EXPECT_TRUE(r->outcome.HasCode("DISC_REPLICATED_UNIQUES"));
  // 0.4% is under the default 1% unique-in-original bound.
  for (const Finding& f : r->outcome.findings()) {
    if (f.code == "DISC_UNIQUES_IN_ORIGINAL") EXPECT_EQ(f.severity, Severity::kInfo);
  }
}

TEST(DisclosureTest, RelaxedBoundAdmitsTheSameRelease) {
  const ReplicatedFixture f = TwoReplicatedUniques();
  auto schema = InferSchema(f.original);
  ReleasePolicy policy;
  policy.rarity_threshold = 1;
  policy.max_replicated_unique_proportion = 0.005;
  auto r = CheckDisclosure(f.synth, &f.original, *schema, KeySpec{{"id"}, ""}, {}, policy);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->outcome.passed());
}

TEST(DisclosureTest, GatingOnReplicatedIgnoresUniquesInOriginal) {
  // One synthetic unique whose key occurs three times in the original.
  const Dataset synth = Table({testing::LabelColumn("synth_id", {"a", "a", "b"})});
  const Dataset original = Table({testing::LabelColumn("id", {"a", "b", "b", "b"})});
  auto schema = InferSchema(original);
  ReleasePolicy policy;
  policy.rarity_threshold = 1;
  auto gated = CheckDisclosure(synth, &original, *schema, KeySpec{{"id"}, ""}, {}, policy);
  ASSERT_TRUE(gated.ok());
  EXPECT_EQ(gated->risk->n_replicated_unique(), 0u);
  EXPECT_EQ(gated->risk->n_unique_in_original(), 1u);
  EXPECT_FALSE(gated->outcome.passed());

  policy.gating_class = RiskyClass::kReplicatedUnique;
  auto relaxed = CheckDisclosure(synth, &original, *schema, KeySpec{{"id"}, ""}, {}, policy);
  ASSERT_TRUE(relaxed.ok());
  EXPECT_TRUE(relaxed->outcome.passed());
  EXPECT_TRUE(relaxed->outcome.HasCode("DISC_UNIQUES_IN_ORIGINAL"));
}

TEST(DisclosureTest, ReleasedRareValueFails) {
  std::vector<std::string> county(20, "Fife");
  for (int i = 0; i < 3; ++i) county.push_back("Shetland");
  for (int i = 0; i < 2; ++i) county.push_back("Orkney");
  const Dataset original = Table({testing::LabelColumn("county", county)});
  const Dataset synth = Table({testing::LabelColumn("synth_county", {"Fife", "Shetland"})});
  auto schema = InferSchema(original);
  auto r = CheckDisclosure(synth, &original, *schema, KeySpec{}, {}, ReleasePolicy{});
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->outcome.HasCode("DISC_SINGLETON_VALUE"));
  EXPECT_TRUE(r->outcome.HasCode("DISC_KEYS_NOT_EVALUATED"));
  EXPECT_FALSE(r->outcome.passed());

  // Pooling the two rare labels gives a group of five, which is not rare.
  auto pooled = PoolCategories(synth, "synth_county", CountCategories(original.column(0)));
  ASSERT_TRUE(pooled.ok());
  const std::vector<MitigationAction> trail = {pooled->action};
  auto after = CheckDisclosure(pooled->data, &original, *schema, KeySpec{}, trail, ReleasePolicy{});
  ASSERT_TRUE(after.ok()) << after.status();
  EXPECT_FALSE(after->outcome.HasCode("DISC_SINGLETON_VALUE"));
}

TEST(DisclosureTest, MetadataOnlyWarnsWithoutFailing) {
  TableSchema s;
  s.provenance = Provenance::kAuthoredMetadata;
  ColumnSpec age{.name = "age", .kind = ColumnKind::kNumeric};
  age.range = ValueRange{18, 95};
  s.columns.push_back(age);
  const Dataset synth = Table({testing::IntColumn("synth_age", {20, 30})});
  auto r = CheckDisclosure(synth, nullptr, s, KeySpec{{"age"}, ""}, {}, ReleasePolicy{});
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->outcome.passed());
  EXPECT_FALSE(r->risk.has_value());
  EXPECT_TRUE(r->outcome.HasCode("DISC_KEYS_NOT_EVALUATED"));
  EXPECT_TRUE(r->outcome.HasCode("DISC_METADATA_RANGE"));
}

TEST(DisclosureTest, InvalidPolicyIsRejected) {
  ReleasePolicy policy;
  policy.max_replicated_unique_proportion = 0.5;
  const Dataset d = Table({testing::LabelColumn("a", {"x"})});
  EXPECT_TRUE(HasErrorKind(CheckDisclosure(d, &d, {}, KeySpec{}, {}, policy).status(),
                           ErrorKind::kConfigError));
}

Dataset Original() {
  return Table({testing::IntColumn("income", {12345, 987, 40200, 51000, 8800, 23456}),
                Col("county", {L("A"), L("A"), L("B"), L("A"), L("C"), NA()})});
}

CheckOutcome Structure(const Dataset& synth, const std::vector<MitigationAction>& trail = {}) {
  auto original_schema = InferSchema(Original());
  auto synth_schema = InferSchema(synth);
  EXPECT_TRUE(original_schema.ok() && synth_schema.ok());
  return CheckStructure(*original_schema, *synth_schema, synth, trail, ReleasePolicy{});
}

Dataset Synth(std::vector<int> income, std::vector<Cell> county) {
  return Table({testing::IntColumn("synth_income", income), Col("synth_county", county)});
}

TEST(StructureTest, FaithfulCopyOfStructurePasses) {
  const CheckOutcome out =
      Structure(Synth({501, 23000, 7, 9}, {L("B"), NA(), L("C"), L("A")}));
  for (const Finding& f : out.findings()) EXPECT_NE(f.severity, Severity::kFail) << f.code << ": " << f.message;
}

TEST(StructureTest, MissingnessMustAgree) {
  const CheckOutcome out = Structure(Synth({501, 23000, 7}, {L("A"), L("B"), L("C")}));
  EXPECT_FALSE(out.passed());
  EXPECT_TRUE(out.HasCode("MISSINGNESS_DISAGREE"));
}

TEST(StructureTest, PoolingIsDocumentedOnlyWhenInTheTrail) {
  const Dataset synth = Synth({501, 23000, 7, 4}, {L("A"), NA(), L("B"), L("C")});
  auto pooled =
      PoolCategories(synth, "synth_county", CountCategories(Original().column(1)), 2);
  ASSERT_TRUE(pooled.ok());
  const CheckOutcome explained = Structure(pooled->data, {pooled->action});
  EXPECT_TRUE(explained.passed());
  EXPECT_TRUE(explained.HasCode("STRUCT_DOCUMENTED_DIFFERENCE"));
  const CheckOutcome unexplained = Structure(pooled->data);
  EXPECT_FALSE(unexplained.passed());
  EXPECT_TRUE(unexplained.HasCode("STRUCT_CATEGORY_MISMATCH"));
}

TEST(StructureTest, PrecisionReductionNeedsTheTrail) {
  const Dataset synth = Synth({501, 23000, 7, 4}, {L("A"), NA(), L("B"), L("C")});
  auto rounded = ReducePrecision(synth, "synth_income", 1000.0);
  ASSERT_TRUE(rounded.ok());
  // The released schema records the rounding unit.
  auto synth_schema = InferSchema(rounded->data);
  ASSERT_TRUE(synth_schema.ok());
  ApplyActionToSchema(*synth_schema, rounded->action);
  auto original_schema = InferSchema(Original());
  const std::vector<MitigationAction> trail = {rounded->action};
  const CheckOutcome documented =
      CheckStructure(*original_schema, *synth_schema, rounded->data, trail, ReleasePolicy{});
  EXPECT_TRUE(documented.passed());
  EXPECT_TRUE(documented.HasCode("STRUCT_DOCUMENTED_DIFFERENCE"));
  const CheckOutcome bare =
      CheckStructure(*original_schema, *synth_schema, rounded->data, {}, ReleasePolicy{});
  EXPECT_TRUE(bare.HasCode("STRUCT_PRECISION_MISMATCH"));
}

TEST(StructureTest, OmittedColumnIsPermittedButUnknownIsNot) {
  const Dataset omitted = Table({testing::IntColumn("synth_income", {1, 2})});
  const CheckOutcome a = Structure(omitted);
  EXPECT_TRUE(a.passed());
  EXPECT_TRUE(a.HasCode("STRUCT_COLUMN_OMITTED"));
  const Dataset extra = Table({testing::IntColumn("synth_income", {1, 2}),
                               Col("synth_county", {L("A"), NA()}),
                               testing::IntColumn("synth_bmi", {20, 30})});
  EXPECT_TRUE(Structure(extra).HasCode("STRUCT_UNKNOWN_COLUMN"));
}

TEST(StructureTest, KindChangeFails) {
  const Dataset synth = Table({Col("synth_income", {L("high"), L("low")}),
                               Col("synth_county", {L("A"), NA()})});
  EXPECT_TRUE(Structure(synth).HasCode("STRUCT_KIND_MISMATCH"));
}

SchemaDiff SampleDiff() {
  auto o = InferSchema(Original());
  auto s = InferSchema(Table({testing::IntColumn("synth_income", {1, 2})}));
  auto d = DiffSchemas(*o, *s, AffixRule{});
  EXPECT_TRUE(d.ok());
  return *d;
}

SynthesisConfig MarginsConfig() {
  SynthesisConfig c;
  c.method = SynthesisMethod::kFromMargins;
  c.n_synth = 10;
  return c;
}

TEST(DocumentationTest, MarginsStatementLimitsToOneVariable) {
  const std::string s = ExpectationStatement(SynthesisMethod::kFromMargins);
  EXPECT_NE(s.find("one variable at a time"), std::string::npos);
  const std::string m = ExpectationStatement(SynthesisMethod::kFromMetadata);
  EXPECT_NE(m.find("no tables"), std::string::npos);
}

TEST(DocumentationTest, CompleteBundlePasses) {
  const SchemaDiff diff = SampleDiff();
  auto b = GenerateDocumentation("meta/clinic.json", MarginsConfig(), diff, {}, ReleasePolicy{});
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->method, SynthesisMethod::kFromMargins);
  EXPECT_TRUE(CheckDocumentation(*b, diff).passed());
}

TEST(DocumentationTest, MissingReferenceIsAnError) {
  EXPECT_TRUE(HasErrorKind(
      GenerateDocumentation("", MarginsConfig(), SampleDiff(), {}, ReleasePolicy{}).status(),
      ErrorKind::kMissingOriginalReference));
}

TEST(DocumentationTest, TamperedBundleFails) {
  const SchemaDiff diff = SampleDiff();
  auto b = GenerateDocumentation("meta/clinic.json", MarginsConfig(), diff, {}, ReleasePolicy{});
  ASSERT_TRUE(b.ok());
  DocBundle wrong_statement = *b;
  wrong_statement.expectation_statement = "Everything is preserved.";
  EXPECT_TRUE(CheckDocumentation(wrong_statement, diff).HasCode("DOC_EXPECTATION_MISMATCH"));
  DocBundle short_diff = *b;
  short_diff.diff.columns.clear();
  EXPECT_TRUE(CheckDocumentation(short_diff, diff).HasCode("DOC_DIFF_INCOMPLETE"));
  DocBundle no_ref = *b;
  no_ref.original_metadata_reference.clear();
  EXPECT_TRUE(CheckDocumentation(no_ref, diff).HasCode("DOC_MISSING_REFERENCE"));
}

TEST(DocumentationTest, PolicyOverridesAreListed) {
  ReleasePolicy policy;
  policy.max_unique_in_original_proportion = 0.05;
  auto b = GenerateDocumentation("m.json", MarginsConfig(), SampleDiff(), {}, policy);
  ASSERT_TRUE(b.ok());
  ASSERT_EQ(b->policy_overrides.size(), 1u);
  EXPECT_NE(b->policy_overrides[0].find("max_unique_in_original_proportion"), std::string::npos);
  const CheckOutcome out = CheckDocumentation(*b, SampleDiff());
  EXPECT_TRUE(out.passed());
  EXPECT_TRUE(out.HasCode("DOC_POLICY_OVERRIDES"));
}

TEST(CheckOutcomeTest, VerdictIsFailIffAnyFailFinding) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 500; ++trial) {
    CheckOutcome out(CheckId::kStructure);
    bool any_fail = false;
    const int n = static_cast<int>(gen() % 6);
    for (int i = 0; i < n; ++i) {
      const auto s = static_cast<Severity>(gen() % 3);
      any_fail |= s == Severity::kFail;
      out.Add(s, "X", "m");
    }
    EXPECT_EQ(out.verdict() == Verdict::kFail, any_fail);
  }
}

}  // namespace
}  // namespace lfsd
