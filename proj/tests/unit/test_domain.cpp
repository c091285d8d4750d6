#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "advclaim/domain.hpp"
#include "advclaim/error.hpp"

using namespace advclaim;

namespace {

const std::filesystem::path kFixtures = ADVCLAIM_FIXTURE_DIR;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an advclaim::Error";
  return ErrorKind::IoError;
}

}  // namespace

TEST(MapLabel, Vocabulary) {
  EXPECT_EQ(map_label("Supported"), NormalizedLabel::TrueClaim);
  EXPECT_EQ(map_label("true"), NormalizedLabel::TrueClaim);
  EXPECT_EQ(map_label(" REAL "), NormalizedLabel::TrueClaim);
  EXPECT_EQ(map_label("refuted"), NormalizedLabel::FalseClaim);
  EXPECT_EQ(map_label("False"), NormalizedLabel::FalseClaim);
  EXPECT_EQ(map_label("fake"), NormalizedLabel::FalseClaim);
  EXPECT_EQ(map_label("NEI"), NormalizedLabel::NotEnoughInfo);
  EXPECT_EQ(map_label("Not Enough Information"), NormalizedLabel::NotEnoughInfo);
}

TEST(MapLabel, UnknownLabelIsAnError) {
  EXPECT_EQ(kind_of([] { map_label("mostly-true"); }), ErrorKind::UnknownLabel);
  EXPECT_EQ(kind_of([] { map_label(""); }), ErrorKind::UnknownLabel);
}

TEST(LoadDataset, FiltersNeiAndPreservesOrder) {
  const std::string jsonl =
      R"({"id":"a","claim":"one","label":"supported"})"
      "\n"
      R"({"id":"b","claim":"two","label":"nei"})"
      "\n"
      R"({"id":"c","claim":"three","label":"refuted"})"
      "\n"
      R"({"id":"d","claim":"four","label":"true"})"
      "\n"
      R"({"id":"e","claim":"five","label":"fake"})"
      "\n";
  const ClaimSet set = load_dataset_from_string(jsonl, true);
  ASSERT_EQ(set.size(), 4u);
  EXPECT_EQ(set.claims[0].id, "a");
  EXPECT_EQ(set.claims[1].id, "c");
  EXPECT_EQ(set.claims[2].id, "d");
  EXPECT_EQ(set.claims[3].id, "e");
  EXPECT_EQ(set.positives, 2u);
  EXPECT_EQ(set.negatives, 2u);
  EXPECT_EQ(set.provenance.nei_removed, 1u);
}

TEST(LoadDataset, NeiWithoutFilterIsRejected) {
  EXPECT_EQ(kind_of([] { load_dataset_from_string(R"({"claim":"x","label":"nei"})", false); }),
            ErrorKind::UnknownLabel);
}

TEST(LoadDataset, MissingLabelIsMissingField) {
  EXPECT_EQ(kind_of([] { load_dataset_from_string(R"({"id":"a","claim":"x"})", true); }),
            ErrorKind::MissingField);
  EXPECT_EQ(kind_of([] { load_dataset_from_string(R"({"id":"a","label":"true"})", true); }),
            ErrorKind::MissingField);
}

TEST(LoadDataset, MalformedLineReportsLineNumber) {
  const std::string jsonl = R"({"claim":"ok","label":"true"})"
                            "\n\n{not json\n";
  try {
    load_dataset_from_string(jsonl, true);
    FAIL() << "expected MalformedRecord";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadDataset, EmptyAfterFilteringIsEmptyDataset) {
  EXPECT_EQ(kind_of([] { load_dataset_from_string(R"({"claim":"x","label":"nei"})", true); }),
            ErrorKind::EmptyDataset);
  EXPECT_EQ(kind_of([] { load_dataset_from_string("\n\n", true); }), ErrorKind::EmptyDataset);
}

TEST(LoadDataset, SynthesizesZeroPaddedIds) {
  const ClaimSet set = load_dataset_from_string(
      R"({"claim":"x","label":"true"})"
      "\n"
      R"({"claim":"y","label":"false"})",
      true);
  EXPECT_EQ(set.claims[0].id, "000001");
  EXPECT_EQ(set.claims[1].id, "000002");
}

TEST(LoadDataset, DuplicateIdsAreRejected) {
  EXPECT_EQ(kind_of([] {
              load_dataset_from_string(
                  R"({"id":"a","claim":"x","label":"true"})"
                  "\n"
                  R"({"id":"a","claim":"y","label":"false"})",
                  true);
            }),
            ErrorKind::MalformedRecord);
}

TEST(LoadDataset, MochegSampleDropsExactlyTheNeiRows) {
  const ClaimSet filtered = load_dataset(kFixtures / "mocheg_sample.jsonl", true);
  EXPECT_EQ(filtered.size(), 9u);
  EXPECT_EQ(filtered.provenance.nei_removed, 3u);
  EXPECT_EQ(filtered.positives, 4u);
  EXPECT_EQ(filtered.negatives, 5u);
  for (const auto& c : filtered.claims) {
    EXPECT_NE(c.id, "m-0003");
    EXPECT_NE(c.id, "m-0006");
    EXPECT_NE(c.id, "m-0009");
  }
}

TEST(LoadDataset, IsDeterministic) {
  const ClaimSet a = load_dataset(kFixtures / "mocheg_sample.jsonl", true);
  const ClaimSet b = load_dataset(kFixtures / "mocheg_sample.jsonl", true);
  EXPECT_EQ(a.claims, b.claims);
}

TEST(ClaimSerialization, RoundTripsByteIdentically) {
  const ClaimSet set = load_dataset(kFixtures / "mocheg_sample.jsonl", true);
  for (const auto& claim : set.claims) {
    const std::string once = to_json(claim).dump();
    const Claim back = claim_from_json(Json::parse(once));
    EXPECT_EQ(back, claim);
    EXPECT_EQ(to_json(back).dump(), once);
  }
}

TEST(Verdicts, FlipExcludesRefusal) {
  EXPECT_TRUE(is_flip(Verdict::FalseClaim, GoldLabel::TrueClaim));
  EXPECT_TRUE(is_flip(Verdict::TrueClaim, GoldLabel::FalseClaim));
  EXPECT_FALSE(is_flip(Verdict::TrueClaim, GoldLabel::TrueClaim));
  EXPECT_FALSE(is_flip(Verdict::Refusal, GoldLabel::TrueClaim));
  EXPECT_FALSE(is_flip(Verdict::Refusal, GoldLabel::FalseClaim));
}
