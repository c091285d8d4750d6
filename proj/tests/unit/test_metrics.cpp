#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "advclaim/error.hpp"
#include "advclaim/metrics.hpp"
#include "advclaim/review.hpp"

using namespace advclaim;

namespace {

AttackTrace trace_with(FinalStatus status, std::string id = "t") {
  AttackTrace t;
  t.claim = {std::move(id), "claim text", GoldLabel::TrueClaim, {}};
  t.benign.verdict = Verdict::TrueClaim;
  t.final_status = status;
  return t;
}

std::vector<AttackTrace> traces_of(std::initializer_list<std::pair<FinalStatus, int>> spec) {
  std::vector<AttackTrace> out;
  for (auto [status, count] : spec) {
    for (int i = 0; i < count; ++i) out.push_back(trace_with(status, "t" + std::to_string(out.size())));
  }
  return out;
}

}  // namespace

TEST(Classification, HandComputedConfusionMatrix) {
  std::vector<Verdict> pred;
  std::vector<GoldLabel> gold;
  auto add = [&](Verdict p, GoldLabel g, int n) {
    for (int i = 0; i < n; ++i) {
      pred.push_back(p);
      gold.push_back(g);
    }
  };
  add(Verdict::TrueClaim, GoldLabel::TrueClaim, 3);
  add(Verdict::TrueClaim, GoldLabel::FalseClaim, 1);
  add(Verdict::FalseClaim, GoldLabel::TrueClaim, 2);
  add(Verdict::FalseClaim, GoldLabel::FalseClaim, 4);
  const auto m = classification_metrics(pred, gold, RefusalPolicy::Exclude);
  EXPECT_EQ(m.tp, 3u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_EQ(m.fn, 2u);
  EXPECT_EQ(m.tn, 4u);
  EXPECT_EQ(m.accuracy, 7.0 / 10.0);
  EXPECT_EQ(m.precision, 3.0 / 4.0);
  EXPECT_EQ(m.recall, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
}

TEST(Classification, PerfectAndDegenerate) {
  const std::vector<Verdict> pred = {Verdict::TrueClaim, Verdict::FalseClaim};
  const std::vector<GoldLabel> gold = {GoldLabel::TrueClaim, GoldLabel::FalseClaim};
  const auto m = classification_metrics(pred, gold, RefusalPolicy::Exclude);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.f1, 1.0);

  const std::vector<Verdict> none = {Verdict::FalseClaim};
  const std::vector<GoldLabel> neg = {GoldLabel::FalseClaim};
  const auto z = classification_metrics(none, neg, RefusalPolicy::Exclude);
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_EQ(z.recall, 0.0);
  EXPECT_EQ(z.f1, 0.0);
}

TEST(Classification, LengthMismatch) {
  const std::vector<Verdict> pred = {Verdict::TrueClaim};
  const std::vector<GoldLabel> gold = {};
  try {
    classification_metrics(pred, gold, RefusalPolicy::Exclude);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(Classification, RefusalPolicies) {
  const std::vector<Verdict> pred = {Verdict::Refusal, Verdict::TrueClaim, Verdict::Refusal};
  const std::vector<GoldLabel> gold = {GoldLabel::TrueClaim, GoldLabel::TrueClaim, GoldLabel::FalseClaim};
  const auto ex = classification_metrics(pred, gold, RefusalPolicy::Exclude);
  EXPECT_EQ(ex.refusals_excluded, 2u);
  EXPECT_EQ(ex.tp, 1u);
  EXPECT_EQ(ex.accuracy, 1.0);
  const auto err = classification_metrics(pred, gold, RefusalPolicy::CountAsError);
  EXPECT_EQ(err.refusals_excluded, 0u);
  EXPECT_EQ(err.tp, 1u);
  EXPECT_EQ(err.fn, 1u);
  EXPECT_EQ(err.fp, 1u);
  EXPECT_EQ(err.accuracy, 1.0 / 3.0);
}

TEST(Asr, RatioDefinitions) {
  const auto hundred = traces_of({{FinalStatus::SuccessStrict, 36}, {FinalStatus::Failure, 64}});
  EXPECT_EQ(compute_asr(hundred, TierPolicy::StrictOnly).rate, 0.36);
  const auto ten = traces_of({{FinalStatus::SuccessStrict, 2}, {FinalStatus::SuccessRelaxed, 1}, {FinalStatus::Failure, 7}});
  EXPECT_EQ(compute_asr(ten, TierPolicy::StrictOrRelaxed).rate, 0.3);
  EXPECT_EQ(compute_asr(ten, TierPolicy::StrictOnly).rate, 0.2);
  const auto with_skips = traces_of({{FinalStatus::SuccessStrict, 1}, {FinalStatus::Failure, 1},
                                     {FinalStatus::SkippedBenignError, 3}, {FinalStatus::SkippedBenignRefusal, 1}});
  const auto r = compute_asr(with_skips, TierPolicy::StrictOnly);
  EXPECT_EQ(r.eligible, 2u);
  EXPECT_EQ(r.successes, 1u);
  EXPECT_EQ(r.rate, 0.5);
}

TEST(Asr, NothingEligibleIsEmptyCampaign) {
  try {
    compute_asr(traces_of({{FinalStatus::SkippedBenignError, 2}}), TierPolicy::StrictOnly);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyCampaign);
  }
  EXPECT_THROW(compute_asr(std::vector<AttackTrace>{}, TierPolicy::StrictOnly), Error);
}

TEST(Asr, StrictOnlyNeverExceedsStrictOrRelaxed) {
  std::mt19937 rng(3);
  const FinalStatus all[] = {FinalStatus::SuccessStrict, FinalStatus::SuccessRelaxed, FinalStatus::Failure,
                             FinalStatus::SkippedBenignError, FinalStatus::SkippedBenignRefusal};
  for (int i = 0; i < 500; ++i) {
    std::vector<AttackTrace> traces;
    for (int k = 0, n = 1 + static_cast<int>(rng() % 20); k < n; ++k) traces.push_back(trace_with(all[rng() % 5]));
    traces.push_back(trace_with(FinalStatus::Failure));
    EXPECT_LE(compute_asr(traces, TierPolicy::StrictOnly).rate, compute_asr(traces, TierPolicy::StrictOrRelaxed).rate);
  }
}

TEST(Report, AccountingIdentityAndBothDenominators) {
  auto traces = traces_of({{FinalStatus::SuccessStrict, 2}, {FinalStatus::SuccessRelaxed, 1}, {FinalStatus::Failure, 3},
                           {FinalStatus::SkippedBenignError, 1}, {FinalStatus::SkippedBenignRefusal, 1}});
  const Json report = build_report(traces, ReportOptions{}, RequestCounters{5, 6, 7});
  std::size_t total = 0;
  for (const auto& [status, count] : report.at("status_counts").items()) total += count.get<std::size_t>();
  EXPECT_EQ(total, traces.size());
  EXPECT_EQ(report.at("claims"), traces.size());
  EXPECT_EQ(report.at("asr").at("strict_or_relaxed").at("eligible"), 6);
  EXPECT_EQ(report.at("asr").at("over_all_claims").at("denominator"), 8);
  EXPECT_EQ(report.at("requests").at("judge"), 7);
  EXPECT_EQ(report.at("review_queue_size"), 1);
}

TEST(Report, AdversarialSettingUsesAcceptedText) {
  auto success = trace_with(FinalStatus::SuccessRelaxed);
  AttackAttempt a;
  a.iteration = 1;
  a.victim_result.verdict = Verdict::FalseClaim;
  success.attempts.push_back(a);
  success.final_iteration = 1;
  EXPECT_EQ(adversarial_setting_verdict(success, TierPolicy::StrictOrRelaxed), Verdict::FalseClaim);
  EXPECT_EQ(adversarial_setting_verdict(success, TierPolicy::StrictOnly), Verdict::TrueClaim);
  EXPECT_EQ(success_round(success, TierPolicy::StrictOrRelaxed), 1);
  EXPECT_EQ(success_round(success, TierPolicy::StrictOnly), std::nullopt);
}

namespace {

AttackTrace relaxed_trace(const std::string& id) {
  auto t = trace_with(FinalStatus::SuccessRelaxed, id);
  t.benign.justification = "benign reasoning for " + id;
  AttackAttempt a;
  a.iteration = 2;
  a.adversarial_text = "adversarial " + id;
  a.victim_result.verdict = Verdict::FalseClaim;
  a.victim_result.justification = "adversarial reasoning";
  a.validity.tier = ValidityTier::Relaxed;
  a.validity.similarity = 0.75;
  a.validity.nli_forward = NliLabel::Neutral;
  a.validity.nli_backward = NliLabel::Entailment;
  a.validity.justification_relevant = true;
  t.attempts.push_back(a);
  t.final_adversarial_text = a.adversarial_text;
  t.final_iteration = 2;
  return t;
}

}  // namespace

TEST(ReviewQueue, SelectsRelaxedSuccessesSortedById) {
  std::vector<AttackTrace> traces = {relaxed_trace("c"), trace_with(FinalStatus::SuccessStrict, "s"),
                                     relaxed_trace("a"), relaxed_trace("b"), trace_with(FinalStatus::Failure, "f")};
  const auto records = review_records(traces);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].claim_id, "a");
  EXPECT_EQ(records[1].claim_id, "b");
  EXPECT_EQ(records[2].claim_id, "c");
  EXPECT_EQ(records[0].adversarial_text, "adversarial a");
  EXPECT_EQ(records[0].similarity, 0.75);
  EXPECT_EQ(records[0].nli_forward, "neutral");
  EXPECT_TRUE(records[0].reviewer_decision.empty());
}

TEST(ReviewQueue, StrictOnlyCampaignGivesHeaderOnly) {
  const std::vector<AttackTrace> traces = {trace_with(FinalStatus::SuccessStrict, "s")};
  const std::string text = export_review_queue(traces);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find(kReviewFormat), std::string::npos);
  EXPECT_TRUE(import_review_queue(text).empty());
}

TEST(ReviewQueue, RoundTrip) {
  std::vector<AttackTrace> traces = {relaxed_trace("x"), relaxed_trace("y")};
  auto records = review_records(traces);
  records[1].reviewer_decision = "confirm";
  records[1].reviewer_notes = "meaning preserved";
  const auto text = render_review_queue(records);
  EXPECT_EQ(import_review_queue(text), records);
  EXPECT_EQ(render_review_queue(import_review_queue(text)), text);
}

TEST(ReviewQueue, ForeignHeaderIsRejected) {
  EXPECT_THROW(import_review_queue("{\"format\":\"other\"}\n"), Error);
  EXPECT_THROW(import_review_queue(""), Error);
}
