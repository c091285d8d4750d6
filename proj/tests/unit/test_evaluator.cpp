#include <gtest/gtest.h>

#include <random>

#include "advclaim/error.hpp"
#include "advclaim/evaluator.hpp"
#include "rouge_check.hpp"

using namespace advclaim;

TEST(Rouge, Tokenizer) {
  EXPECT_EQ(rouge_tokens("  The CAT,  sat!\tdown "), (std::vector<std::string>{"the", "cat", "sat", "down"}));
  EXPECT_TRUE(rouge_tokens(" ... ").empty());
}

TEST(Rouge, DocumentedExamples) {
  const auto r1 = rouge_n("the cat sat on the mat", "the cat lay on the mat", 1);
  EXPECT_EQ(r1.precision, 5.0 / 6.0);
  EXPECT_EQ(r1.recall, 5.0 / 6.0);
  const auto rl = rouge_l("a b c d", "a c d e");
  EXPECT_EQ(rl.precision, 0.75);
  EXPECT_EQ(rl.recall, 0.75);
  EXPECT_EQ(rouge_l("", "a b").f1, 0.0);
  EXPECT_EQ(rouge_l("a b", "").f1, 0.0);
  EXPECT_EQ(rouge_n("x y z", "p q r", 1).f1, 0.0);
  EXPECT_EQ(rouge_n("x y z", "p q r", 2).f1, 0.0);
}

TEST(Rouge, IdentityAndWhitespaceInvariance) {
  for (const auto& [a, b] : rouge_check::sentence_pairs()) {
    for (int n = 1; n <= 2; ++n) {
      const auto s = rouge_n(a, a, n);
      EXPECT_EQ(s.precision, 1.0);
      EXPECT_EQ(s.recall, 1.0);
      EXPECT_EQ(s.f1, 1.0);
    }
    EXPECT_EQ(rouge_l(a, a).f1, 1.0);
    std::string spaced;
    for (char c : b) spaced += c == ' ' ? std::string("   ") : std::string(1, c);
    EXPECT_EQ(rouge_l(a, b), rouge_l(a, spaced));
    EXPECT_EQ(rouge_n(a, b, 2), rouge_n(a, spaced, 2));
  }
}

TEST(Rouge, InvalidN) { EXPECT_THROW(rouge_n("a", "a", 0), Error); }

TEST(RougeOracle, ExhaustiveSmallAlphabet) {
  const auto r = rouge_check::alphabet_sweep();
  EXPECT_GT(r.pairs, 80000u);
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}

TEST(RougeOracle, EnglishSentencePairs) {
  const auto r = rouge_check::sentence_sweep();
  EXPECT_EQ(r.pairs, 40u);
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}

namespace {

VerificationResult result(Verdict v, std::string justification, std::vector<std::string> refs) {
  VerificationResult r;
  r.verdict = v;
  r.justification = std::move(justification);
  r.evidence_refs = std::move(refs);
  return r;
}

ValidityReport report(ValidityTier tier, std::vector<std::string> reasons = {}) {
  ValidityReport r;
  r.tier = tier;
  r.reasons = std::move(reasons);
  return r;
}

}  // namespace

TEST(EvaluateAttempt, DocumentedExamples) {
  const auto benign = result(Verdict::TrueClaim, "one two three four five six seven eight nine ten", {"A"});
  const auto flipped = result(Verdict::FalseClaim, "one two zz yy xx ww vv uu tt ss", {"B"});
  auto e = evaluate_attempt(benign, flipped, GoldLabel::TrueClaim, report(ValidityTier::Strict));
  EXPECT_TRUE(e.verdict_flipped);
  EXPECT_DOUBLE_EQ(e.justification_shift.f1, 0.2);
  EXPECT_EQ(e.evidence_changed, true);
  EXPECT_EQ(e.category, AttemptCategory::EvidenceReasoningDegradation);

  const auto held = result(Verdict::TrueClaim, "one two three four five six seven eight nine zz", {"A"});
  e = evaluate_attempt(benign, held, GoldLabel::TrueClaim, report(ValidityTier::Invalid, {"no-flip"}));
  EXPECT_FALSE(e.verdict_flipped);
  EXPECT_DOUBLE_EQ(e.justification_shift.f1, 0.9);
  EXPECT_EQ(e.category, AttemptCategory::ModelResistance);

  e = evaluate_attempt(benign, flipped, GoldLabel::TrueClaim, report(ValidityTier::Invalid, {"similarity"}));
  EXPECT_EQ(e.category, AttemptCategory::SemanticInvalidation);
}

TEST(EvaluateAttempt, FlipWithSameEvidenceIsJustificationShift) {
  const auto benign = result(Verdict::TrueClaim, "alpha beta", {"A", "B"});
  const auto adv = result(Verdict::FalseClaim, "gamma delta", {"B", "A"});
  const auto e = evaluate_attempt(benign, adv, GoldLabel::TrueClaim, report(ValidityTier::Relaxed));
  EXPECT_EQ(e.evidence_changed, false);
  EXPECT_EQ(e.category, AttemptCategory::JustificationShift);
}

TEST(EvaluateAttempt, LowShiftWithoutFlipIsDegradedReasoning) {
  const auto benign = result(Verdict::TrueClaim, "alpha beta gamma delta", {"A"});
  const auto adv = result(Verdict::TrueClaim, "epsilon zeta", {"A"});
  const auto e = evaluate_attempt(benign, adv, GoldLabel::TrueClaim, report(ValidityTier::Invalid, {"no-flip"}));
  EXPECT_EQ(e.category, AttemptCategory::ReasoningDegradedNoFlip);
}

TEST(EvaluateAttempt, RefusalIsNeverAFlip) {
  const auto benign = result(Verdict::TrueClaim, "alpha", {});
  const auto adv = result(Verdict::Refusal, "", {});
  const auto e = evaluate_attempt(benign, adv, GoldLabel::TrueClaim, report(ValidityTier::Invalid, {"refusal"}));
  EXPECT_FALSE(e.verdict_flipped);
}

TEST(EvaluateAttempt, BenignRefusalIsRejected) {
  const auto benign = result(Verdict::Refusal, "", {});
  EXPECT_THROW(evaluate_attempt(benign, benign, GoldLabel::TrueClaim, report(ValidityTier::Invalid, {"refusal"})),
               Error);
}

TEST(EvaluateAttempt, CategoryIsTotalAndConsistent) {
  std::mt19937_64 rng(99);
  const char* words[] = {"alpha", "beta", "gamma", "delta", "eps"};
  const Verdict verdicts[] = {Verdict::TrueClaim, Verdict::FalseClaim, Verdict::Refusal};
  const ValidityTier tiers[] = {ValidityTier::Strict, ValidityTier::Relaxed, ValidityTier::Invalid};
  const char* invalid_reasons[] = {"no-flip", "refusal", "similarity", "entailment", "contradiction", "relevance"};
  for (int i = 0; i < 5000; ++i) {
    auto text = [&] {
      std::string s;
      for (int k = 0, n = static_cast<int>(rng() % 6); k < n; ++k) s += std::string(words[rng() % 5]) + " ";
      return s;
    };
    auto refs = [&] {
      std::vector<std::string> r;
      for (int k = 0, n = static_cast<int>(rng() % 3); k < n; ++k) r.push_back(words[rng() % 3]);
      return r;
    };
    const GoldLabel gold = rng() % 2 ? GoldLabel::TrueClaim : GoldLabel::FalseClaim;
    const auto benign = result(as_verdict(gold), text(), refs());
    const auto adv = result(verdicts[rng() % 3], text(), refs());
    const auto tier = tiers[rng() % 3];
    const auto guard = tier == ValidityTier::Invalid ? report(tier, {invalid_reasons[rng() % 6]}) : report(tier);
    const auto e = evaluate_attempt(benign, adv, gold, guard);

    EXPECT_EQ(e.verdict_flipped, is_flip(adv.verdict, gold));
    EXPECT_EQ(e.justification_shift, rouge_l(benign.justification, adv.justification));
    AttemptCategory expected;
    if (is_semantic_invalidation(guard)) {
      expected = AttemptCategory::SemanticInvalidation;
    } else if (e.verdict_flipped && e.evidence_changed == true) {
      expected = AttemptCategory::EvidenceReasoningDegradation;
    } else if (e.verdict_flipped) {
      expected = AttemptCategory::JustificationShift;
    } else if (e.justification_shift.f1 >= 0.6) {
      expected = AttemptCategory::ModelResistance;
    } else {
      expected = AttemptCategory::ReasoningDegradedNoFlip;
    }
    EXPECT_EQ(e.category, expected);
  }
}

TEST(SemanticInvalidation, OnlySemanticReasons) {
  EXPECT_TRUE(is_semantic_invalidation(report(ValidityTier::Invalid, {"similarity"})));
  EXPECT_TRUE(is_semantic_invalidation(report(ValidityTier::Invalid, {"relevance"})));
  EXPECT_FALSE(is_semantic_invalidation(report(ValidityTier::Invalid, {"no-flip"})));
  EXPECT_FALSE(is_semantic_invalidation(report(ValidityTier::Invalid, {"refusal"})));
  EXPECT_FALSE(is_semantic_invalidation(report(ValidityTier::Strict)));
}
