// Exhaustive guard scenarios and the tier each one must receive, derived
// directly from the ValidityReport invariants.
#pragma once

#include <string>
#include <vector>

#include "advclaim/guard.hpp"
#include "fakes.hpp"

namespace guard_table {

enum class Outcome { Flip, NoFlip, Refusal };

struct Row {
  Outcome outcome;
  double similarity;
  advclaim::NliLabel forward;
  advclaim::NliLabel backward;
  bool relevant;
};

inline constexpr double kStrict = 0.85;
inline constexpr double kRelaxed = 0.7;
inline constexpr double kSimBands[] = {0.90, 0.85, 0.75, 0.70, 0.60};

inline advclaim::ValidityTier expected_tier(const Row& r) {
  using advclaim::NliLabel;
  using advclaim::ValidityTier;
  if (r.outcome != Outcome::Flip) return ValidityTier::Invalid;
  const bool both_entail = r.forward == NliLabel::Entailment && r.backward == NliLabel::Entailment;
  const bool any_contradiction = r.forward == NliLabel::Contradiction || r.backward == NliLabel::Contradiction;
  if (r.similarity >= kStrict && both_entail && r.relevant) return ValidityTier::Strict;
  if (r.similarity >= kRelaxed && !any_contradiction && r.relevant) return ValidityTier::Relaxed;
  return ValidityTier::Invalid;
}

inline std::vector<Row> all_rows() {
  using advclaim::NliLabel;
  const NliLabel labels[] = {NliLabel::Entailment, NliLabel::Neutral, NliLabel::Contradiction};
  std::vector<Row> rows;
  for (auto outcome : {Outcome::Flip, Outcome::NoFlip, Outcome::Refusal}) {
    for (double sim : kSimBands) {
      for (auto fwd : labels) {
        for (auto bwd : labels) {
          for (bool rel : {true, false}) rows.push_back({outcome, sim, fwd, bwd, rel});
        }
      }
    }
  }
  return rows;
}

inline std::string describe(const Row& r) {
  const char* o = r.outcome == Outcome::Flip ? "flip" : r.outcome == Outcome::NoFlip ? "no-flip" : "refusal";
  return std::string(o) + " sim=" + std::to_string(r.similarity) + " nli=" +
         std::string(advclaim::to_string(r.forward)) + "/" + std::string(advclaim::to_string(r.backward)) +
         " relevant=" + (r.relevant ? "yes" : "no");
}

// Runs one row through check_validity with a stubbed judge (benign claim is true).
inline advclaim::ValidityReport evaluate(const Row& r, advclaim::ValidityTier requested) {
  advclaim::Claim benign{"c", "benign claim", advclaim::GoldLabel::TrueClaim, {}};
  advclaim::VerificationResult adv;
  adv.verdict = r.outcome == Outcome::Flip     ? advclaim::Verdict::FalseClaim
                : r.outcome == Outcome::NoFlip ? advclaim::Verdict::TrueClaim
                                               : advclaim::Verdict::Refusal;
  adv.justification = "justification";
  fakes::StubJudge judge;
  judge.benign = benign.text;
  judge.sim = r.similarity;
  judge.forward = r.forward;
  judge.backward = r.backward;
  judge.is_relevant = r.relevant;
  advclaim::GuardConfig config;
  config.strict_sim_threshold = kStrict;
  config.relaxed_sim_threshold = kRelaxed;
  return advclaim::check_validity(benign, "adversarial claim", adv, requested, config, judge);
}

// Invariants every report must satisfy regardless of which row produced it.
inline bool report_consistent(const advclaim::ValidityReport& rep) {
  using advclaim::NliLabel;
  using advclaim::ValidityTier;
  if ((rep.tier == ValidityTier::Invalid) != !rep.reasons.empty()) return false;
  if (rep.tier == ValidityTier::Strict) {
    return rep.similarity && *rep.similarity >= kStrict && rep.nli_forward == NliLabel::Entailment &&
           rep.nli_backward == NliLabel::Entailment && rep.justification_relevant == true;
  }
  if (rep.tier == ValidityTier::Relaxed) {
    return rep.similarity && *rep.similarity >= kRelaxed && rep.nli_forward &&
           *rep.nli_forward != NliLabel::Contradiction && rep.nli_backward &&
           *rep.nli_backward != NliLabel::Contradiction && rep.justification_relevant == true;
  }
  return true;
}

}  // namespace guard_table
