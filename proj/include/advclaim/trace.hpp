#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/domain.hpp"
#include "advclaim/evaluator.hpp"
#include "advclaim/guard.hpp"
#include "advclaim/json.hpp"
#include "advclaim/planner.hpp"
#include "advclaim/strategy.hpp"

namespace advclaim {

struct AttackAttempt {
  int iteration = 0;  // 1-based
  std::string strategy_variant;
  StrategyFamily strategy_family = StrategyFamily::SearchMisguidance;
  std::string adversarial_text;
  VerificationResult victim_result;
  AttemptEvaluation evaluation;
  ValidityReport validity;
  PlannerDecision decision;
};

enum class FinalStatus { SuccessStrict, SuccessRelaxed, Failure, SkippedBenignError, SkippedBenignRefusal };
std::string_view to_string(FinalStatus status) noexcept;
FinalStatus final_status_from_string(std::string_view s);

[[nodiscard]] constexpr bool is_skipped(FinalStatus s) noexcept {
  return s == FinalStatus::SkippedBenignError || s == FinalStatus::SkippedBenignRefusal;
}

struct AttackTrace {
  Claim claim;
  VerificationResult benign;
  std::vector<AttackAttempt> attempts;
  FinalStatus final_status = FinalStatus::Failure;
  std::optional<std::string> final_adversarial_text;
  /// Iteration of the attempt that produced the final text.
  std::optional<int> final_iteration;
  /// Full-rule report of the final candidate when refinement ran without the guard.
  std::optional<ValidityReport> final_validity;
  Json manifest_ref = Json::object();
  /// Set when a component failed mid-trace; the attempts are partial.
  std::optional<std::string> error;

  /// Attempt with the given 1-based iteration, or nullptr.
  [[nodiscard]] const AttackAttempt* attempt_at(int iteration) const;
};

Json to_json(const RougeScores& s);
RougeScores rouge_scores_from_json(const Json& j);
Json to_json(const ValidityReport& r);
ValidityReport validity_report_from_json(const Json& j);
Json to_json(const AttemptEvaluation& e);
AttemptEvaluation attempt_evaluation_from_json(const Json& j);
Json to_json(const PlannerDecision& d);
PlannerDecision planner_decision_from_json(const Json& j);
Json to_json(const AttackAttempt& a);
AttackAttempt attack_attempt_from_json(const Json& j);
Json to_json(const AttackTrace& t);
AttackTrace attack_trace_from_json(const Json& j);

/// One compact JSON object per line.
std::string trace_line(const AttackTrace& trace);
std::vector<AttackTrace> parse_traces(std::string_view jsonl);
std::vector<AttackTrace> load_traces(const std::string& path);

}  // namespace advclaim
