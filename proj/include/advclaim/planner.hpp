#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/evaluator.hpp"
#include "advclaim/guard.hpp"
#include "advclaim/strategy.hpp"

namespace advclaim {

struct PlannerConfig {
  int budget = 10;
  std::vector<StrategyFamily> family_order = {StrategyFamily::SearchMisguidance,
                                              StrategyFamily::ReasoningDisruption,
                                              StrategyFamily::StructuralEscalation};
  /// Non-improving attempts in a row before the variant is abandoned.
  int streak_cap = 2;
  /// "Reduce drift" refinements allowed per variant after a similarity or
  /// contradiction rejection.
  int drift_retry_cap = 1;
  /// Hard cap on attempts spent in one variant.
  int variant_attempt_cap = 4;
  /// Optional starting variant; defaults to the first variant of the first family.
  std::optional<std::string> start_variant;
};

/// Throws InvalidBudget for budget < 1 and ConfigError for malformed orders/caps.
void validate(const PlannerConfig& config);

enum class PlannerAction { TerminateSuccess, TerminateBudget, RefineSame, SwitchVariant, SwitchFamily };
std::string_view to_string(PlannerAction action) noexcept;
PlannerAction planner_action_from_string(std::string_view s);

struct BestCandidate {
  std::string text;
  int iteration = 0;
  ValidityReport report;
  AttemptEvaluation evaluation;
};

struct PlannerState {
  int iteration = 0;
  int budget = 10;
  StrategyFamily current_family = StrategyFamily::SearchMisguidance;
  std::string current_variant;
  int attempts_in_variant = 0;
  int non_improving_streak = 0;
  int drift_retries_in_variant = 0;
  /// Justification-shift F1 of the previous attempt in this variant.
  std::optional<double> last_shift_f1;
  /// Abandoned variants, in abandonment order. Never revisited.
  std::vector<std::string> variants_exhausted;
  std::vector<StrategyFamily> families_tried;
  std::optional<BestCandidate> best_candidate;
};

struct PlannerDecision {
  PlannerAction action = PlannerAction::RefineSame;
  const StrategyDescriptor* next_strategy = nullptr;  // null for terminations
  std::string guidance;
};

PlannerState init_state(const PlannerConfig& config);

/// Current strategy of a state.
const StrategyDescriptor& current_strategy(const PlannerState& state);

/// Pure decision table:
///   1. flip + Strict                         -> TerminateSuccess
///   2. flip + Relaxed                        -> keep best candidate (by similarity), continue
///   3. Invalid on similarity/contradiction   -> RefineSame "reduce drift" (drift_retry_cap per variant)
///   4. streak or attempt cap reached         -> SwitchVariant, else SwitchFamily, else RefineSame
///   5. otherwise                             -> RefineSame with category guidance
/// The returned state has iteration incremented. Throws InvalidArgument
/// when called with iteration >= budget.
std::pair<PlannerDecision, PlannerState> decide(const PlannerState& state, const PlannerConfig& config,
                                                std::string_view candidate_text,
                                                const AttemptEvaluation& evaluation,
                                                const ValidityReport& guard);

inline constexpr std::string_view kDriftGuidance =
    "reduce semantic drift; keep the factual core unchanged";

}  // namespace advclaim
