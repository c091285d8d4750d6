#include "advclaim/planner.hpp"

#include <algorithm>

#include "advclaim/error.hpp"

namespace advclaim {

std::string_view to_string(PlannerAction action) noexcept {
  switch (action) {
    case PlannerAction::TerminateSuccess: return "terminate_success";
    case PlannerAction::TerminateBudget: return "terminate_budget";
    case PlannerAction::RefineSame: return "refine_same";
    case PlannerAction::SwitchVariant: return "switch_variant";
    case PlannerAction::SwitchFamily: return "switch_family";
  }
  return "";
}

PlannerAction planner_action_from_string(std::string_view s) {
  for (auto a : {PlannerAction::TerminateSuccess, PlannerAction::TerminateBudget,
                 PlannerAction::RefineSame, PlannerAction::SwitchVariant, PlannerAction::SwitchFamily}) {
    if (to_string(a) == s) return a;
  }
  throw Error(ErrorKind::MalformedRecord, "unknown planner action '" + std::string(s) + "'");
}

void validate(const PlannerConfig& config) {
  if (config.budget < 1) throw Error(ErrorKind::InvalidBudget, "planner budget must be >= 1");
  if (config.family_order.empty() || config.family_order.size() > kFamilyCount) {
    throw Error(ErrorKind::ConfigError, "family order must list 1 to 3 families");
  }
  for (std::size_t i = 0; i < config.family_order.size(); ++i) {
    for (std::size_t j = i + 1; j < config.family_order.size(); ++j) {
      if (config.family_order[i] == config.family_order[j]) {
        throw Error(ErrorKind::ConfigError, "family order repeats a family");
      }
    }
  }
  if (config.streak_cap < 1 || config.drift_retry_cap < 0 || config.variant_attempt_cap < 1) {
    throw Error(ErrorKind::ConfigError, "planner caps out of range");
  }
  if (config.start_variant) {
    const auto& s = find_strategy(*config.start_variant);
    if (std::find(config.family_order.begin(), config.family_order.end(), s.family) ==
        config.family_order.end()) {
      throw Error(ErrorKind::ConfigError, "start variant's family is not in the family order");
    }
  }
}

PlannerState init_state(const PlannerConfig& config) {
  validate(config);
  PlannerState state;
  state.budget = config.budget;
  const StrategyDescriptor& start = config.start_variant
                                        ? find_strategy(*config.start_variant)
                                        : *family_variants(config.family_order.front()).front();
  state.current_family = start.family;
  state.current_variant = std::string(start.variant_id);
  state.families_tried.push_back(start.family);
  return state;
}

const StrategyDescriptor& current_strategy(const PlannerState& state) {
  return find_strategy(state.current_variant);
}

namespace {

bool abandoned(const PlannerState& s, std::string_view variant) {
  return std::find(s.variants_exhausted.begin(), s.variants_exhausted.end(), variant) !=
         s.variants_exhausted.end();
}

const StrategyDescriptor* next_variant_in_family(const PlannerState& s, StrategyFamily family) {
  for (const auto* d : family_variants(family)) {
    if (d->variant_id != s.current_variant && !abandoned(s, d->variant_id)) return d;
  }
  return nullptr;
}

void enter_variant(PlannerState& s, const StrategyDescriptor& next) {
  s.variants_exhausted.push_back(s.current_variant);
  s.current_family = next.family;
  s.current_variant = std::string(next.variant_id);
  s.attempts_in_variant = 0;
  s.non_improving_streak = 0;
  s.drift_retries_in_variant = 0;
  s.last_shift_f1.reset();
}

std::string category_guidance(const AttemptEvaluation& e, const ValidityReport& guard) {
  switch (e.category) {
    case AttemptCategory::ModelResistance:
      return "increase pressure on the targeted pipeline stage; the verdict and justification barely moved";
    case AttemptCategory::ReasoningDegradedNoFlip:
      return "the justification already shifted without flipping the verdict; push further on the same weakness";
    case AttemptCategory::JustificationShift:
    case AttemptCategory::EvidenceReasoningDegradation:
      return "the verdict flipped but only meets relaxed validity; stay closer to the original wording and meaning";
    case AttemptCategory::SemanticInvalidation:
      if (guard.has_reason(reason::kRelevance)) {
        return "keep the claim's subject explicit so the verification stays on topic";
      }
      return std::string(kDriftGuidance);
  }
  return std::string(kDriftGuidance);
}

}  // namespace

std::pair<PlannerDecision, PlannerState> decide(const PlannerState& state, const PlannerConfig& config,
                                                std::string_view candidate_text,
                                                const AttemptEvaluation& evaluation,
                                                const ValidityReport& guard) {
  if (state.iteration >= state.budget) {
    throw Error(ErrorKind::InvalidArgument, "decide called with the budget already spent");
  }
  PlannerState next = state;
  ++next.iteration;
  ++next.attempts_in_variant;
  const double f1 = evaluation.justification_shift.f1;
  const bool non_improving = !evaluation.verdict_flipped && f1 >= next.last_shift_f1.value_or(1.0);
  next.non_improving_streak = non_improving ? next.non_improving_streak + 1 : 0;
  next.last_shift_f1 = f1;

  PlannerDecision decision;

  if (evaluation.verdict_flipped && guard.tier == ValidityTier::Strict) {
    decision.action = PlannerAction::TerminateSuccess;
    return {decision, next};
  }

  if (evaluation.verdict_flipped && guard.tier == ValidityTier::Relaxed) {
    const double sim = guard.similarity.value_or(0.0);
    if (!next.best_candidate || sim > next.best_candidate->report.similarity.value_or(0.0)) {
      next.best_candidate = BestCandidate{std::string(candidate_text), next.iteration, guard, evaluation};
    }
  }

  if (guard.tier == ValidityTier::Invalid &&
      (guard.has_reason(reason::kSimilarity) || guard.has_reason(reason::kContradiction)) &&
      next.drift_retries_in_variant < config.drift_retry_cap) {
    ++next.drift_retries_in_variant;
    decision.action = PlannerAction::RefineSame;
    decision.next_strategy = &current_strategy(next);
    decision.guidance = std::string(kDriftGuidance);
    return {decision, next};
  }

  if (next.non_improving_streak >= config.streak_cap ||
      next.attempts_in_variant >= config.variant_attempt_cap) {
    if (const auto* variant = next_variant_in_family(next, next.current_family)) {
      enter_variant(next, *variant);
      decision.action = PlannerAction::SwitchVariant;
      decision.next_strategy = variant;
      decision.guidance = "switch to " + std::string(variant->title) +
                          "; the previous variant stopped making progress";
      return {decision, next};
    }
    for (auto family : config.family_order) {
      if (std::find(next.families_tried.begin(), next.families_tried.end(), family) !=
          next.families_tried.end()) {
        continue;
      }
      if (const auto* variant = next_variant_in_family(next, family)) {
        enter_variant(next, *variant);
        next.families_tried.push_back(family);
        decision.action = PlannerAction::SwitchFamily;
        decision.next_strategy = variant;
        decision.guidance = "switch to " + std::string(variant->title) +
                            "; the previous strategy family is exhausted";
        return {decision, next};
      }
    }
    // Strategy space exhausted: keep working the current variant.
    next.non_improving_streak = 0;
    next.attempts_in_variant = 0;
    decision.action = PlannerAction::RefineSame;
    decision.next_strategy = &current_strategy(next);
    decision.guidance = "all strategies have been tried; refine the most promising rewrite of this one";
    return {decision, next};
  }

  decision.action = PlannerAction::RefineSame;
  decision.next_strategy = &current_strategy(next);
  decision.guidance = category_guidance(evaluation, guard);
  return {decision, next};
}

}  // namespace advclaim
