#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/domain.hpp"
#include "advclaim/guard.hpp"

namespace advclaim {

struct RougeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const RougeScores&, const RougeScores&) = default;
};

inline constexpr std::string_view kRougeTokenizerVersion = "ws-lower-nopunct-v1";

/// Whitespace split, ASCII lowercase, ASCII punctuation removed, empties dropped.
std::vector<std::string> rouge_tokens(std::string_view text);

/// f1 = 2PR / (P + R), or 0 when P + R = 0.
RougeScores make_rouge_scores(std::size_t matches, std::size_t candidate_len, std::size_t reference_len);

/// Clipped n-gram overlap. Throws InvalidArgument for n < 1.
RougeScores rouge_n(std::string_view reference, std::string_view candidate, int n);
RougeScores rouge_n(const std::vector<std::string>& reference,
                    const std::vector<std::string>& candidate, int n);

/// Longest-common-subsequence overlap.
RougeScores rouge_l(std::string_view reference, std::string_view candidate);
RougeScores rouge_l(const std::vector<std::string>& reference, const std::vector<std::string>& candidate);
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

enum class AttemptCategory {
  JustificationShift,
  EvidenceReasoningDegradation,
  ReasoningDegradedNoFlip,
  ModelResistance,
  SemanticInvalidation,
};

std::string_view to_string(AttemptCategory category) noexcept;
AttemptCategory attempt_category_from_string(std::string_view s);

struct EvaluatorConfig {
  double resist_threshold = 0.6;
};

struct AttemptEvaluation {
  bool verdict_flipped = false;
  RougeScores justification_shift;
  std::optional<bool> evidence_changed;
  AttemptCategory category = AttemptCategory::ModelResistance;
  std::string notes;
};

/// True when the report failed on a semantic criterion (similarity, NLI or
/// relevance) rather than on the verdict check alone.
bool is_semantic_invalidation(const ValidityReport& guard);

/// Category precedence: semantic invalidation, flip with changed evidence,
/// flip, resistance (shift F1 >= resist_threshold), degraded reasoning.
/// Throws InvalidArgument when the benign verdict is a Refusal.
AttemptEvaluation evaluate_attempt(const VerificationResult& benign_result,
                                   const VerificationResult& adv_result, GoldLabel gold,
                                   const ValidityReport& guard, const EvaluatorConfig& config = {});

}  // namespace advclaim
