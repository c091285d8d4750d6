#include "advclaim/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include "advclaim/error.hpp"

namespace advclaim {

std::vector<std::string> rouge_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      current += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return tokens;
}

RougeScores make_rouge_scores(std::size_t matches, std::size_t candidate_len, std::size_t reference_len) {
  RougeScores s;
  if (candidate_len == 0 || reference_len == 0) return s;
  s.precision = static_cast<double>(matches) / static_cast<double>(candidate_len);
  s.recall = static_cast<double>(matches) / static_cast<double>(reference_len);
  const double sum = s.precision + s.recall;
  s.f1 = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
  return s;
}

RougeScores rouge_n(const std::vector<std::string>& reference,
                    const std::vector<std::string>& candidate, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "ROUGE-N needs n >= 1");
  const auto un = static_cast<std::size_t>(n);
  auto grams = [un](const std::vector<std::string>& tokens) {
    std::map<std::vector<std::string>, std::size_t> counts;
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                        tokens.begin() + static_cast<std::ptrdiff_t>(i + un))];
    }
    return counts;
  };
  const auto ref = grams(reference);
  const auto cand = grams(candidate);
  const std::size_t ref_total = reference.size() >= un ? reference.size() - un + 1 : 0;
  const std::size_t cand_total = candidate.size() >= un ? candidate.size() - un + 1 : 0;
  std::size_t matches = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) matches += std::min(count, it->second);
  }
  return make_rouge_scores(matches, cand_total, ref_total);
}

RougeScores rouge_n(std::string_view reference, std::string_view candidate, int n) {
  return rouge_n(rouge_tokens(reference), rouge_tokens(candidate), n);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      row[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], row[j - 1]);
    }
    std::swap(prev, row);
  }
  return prev[b.size()];
}

RougeScores rouge_l(const std::vector<std::string>& reference, const std::vector<std::string>& candidate) {
  return make_rouge_scores(lcs_length(reference, candidate), candidate.size(), reference.size());
}

RougeScores rouge_l(std::string_view reference, std::string_view candidate) {
  return rouge_l(rouge_tokens(reference), rouge_tokens(candidate));
}

std::string_view to_string(AttemptCategory category) noexcept {
  switch (category) {
    case AttemptCategory::JustificationShift: return "justification_shift";
    case AttemptCategory::EvidenceReasoningDegradation: return "evidence_reasoning_degradation";
    case AttemptCategory::ReasoningDegradedNoFlip: return "reasoning_degraded_no_flip";
    case AttemptCategory::ModelResistance: return "model_resistance";
    case AttemptCategory::SemanticInvalidation: return "semantic_invalidation";
  }
  return "";
}

AttemptCategory attempt_category_from_string(std::string_view s) {
  for (auto c : {AttemptCategory::JustificationShift, AttemptCategory::EvidenceReasoningDegradation,
                 AttemptCategory::ReasoningDegradedNoFlip, AttemptCategory::ModelResistance,
                 AttemptCategory::SemanticInvalidation}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorKind::MalformedRecord, "unknown attempt category '" + std::string(s) + "'");
}

bool is_semantic_invalidation(const ValidityReport& guard) {
  if (guard.tier != ValidityTier::Invalid) return false;
  return !guard.has_reason(reason::kNoFlip) && !guard.has_reason(reason::kRefusal);
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

AttemptEvaluation evaluate_attempt(const VerificationResult& benign_result,
                                   const VerificationResult& adv_result, GoldLabel gold,
                                   const ValidityReport& guard, const EvaluatorConfig& config) {
  if (benign_result.verdict == Verdict::Refusal) {
    throw Error(ErrorKind::InvalidArgument, "benign verdict is a refusal");
  }
  AttemptEvaluation e;
  e.verdict_flipped = is_flip(adv_result.verdict, gold);
  e.justification_shift = rouge_l(benign_result.justification, adv_result.justification);
  if (!benign_result.evidence_refs.empty() && !adv_result.evidence_refs.empty()) {
    const std::set<std::string> a(benign_result.evidence_refs.begin(), benign_result.evidence_refs.end());
    const std::set<std::string> b(adv_result.evidence_refs.begin(), adv_result.evidence_refs.end());
    e.evidence_changed = a != b;
  }

  const double f1 = e.justification_shift.f1;
  if (is_semantic_invalidation(guard)) {
    e.category = AttemptCategory::SemanticInvalidation;
    e.notes = "guard rejected the candidate (" + guard.reasons.front() + ")";
  } else if (e.verdict_flipped && e.evidence_changed.value_or(false)) {
    e.category = AttemptCategory::EvidenceReasoningDegradation;
    e.notes = "verdict flipped on a different evidence set";
  } else if (e.verdict_flipped) {
    e.category = AttemptCategory::JustificationShift;
    e.notes = "verdict flipped; justification ROUGE-L F1 " + fixed3(f1);
  } else if (f1 >= config.resist_threshold) {
    e.category = AttemptCategory::ModelResistance;
    e.notes = "verdict held; justification ROUGE-L F1 " + fixed3(f1);
  } else {
    e.category = AttemptCategory::ReasoningDegradedNoFlip;
    e.notes = "verdict held but justification shifted; ROUGE-L F1 " + fixed3(f1);
  }
  return e;
}

}  // namespace advclaim
