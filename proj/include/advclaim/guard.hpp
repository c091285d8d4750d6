#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/domain.hpp"
#include "advclaim/gateway.hpp"
#include "advclaim/json.hpp"

namespace advclaim {

enum class NliLabel { Entailment, Neutral, Contradiction };
enum class ValidityTier { Strict, Relaxed, Invalid };
enum class SimilarityBackend { Lexical, EmbeddingService };

std::string_view to_string(NliLabel label) noexcept;
std::string_view to_string(ValidityTier tier) noexcept;
NliLabel nli_label_from_string(std::string_view s);
ValidityTier validity_tier_from_string(std::string_view s);

// Reason tags recorded when a report is Invalid.
namespace reason {
inline constexpr std::string_view kNoFlip = "no-flip";
inline constexpr std::string_view kRefusal = "refusal";
inline constexpr std::string_view kSimilarity = "similarity";
inline constexpr std::string_view kEntailment = "entailment";
inline constexpr std::string_view kContradiction = "contradiction";
inline constexpr std::string_view kRelevance = "relevance";
}  // namespace reason

struct EmbeddingConfig {
  std::string endpoint;
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{30000};
};

struct GuardConfig {
  double strict_sim_threshold = 0.85;
  double relaxed_sim_threshold = 0.7;
  SimilarityBackend similarity_backend = SimilarityBackend::Lexical;
  EmbeddingConfig embedding;
  /// When false, refinement only checks for a flip; the full rule set is
  /// applied once to the final candidate (guard ablation).
  bool enabled_during_refinement = true;
};

/// Throws ConfigError unless 0 <= relaxed <= strict <= 1.
void validate(const GuardConfig& config);

struct ValidityReport {
  std::optional<double> similarity;
  std::optional<NliLabel> nli_forward;
  std::optional<NliLabel> nli_backward;
  std::optional<bool> justification_relevant;
  ValidityTier tier = ValidityTier::Invalid;
  std::vector<std::string> reasons;

  [[nodiscard]] bool has_reason(std::string_view tag) const;
};

/// TF cosine over stemmed, stopword-filtered tokens. Identical texts score 1.
/// Throws EmptyText when either side is blank.
double lexical_similarity(std::string_view a, std::string_view b);

/// Posts {"model", "input": [a, b]} and reads data[i].embedding.
class EmbeddingClient {
 public:
  using Poster = std::function<Json(const Json& request)>;

  explicit EmbeddingClient(EmbeddingConfig config, Poster poster = nullptr);
  /// Cosine of the unit-normalized embeddings, clamped to [0, 1].
  double similarity(std::string_view a, std::string_view b);

 private:
  EmbeddingConfig config_;
  Poster poster_;
};

/// Parses a strict one-word judge reply. Surrounding whitespace, quotes,
/// markdown and a trailing period are tolerated; anything else is nullopt.
std::optional<NliLabel> parse_nli_reply(std::string_view reply);
std::optional<bool> parse_yes_no_reply(std::string_view reply);

/// Verbatim equality short-circuits to Entailment; otherwise one stateless
/// judge call plus one re-ask. Throws JudgeUnavailable / UnparseableJudgeReply.
NliLabel nli(std::string_view premise, std::string_view hypothesis, Gateway& judge);

/// Empty justification -> false; >= 3 distinct claim stems present in the
/// justification -> true; otherwise a YES/NO judge call.
bool justification_relevance(std::string_view claim, std::string_view justification, Gateway* judge);

/// The three semantic criteria behind one interface so the tier logic can be
/// exercised with stubbed scores.
class SemanticJudge {
 public:
  virtual ~SemanticJudge() = default;
  virtual double similarity(std::string_view a, std::string_view b) = 0;
  virtual NliLabel nli(std::string_view premise, std::string_view hypothesis) = 0;
  virtual bool relevant(std::string_view claim, std::string_view justification) = 0;
};

/// Production judge: lexical or embedding similarity plus an LLM judge.
class GuardServices final : public SemanticJudge {
 public:
  GuardServices(GuardConfig config, std::shared_ptr<Gateway> judge,
                EmbeddingClient::Poster embedding_poster = nullptr);

  double similarity(std::string_view a, std::string_view b) override;
  NliLabel nli(std::string_view premise, std::string_view hypothesis) override;
  bool relevant(std::string_view claim, std::string_view justification) override;

 private:
  GuardConfig config_;
  std::shared_ptr<Gateway> judge_;
  std::optional<EmbeddingClient> embedding_;
};

/// Checks, in order and stopping at the first failure: verdict flip,
/// similarity, NLI, justification relevance. The resulting tier is the
/// strongest one whose full rule set passes; Strict is tried even when only
/// Relaxed is requested.
ValidityReport check_validity(const Claim& benign, std::string_view adversarial_text,
                              const VerificationResult& adv_result, ValidityTier tier_requested,
                              const GuardConfig& config, SemanticJudge& judge);

/// Report used while the guard is disabled: Strict on any flip, Invalid
/// (no-flip/refusal) otherwise. No similarity or NLI fields are set.
ValidityReport flip_only_report(GoldLabel gold, const VerificationResult& adv_result);

}  // namespace advclaim
