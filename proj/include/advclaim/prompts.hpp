#pragma once

#include <string_view>

#include "advclaim/json.hpp"

// Versioned prompt assets. Bump the version suffix whenever the text changes;
// manifests and traces record their digests.
namespace advclaim::prompts {

inline constexpr std::string_view kGeneratorSystemVersion = "generator-system-v1";
inline constexpr std::string_view kGeneratorSystem =
    "You rewrite factual claims for robustness testing of fact-checking systems. "
    "Each request names a rewriting strategy, the claim to rewrite and optional feedback "
    "about your previous attempts in this conversation. Apply the strategy, follow the "
    "feedback and keep the factual content of the claim unchanged. Reply with the rewritten "
    "claim only.";

inline constexpr std::string_view kGeneratorRetry =
    "Your last reply was empty or identical to the original claim. Produce a different "
    "rewrite that follows the same strategy. Reply with the rewritten claim only.";

inline constexpr std::string_view kSurrogateSystemVersion = "surrogate-fact-checker-v1";
inline constexpr std::string_view kSurrogateSystem =
    "You are a fact-checking system with web search. Search for evidence about the claim "
    "given by the user, decide whether it is true or false and explain the decision with "
    "reference to the evidence you found. Answer in exactly this format:\n"
    "VERDICT: TRUE or FALSE\n"
    "JUSTIFICATION: <one paragraph>";

inline constexpr std::string_view kNliJudgeVersion = "nli-judge-v1";
inline constexpr std::string_view kNliJudgeSystem =
    "You judge natural language inference. Given a premise and a hypothesis, answer with "
    "exactly one word: ENTAILMENT if the premise entails the hypothesis, CONTRADICTION if "
    "the premise contradicts it, NEUTRAL otherwise.";
inline constexpr std::string_view kNliReask =
    "Answer with exactly one of: ENTAILMENT, NEUTRAL, CONTRADICTION.";

inline constexpr std::string_view kRelevanceJudgeVersion = "relevance-judge-v1";
inline constexpr std::string_view kRelevanceJudgeSystem =
    "You check whether a fact-checking justification is about the given claim. Answer YES if "
    "the justification discusses the subject of the claim, NO if it is unrelated. Answer with "
    "exactly one word.";
inline constexpr std::string_view kRelevanceReask = "Answer with exactly one of: YES, NO.";

/// {asset name -> {"version", "sha256"}} for every prompt asset.
Json prompt_digests();

}  // namespace advclaim::prompts
