#include "advclaim/guard.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "advclaim/error.hpp"
#include "advclaim/prompts.hpp"
#include "advclaim/text.hpp"

namespace advclaim {

std::string_view to_string(NliLabel label) noexcept {
  switch (label) {
    case NliLabel::Entailment: return "entailment";
    case NliLabel::Neutral: return "neutral";
    case NliLabel::Contradiction: return "contradiction";
  }
  return "neutral";
}

std::string_view to_string(ValidityTier tier) noexcept {
  switch (tier) {
    case ValidityTier::Strict: return "strict";
    case ValidityTier::Relaxed: return "relaxed";
    case ValidityTier::Invalid: return "invalid";
  }
  return "invalid";
}

NliLabel nli_label_from_string(std::string_view s) {
  if (auto parsed = parse_nli_reply(s)) return *parsed;
  throw Error(ErrorKind::MalformedRecord, "unknown NLI label '" + std::string(s) + "'");
}

ValidityTier validity_tier_from_string(std::string_view s) {
  if (s == "strict") return ValidityTier::Strict;
  if (s == "relaxed") return ValidityTier::Relaxed;
  if (s == "invalid") return ValidityTier::Invalid;
  throw Error(ErrorKind::MalformedRecord, "unknown tier '" + std::string(s) + "'");
}

void validate(const GuardConfig& config) {
  const double lo = config.relaxed_sim_threshold;
  const double hi = config.strict_sim_threshold;
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw Error(ErrorKind::ConfigError, "guard thresholds must satisfy 0 <= relaxed <= strict <= 1");
  }
}

bool ValidityReport::has_reason(std::string_view tag) const {
  return std::find(reasons.begin(), reasons.end(), tag) != reasons.end();
}

double lexical_similarity(std::string_view a, std::string_view b) {
  if (trim(a).empty() || trim(b).empty()) {
    throw Error(ErrorKind::EmptyText, "similarity needs two non-empty texts");
  }
  if (a == b) return 1.0;
  std::map<std::string, double> ta;
  std::map<std::string, double> tb;
  for (auto& s : text::content_stems(a)) ta[s] += 1.0;
  for (auto& s : text::content_stems(b)) tb[s] += 1.0;
  if (ta.empty() || tb.empty()) return ta.empty() && tb.empty() ? 1.0 : 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [term, w] : ta) {
    na += w * w;
    if (auto it = tb.find(term); it != tb.end()) dot += w * it->second;
  }
  for (const auto& [term, w] : tb) nb += w * w;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Embedding service

namespace {

Json http_post_json(const EmbeddingConfig& config, const Json& request) {
  auto scheme_end = config.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::EmbeddingUnavailable, "endpoint lacks a scheme");
  }
  auto path_start = config.endpoint.find('/', scheme_end + 3);
  std::string base = config.endpoint.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : config.endpoint.substr(path_start);
  httplib::Client client(base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout).count();
  client.set_connection_timeout(secs);
  client.set_read_timeout(secs);
  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str())) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(path, headers, request.dump(), "application/json");
  if (!res || res->status < 200 || res->status >= 300) {
    throw Error(ErrorKind::EmbeddingUnavailable, "embedding request to " + base + " failed");
  }
  return Json::parse(res->body);
}

std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n == 0.0) throw Error(ErrorKind::EmbeddingUnavailable, "zero embedding vector");
  for (double& x : v) x /= n;
  return v;
}

}  // namespace

EmbeddingClient::EmbeddingClient(EmbeddingConfig config, Poster poster)
    : config_(std::move(config)), poster_(std::move(poster)) {
  if (!poster_) {
    poster_ = [cfg = config_](const Json& request) { return http_post_json(cfg, request); };
  }
}

double EmbeddingClient::similarity(std::string_view a, std::string_view b) {
  if (trim(a).empty() || trim(b).empty()) {
    throw Error(ErrorKind::EmptyText, "similarity needs two non-empty texts");
  }
  Json request;
  request["model"] = config_.model;
  request["input"] = Json::array({std::string(a), std::string(b)});
  std::vector<double> va;
  std::vector<double> vb;
  try {
    Json body = poster_(request);
    va = body.at("data").at(0).at("embedding").get<std::vector<double>>();
    vb = body.at("data").at(1).at("embedding").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::EmbeddingUnavailable, std::string("malformed embedding reply: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmbeddingUnavailable) throw;
    throw Error(ErrorKind::EmbeddingUnavailable, e.what());
  }
  if (va.size() != vb.size() || va.empty()) {
    throw Error(ErrorKind::EmbeddingUnavailable, "embedding dimensions differ");
  }
  va = unit(std::move(va));
  vb = unit(std::move(vb));
  double dot = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) dot += va[i] * vb[i];
  return std::clamp(dot, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Judges

namespace {

std::string normalize_reply(std::string_view reply) {
  std::string out;
  for (char c : trim(reply)) {
    if (c == '*' || c == '"' || c == '\'' || c == '`') continue;
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  out = trim(out);
  while (!out.empty() && (out.back() == '.' || out.back() == '!')) out.pop_back();
  return out;
}

std::string ask_judge(Gateway& judge, std::string_view system, const std::string& user) {
  const ChatMessage messages[] = {{Role::System, std::string(system)}, {Role::User, user}};
  try {
    return judge.complete_stateless(messages);
  } catch (const Error& e) {
    throw Error(ErrorKind::JudgeUnavailable, e.what());
  }
}

template <typename Parse>
auto judge_with_reask(Gateway& judge, std::string_view system, const std::string& prompt,
                      std::string_view reask, Parse parse) {
  if (auto first = parse(ask_judge(judge, system, prompt))) return *first;
  // The re-ask is a fresh stateless request; the rejected reply is not sent back.
  const std::string retry = prompt + "\n\n" + std::string(reask);
  const std::string second_reply = ask_judge(judge, system, retry);
  if (auto second = parse(second_reply)) return *second;
  throw Error(ErrorKind::UnparseableJudgeReply, "judge replied '" + second_reply + "' twice off-grammar");
}

}  // namespace

std::optional<NliLabel> parse_nli_reply(std::string_view reply) {
  const std::string r = normalize_reply(reply);
  if (r == "ENTAILMENT") return NliLabel::Entailment;
  if (r == "NEUTRAL") return NliLabel::Neutral;
  if (r == "CONTRADICTION") return NliLabel::Contradiction;
  return std::nullopt;
}

std::optional<bool> parse_yes_no_reply(std::string_view reply) {
  const std::string r = normalize_reply(reply);
  if (r == "YES") return true;
  if (r == "NO") return false;
  return std::nullopt;
}

NliLabel nli(std::string_view premise, std::string_view hypothesis, Gateway& judge) {
  if (trim(premise).empty() || trim(hypothesis).empty()) {
    throw Error(ErrorKind::EmptyText, "NLI needs a premise and a hypothesis");
  }
  if (premise == hypothesis) return NliLabel::Entailment;
  const std::string prompt =
      "Premise: " + std::string(premise) + "\nHypothesis: " + std::string(hypothesis);
  return judge_with_reask(judge, prompts::kNliJudgeSystem, prompt, prompts::kNliReask,
                          parse_nli_reply);
}

bool justification_relevance(std::string_view claim, std::string_view justification, Gateway* judge) {
  if (trim(claim).empty()) throw Error(ErrorKind::EmptyText, "claim is empty");
  if (trim(justification).empty()) return false;

  const auto claim_stems = text::content_stems(claim);
  const auto just_stems = text::content_stems(justification);
  const std::set<std::string> claim_set(claim_stems.begin(), claim_stems.end());
  const std::set<std::string> just_set(just_stems.begin(), just_stems.end());
  std::size_t shared = 0;
  for (const auto& s : claim_set) shared += just_set.count(s);
  if (shared >= 3) return true;

  if (!judge) throw Error(ErrorKind::JudgeUnavailable, "no relevance judge configured");
  const std::string prompt = "Claim: " + std::string(claim) +
                             "\nJustification: " + std::string(justification);
  return judge_with_reask(*judge, prompts::kRelevanceJudgeSystem, prompt, prompts::kRelevanceReask,
                          parse_yes_no_reply);
}

GuardServices::GuardServices(GuardConfig config, std::shared_ptr<Gateway> judge,
                             EmbeddingClient::Poster embedding_poster)
    : config_(std::move(config)), judge_(std::move(judge)) {
  validate(config_);
  if (config_.similarity_backend == SimilarityBackend::EmbeddingService) {
    embedding_.emplace(config_.embedding, std::move(embedding_poster));
  }
}

double GuardServices::similarity(std::string_view a, std::string_view b) {
  if (embedding_) return embedding_->similarity(a, b);
  return lexical_similarity(a, b);
}

NliLabel GuardServices::nli(std::string_view premise, std::string_view hypothesis) {
  if (!judge_) {
    if (premise == hypothesis) return NliLabel::Entailment;
    throw Error(ErrorKind::JudgeUnavailable, "no NLI judge configured");
  }
  return advclaim::nli(premise, hypothesis, *judge_);
}

bool GuardServices::relevant(std::string_view claim, std::string_view justification) {
  return justification_relevance(claim, justification, judge_.get());
}

// ---------------------------------------------------------------------------
// Tier decision

namespace {

ValidityReport invalid(ValidityReport report, std::string_view tag) {
  report.tier = ValidityTier::Invalid;
  report.reasons.emplace_back(tag);
  return report;
}

}  // namespace

ValidityReport check_validity(const Claim& benign, std::string_view adversarial_text,
                              const VerificationResult& adv_result, ValidityTier tier_requested,
                              const GuardConfig& config, SemanticJudge& judge) {
  validate(config);
  if (tier_requested == ValidityTier::Invalid) {
    throw Error(ErrorKind::InvalidArgument, "requested tier must be strict or relaxed");
  }
  ValidityReport report;
  if (adv_result.verdict == Verdict::Refusal) return invalid(std::move(report), reason::kRefusal);
  if (!is_flip(adv_result.verdict, benign.gold_label)) {
    return invalid(std::move(report), reason::kNoFlip);
  }

  const double sim = judge.similarity(benign.text, adversarial_text);
  report.similarity = sim;
  const bool strict_sim = sim >= config.strict_sim_threshold;
  const bool relaxed_sim = sim >= config.relaxed_sim_threshold;
  if (!relaxed_sim || (tier_requested == ValidityTier::Strict && !strict_sim)) {
    return invalid(std::move(report), reason::kSimilarity);
  }

  report.nli_forward = judge.nli(benign.text, adversarial_text);
  const bool forward_blocks = *report.nli_forward == NliLabel::Contradiction ||
                              (tier_requested == ValidityTier::Strict &&
                               *report.nli_forward != NliLabel::Entailment);
  if (!forward_blocks) report.nli_backward = judge.nli(adversarial_text, benign.text);

  const bool contradiction = *report.nli_forward == NliLabel::Contradiction ||
                             report.nli_backward == NliLabel::Contradiction;
  const bool both_entail = *report.nli_forward == NliLabel::Entailment &&
                           report.nli_backward == NliLabel::Entailment;
  const bool strict_ok = strict_sim && both_entail;
  if (tier_requested == ValidityTier::Strict && !strict_ok) {
    return invalid(std::move(report), contradiction ? reason::kContradiction : reason::kEntailment);
  }
  if (contradiction) return invalid(std::move(report), reason::kContradiction);

  report.justification_relevant = judge.relevant(adversarial_text, adv_result.justification);
  if (!*report.justification_relevant) return invalid(std::move(report), reason::kRelevance);

  report.tier = strict_ok ? ValidityTier::Strict : ValidityTier::Relaxed;
  return report;
}

ValidityReport flip_only_report(GoldLabel gold, const VerificationResult& adv_result) {
  ValidityReport report;
  if (adv_result.verdict == Verdict::Refusal) return invalid(std::move(report), reason::kRefusal);
  if (!is_flip(adv_result.verdict, gold)) return invalid(std::move(report), reason::kNoFlip);
  report.tier = ValidityTier::Strict;
  return report;
}

}  // namespace advclaim
