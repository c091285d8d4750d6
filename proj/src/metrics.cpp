#include "advclaim/metrics.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "advclaim/error.hpp"

namespace advclaim {

std::string_view to_string(TierPolicy p) noexcept {
  return p == TierPolicy::StrictOnly ? "strict_only" : "strict_or_relaxed";
}

std::string_view to_string(RefusalPolicy p) noexcept {
  return p == RefusalPolicy::Exclude ? "exclude" : "count_as_error";
}

TierPolicy tier_policy_from_string(std::string_view s) {
  if (s == "strict_only") return TierPolicy::StrictOnly;
  if (s == "strict_or_relaxed") return TierPolicy::StrictOrRelaxed;
  throw Error(ErrorKind::ConfigError, "unknown ASR policy '" + std::string(s) + "'");
}

RefusalPolicy refusal_policy_from_string(std::string_view s) {
  if (s == "exclude") return RefusalPolicy::Exclude;
  if (s == "count_as_error") return RefusalPolicy::CountAsError;
  throw Error(ErrorKind::ConfigError, "unknown refusal policy '" + std::string(s) + "'");
}

bool counts_as_success(FinalStatus status, TierPolicy policy) noexcept {
  if (status == FinalStatus::SuccessStrict) return true;
  return policy == TierPolicy::StrictOrRelaxed && status == FinalStatus::SuccessRelaxed;
}

AsrResult compute_asr(std::span<const AttackTrace> traces, TierPolicy policy) {
  AsrResult r;
  for (const auto& t : traces) {
    if (is_skipped(t.final_status)) continue;
    ++r.eligible;
    if (counts_as_success(t.final_status, policy)) ++r.successes;
  }
  if (r.eligible == 0) throw Error(ErrorKind::EmptyCampaign, "no attacked traces");
  r.rate = static_cast<double>(r.successes) / static_cast<double>(r.eligible);
  return r;
}

ClassificationMetrics classification_metrics(std::span<const Verdict> predictions,
                                             std::span<const GoldLabel> gold, RefusalPolicy policy) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                               std::to_string(gold.size()) + " labels");
  }
  ClassificationMetrics m;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    Verdict p = predictions[i];
    if (p == Verdict::Refusal) {
      if (policy == RefusalPolicy::Exclude) {
        ++m.refusals_excluded;
        continue;
      }
      p = gold[i] == GoldLabel::TrueClaim ? Verdict::FalseClaim : Verdict::TrueClaim;
    }
    const bool predicted_true = p == Verdict::TrueClaim;
    const bool actually_true = gold[i] == GoldLabel::TrueClaim;
    if (predicted_true && actually_true) ++m.tp;
    else if (predicted_true) ++m.fp;
    else if (actually_true) ++m.fn;
    else ++m.tn;
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  const std::size_t total = m.tp + m.fp + m.fn + m.tn;
  m.accuracy = ratio(m.tp + m.tn, total);
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.f1 = (m.precision + m.recall) == 0.0 ? 0.0
                                          : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Json to_json(const ClassificationMetrics& m) {
  Json j;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["confusion"] = {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}};
  j["refusals_excluded"] = m.refusals_excluded;
  return j;
}

std::optional<int> success_round(const AttackTrace& trace, TierPolicy policy) {
  if (!counts_as_success(trace.final_status, policy)) return std::nullopt;
  return trace.final_iteration;
}

Verdict adversarial_setting_verdict(const AttackTrace& trace, TierPolicy policy) {
  if (counts_as_success(trace.final_status, policy) && trace.final_iteration) {
    if (const auto* a = trace.attempt_at(*trace.final_iteration)) return a->victim_result.verdict;
  }
  return trace.benign.verdict;
}

namespace {

Json asr_json(std::span<const AttackTrace> traces, TierPolicy policy) {
  Json j;
  try {
    auto r = compute_asr(traces, policy);
    j["rate"] = r.rate;
    j["successes"] = r.successes;
    j["eligible"] = r.eligible;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyCampaign) throw;
    j["rate"] = nullptr;
    j["successes"] = 0;
    j["eligible"] = 0;
  }
  return j;
}

}  // namespace

Json build_report(std::span<const AttackTrace> traces, const ReportOptions& options,
                  const std::optional<RequestCounters>& counters) {
  Json report;
  report["claims"] = traces.size();

  std::map<FinalStatus, std::size_t> status;
  std::size_t errored = 0;
  std::size_t attacked = 0;
  std::size_t flipped_traces = 0;
  std::size_t attempts_total = 0;
  std::map<AttemptCategory, std::size_t> categories;
  std::vector<std::size_t> per_round(static_cast<std::size_t>(std::max(options.budget, 1)), 0);
  std::size_t review_queue = 0;

  std::vector<Verdict> benign_pred;
  std::vector<Verdict> adv_pred;
  std::vector<GoldLabel> gold;

  for (const auto& t : traces) {
    ++status[t.final_status];
    if (t.error) ++errored;
    if (!is_skipped(t.final_status)) ++attacked;
    if (t.final_status == FinalStatus::SuccessRelaxed) ++review_queue;
    bool any_flip = false;
    for (const auto& a : t.attempts) {
      ++attempts_total;
      ++categories[a.evaluation.category];
      any_flip = any_flip || a.evaluation.verdict_flipped;
    }
    if (any_flip) ++flipped_traces;
    if (auto round = success_round(t, options.asr_policy)) {
      const auto idx = static_cast<std::size_t>(*round - 1);
      if (idx >= per_round.size()) per_round.resize(idx + 1, 0);
      ++per_round[idx];
    }
    benign_pred.push_back(t.benign.verdict);
    adv_pred.push_back(adversarial_setting_verdict(t, options.asr_policy));
    gold.push_back(t.claim.gold_label);
  }

  Json status_json;
  for (auto st : {FinalStatus::SuccessStrict, FinalStatus::SuccessRelaxed, FinalStatus::Failure,
                  FinalStatus::SkippedBenignError, FinalStatus::SkippedBenignRefusal}) {
    status_json[std::string(to_string(st))] = status[st];
  }
  report["status_counts"] = std::move(status_json);
  report["errored_traces"] = errored;

  Json asr;
  asr["policy"] = std::string(to_string(options.asr_policy));
  asr["strict_only"] = asr_json(traces, TierPolicy::StrictOnly);
  asr["strict_or_relaxed"] = asr_json(traces, TierPolicy::StrictOrRelaxed);
  {
    std::size_t successes = 0;
    for (const auto& t : traces) successes += counts_as_success(t.final_status, options.asr_policy) ? 1 : 0;
    Json all;
    all["rate"] = traces.empty() ? Json(nullptr)
                                 : Json(static_cast<double>(successes) / static_cast<double>(traces.size()));
    all["successes"] = successes;
    all["denominator"] = traces.size();
    asr["over_all_claims"] = std::move(all);
  }
  asr["rate"] = asr[std::string(to_string(options.asr_policy))]["rate"];
  report["asr"] = std::move(asr);

  Json flips;
  flips["flipped_traces"] = flipped_traces;
  flips["attacked_traces"] = attacked;
  flips["rate"] = attacked == 0 ? Json(nullptr)
                                : Json(static_cast<double>(flipped_traces) / static_cast<double>(attacked));
  report["flip_rate"] = std::move(flips);

  Json classification;
  classification["refusal_policy"] = std::string(to_string(options.refusal_policy));
  classification["benign"] = to_json(classification_metrics(benign_pred, gold, options.refusal_policy));
  classification["adversarial"] = to_json(classification_metrics(adv_pred, gold, options.refusal_policy));
  report["classification"] = std::move(classification);

  report["attempts_total"] = attempts_total;
  Json cat_json;
  for (auto c : {AttemptCategory::JustificationShift, AttemptCategory::EvidenceReasoningDegradation,
                 AttemptCategory::ReasoningDegradedNoFlip, AttemptCategory::ModelResistance,
                 AttemptCategory::SemanticInvalidation}) {
    cat_json[std::string(to_string(c))] = categories[c];
  }
  report["attempt_categories"] = std::move(cat_json);

  Json cumulative = Json::array();
  std::size_t running = 0;
  for (auto n : per_round) {
    running += n;
    cumulative.push_back(running);
  }
  report["success_by_round"] = per_round;
  report["cumulative_success_by_round"] = std::move(cumulative);

  if (counters) {
    Json req;
    req["generator"] = counters->generator;
    req["victim"] = counters->victim;
    req["judge"] = counters->judge;
    req["total"] = counters->generator + counters->victim + counters->judge;
    report["requests"] = std::move(req);
  } else {
    report["requests"] = nullptr;
  }
  report["review_queue_size"] = review_queue;
  return report;
}

}  // namespace advclaim
