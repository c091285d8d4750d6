#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "advclaim/domain.hpp"
#include "advclaim/json.hpp"
#include "advclaim/trace.hpp"

namespace advclaim {

enum class TierPolicy { StrictOnly, StrictOrRelaxed };
enum class RefusalPolicy { Exclude, CountAsError };

std::string_view to_string(TierPolicy p) noexcept;
std::string_view to_string(RefusalPolicy p) noexcept;
TierPolicy tier_policy_from_string(std::string_view s);
RefusalPolicy refusal_policy_from_string(std::string_view s);

[[nodiscard]] bool counts_as_success(FinalStatus status, TierPolicy policy) noexcept;

struct AsrResult {
  double rate = 0.0;
  std::size_t successes = 0;
  std::size_t eligible = 0;  // non-skipped traces
};

/// Successes under `policy` over non-skipped traces. Throws EmptyCampaign
/// when every trace was skipped (or there are none).
AsrResult compute_asr(std::span<const AttackTrace> traces, TierPolicy policy);

struct ClassificationMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t refusals_excluded = 0;
};

/// Positive class is TrueClaim. Under CountAsError a refusal is scored as the
/// label opposite to gold. Zero denominators yield 0.
ClassificationMetrics classification_metrics(std::span<const Verdict> predictions,
                                             std::span<const GoldLabel> gold, RefusalPolicy policy);

Json to_json(const ClassificationMetrics& m);

struct RequestCounters {
  std::uint64_t generator = 0;
  std::uint64_t victim = 0;
  std::uint64_t judge = 0;
};

struct ReportOptions {
  TierPolicy asr_policy = TierPolicy::StrictOrRelaxed;
  RefusalPolicy refusal_policy = RefusalPolicy::Exclude;
  int budget = 10;
};

/// Iteration at which a trace succeeded under `policy`, if it did.
std::optional<int> success_round(const AttackTrace& trace, TierPolicy policy);

/// Verdict the victim gives for the claim as it ends up in the evaluation set:
/// the accepted adversarial text when the trace succeeded, the benign one otherwise.
Verdict adversarial_setting_verdict(const AttackTrace& trace, TierPolicy policy);

/// Campaign report: status counts, ASR under both tier policies and both
/// denominators, flip rate, benign/adversarial classification metrics,
/// category and per-round histograms, request counters, review-queue size.
Json build_report(std::span<const AttackTrace> traces, const ReportOptions& options,
                  const std::optional<RequestCounters>& counters);

}  // namespace advclaim
