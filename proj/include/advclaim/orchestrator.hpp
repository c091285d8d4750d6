#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "advclaim/config.hpp"
#include "advclaim/domain.hpp"
#include "advclaim/error.hpp"
#include "advclaim/evaluator.hpp"
#include "advclaim/planner.hpp"
#include "advclaim/gateway.hpp"
#include "advclaim/guard.hpp"
#include "advclaim/metrics.hpp"
#include "advclaim/trace.hpp"
#include "advclaim/victim.hpp"

namespace advclaim {

/// Wired components for attacking one claim. The generator gateway hands out
/// one session per trace; victim and judge calls are stateless.
struct AttackComponents {
  Gateway& generator;
  Victim& victim;
  SemanticJudge& judge;
  GuardConfig guard;
  PlannerConfig planner;
  EvaluatorConfig evaluator;
  Json manifest_ref = Json::object();
};

/// Backend failure in the middle of a trace. Carries the trace up to the
/// failing iteration so it can still be persisted.
class ComponentFailure : public Error {
 public:
  ComponentFailure(AttackTrace partial, int iteration, const std::string& cause)
      : Error(ErrorKind::ComponentFailure,
              "iteration " + std::to_string(iteration) + ": " + cause),
        partial_(std::move(partial)),
        iteration_(iteration) {}

  [[nodiscard]] const AttackTrace& partial_trace() const noexcept { return partial_; }
  [[nodiscard]] int iteration() const noexcept { return iteration_; }

 private:
  AttackTrace partial_;
  int iteration_;
};

/// Generator reply -> candidate text: first non-blank line, trimmed, with
/// one pair of wrapping quotes removed.
std::string extract_candidate(std::string_view reply);

/// Verifies the benign claim, then runs generate -> verify -> evaluate ->
/// guard -> plan until success or the iteration budget is spent.
AttackTrace attack_claim(const Claim& claim, AttackComponents& components);

/// Live services built from a config. Tests may swap any member.
struct CampaignServices {
  std::shared_ptr<Cassette> cassette;
  std::shared_ptr<Gateway> generator;
  std::shared_ptr<Gateway> judge;
  std::shared_ptr<Gateway> victim_gateway;  // live victim only
  std::unique_ptr<Victim> victim;
  std::unique_ptr<SemanticJudge> semantic_judge;

  [[nodiscard]] RequestCounters counters() const;
};

CampaignServices build_services(const CampaignConfig& config);

/// Run manifest: config digest and document, seed, prompt digests, code version.
Json build_manifest(const CampaignConfig& config, const ClaimSet& dataset);
/// Compact per-trace reference into the manifest.
Json manifest_ref(const Json& manifest);

/// Appends traces to a stream strictly in claim order, whatever order the
/// workers finish in.
class OrderedTraceWriter {
 public:
  explicit OrderedTraceWriter(std::ostream* out) : out_(out) {}
  void submit(std::size_t index, const AttackTrace& trace);

 private:
  std::mutex mutex_;
  std::ostream* out_;
  std::size_t next_ = 0;
  std::map<std::size_t, std::string> pending_;
};

struct CampaignResult {
  Json manifest;
  std::vector<AttackTrace> traces;
  Json report;
  std::size_t errored = 0;
};

/// Attacks every claim with a bounded worker pool. When `out_dir` is set,
/// manifest.json is written first, traces.jsonl as traces complete (in claim
/// order) and report.json last. Throws EmptyCampaign for an empty dataset.
CampaignResult run_campaign(const ClaimSet& dataset, const CampaignConfig& config,
                            CampaignServices& services,
                            const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace advclaim
