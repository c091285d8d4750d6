#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "advclaim/evaluator.hpp"
#include "advclaim/gateway.hpp"
#include "advclaim/guard.hpp"
#include "advclaim/json.hpp"
#include "advclaim/metrics.hpp"
#include "advclaim/planner.hpp"
#include "advclaim/victim.hpp"

namespace advclaim {

enum class VictimKind { Simulated, Live };
std::string_view to_string(VictimKind kind) noexcept;
VictimKind victim_kind_from_string(std::string_view s);

struct CampaignSettings {
  int parallelism = 1;
  std::uint64_t seed = 0;
  TierPolicy asr_policy = TierPolicy::StrictOrRelaxed;
  RefusalPolicy refusal_policy = RefusalPolicy::Exclude;
  bool filter_nei = true;
  double perturb_budget = 0.3;
};

/// Everything a campaign needs, parsed from one JSON config file with the
/// blocks gateway / victim / guard / planner / evaluator / campaign.
struct CampaignConfig {
  BackendConfig generator;
  BackendConfig victim_backend;
  BackendConfig judge;
  BackendMode mode = BackendMode::Live;
  std::filesystem::path cassette;

  VictimKind victim_kind = VictimKind::Simulated;
  std::filesystem::path corpus_path;
  SimulatedAfcConfig simulated;  // corpus loaded lazily by build_services

  GuardConfig guard;
  PlannerConfig planner;
  EvaluatorConfig evaluator;
  CampaignSettings campaign;

  /// The effective config document (after CLI overrides), as written to the manifest.
  Json document;
};

/// Paths inside the document are resolved against `base_dir`.
/// Throws ConfigError for unknown enum values, wrong types or invalid values.
CampaignConfig parse_config(const Json& document, const std::filesystem::path& base_dir);
CampaignConfig load_config(const std::filesystem::path& path);
Json read_config_document(const std::filesystem::path& path);

/// SHA-256 of the document without campaign.parallelism and gateway.mode.
/// Neither changes results, so recorded and replayed runs share a digest.
std::string config_digest(const Json& document);

}  // namespace advclaim
