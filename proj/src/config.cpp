#include "advclaim/config.hpp"

#include <fstream>

#include "advclaim/error.hpp"

namespace advclaim {

std::string_view to_string(VictimKind kind) noexcept {
  return kind == VictimKind::Simulated ? "simulated" : "live";
}

VictimKind victim_kind_from_string(std::string_view s) {
  if (s == "simulated") return VictimKind::Simulated;
  if (s == "live") return VictimKind::Live;
  throw Error(ErrorKind::ConfigError, "unknown victim kind '" + std::string(s) + "'");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

BackendConfig parse_backend(const Json& j, const std::filesystem::path& base, double default_temperature) {
  BackendConfig b;
  b.temperature = default_temperature;
  if (j.is_null()) return b;
  std::string endpoint = j.value("endpoint", "");
  constexpr std::string_view kScript = "script:";
  if (endpoint.rfind(kScript, 0) == 0) {
    endpoint = std::string(kScript) + resolve(base, endpoint.substr(kScript.size())).string();
  }
  b.endpoint = endpoint;
  b.model = j.value("model", b.model);
  b.temperature = j.value("temperature", default_temperature);
  b.timeout = std::chrono::milliseconds(j.value("timeout_ms", 60000));
  b.max_attempts = j.value("max_attempts", 3);
  b.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", 250));
  b.api_key_env = j.value("api_key_env", b.api_key_env);
  return b;
}

const Json& block(const Json& doc, const char* name) {
  static const Json kEmpty = Json::object();
  auto it = doc.find(name);
  if (it == doc.end() || it->is_null()) return kEmpty;
  if (!it->is_object()) throw Error(ErrorKind::ConfigError, std::string("block '") + name + "' must be an object");
  return *it;
}

}  // namespace

CampaignConfig parse_config(const Json& document, const std::filesystem::path& base_dir) {
  if (!document.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  CampaignConfig c;
  c.document = document;
  try {
    const Json& gw = block(document, "gateway");
    c.mode = backend_mode_from_string(gw.value("mode", "live"));
    if (auto it = gw.find("cassette"); it != gw.end() && it->is_string()) {
      c.cassette = resolve(base_dir, it->get<std::string>());
    }
    c.generator = parse_backend(gw.value("generator", Json()), base_dir, 0.7);
    c.victim_backend = parse_backend(gw.value("victim", Json()), base_dir, 0.0);
    c.judge = parse_backend(gw.value("judge", Json()), base_dir, 0.0);
    for (BackendConfig* b : {&c.generator, &c.victim_backend, &c.judge}) {
      b->mode = c.mode;
      b->cassette_path = c.cassette;
    }

    const Json& v = block(document, "victim");
    c.victim_kind = victim_kind_from_string(v.value("kind", "simulated"));
    if (auto it = v.find("corpus"); it != v.end() && it->is_string()) {
      c.corpus_path = resolve(base_dir, it->get<std::string>());
    }
    c.simulated.top_k = v.value("top_k", std::size_t{3});
    c.simulated.min_overlap = v.value("min_overlap", 0.2);
    c.simulated.stemming = v.value("stemming", true);
    c.simulated.extra_stopwords = v.value("extra_stopwords", std::vector<std::string>{});
    if (c.simulated.top_k < 1) throw Error(ErrorKind::ConfigError, "victim.top_k must be >= 1");

    const Json& g = block(document, "guard");
    c.guard.strict_sim_threshold = g.value("strict_sim_threshold", 0.85);
    c.guard.relaxed_sim_threshold = g.value("relaxed_sim_threshold", 0.7);
    const std::string backend = g.value("similarity_backend", "lexical");
    if (backend == "lexical") {
      c.guard.similarity_backend = SimilarityBackend::Lexical;
    } else if (backend == "embedding") {
      c.guard.similarity_backend = SimilarityBackend::EmbeddingService;
    } else {
      throw Error(ErrorKind::ConfigError, "unknown similarity backend '" + backend + "'");
    }
    if (auto it = g.find("embedding"); it != g.end() && it->is_object()) {
      c.guard.embedding.endpoint = it->value("endpoint", "");
      c.guard.embedding.model = it->value("model", "");
      c.guard.embedding.api_key_env = it->value("api_key_env", c.guard.embedding.api_key_env);
    }
    c.guard.enabled_during_refinement = g.value("enabled_during_refinement", true);
    validate(c.guard);

    const Json& p = block(document, "planner");
    c.planner.budget = p.value("budget", 10);
    if (auto it = p.find("family_order"); it != p.end()) {
      c.planner.family_order.clear();
      for (const auto& f : *it) c.planner.family_order.push_back(strategy_family_from_string(f.get<std::string>()));
    }
    c.planner.streak_cap = p.value("streak_cap", 2);
    c.planner.drift_retry_cap = p.value("drift_retry_cap", 1);
    c.planner.variant_attempt_cap = p.value("variant_attempt_cap", 4);
    if (auto it = p.find("start_variant"); it != p.end() && it->is_string()) {
      c.planner.start_variant = it->get<std::string>();
    }
    validate(c.planner);

    const Json& e = block(document, "evaluator");
    c.evaluator.resist_threshold = e.value("resist_threshold", 0.6);

    const Json& cp = block(document, "campaign");
    c.campaign.parallelism = cp.value("parallelism", 1);
    c.campaign.seed = cp.value("seed", std::uint64_t{0});
    c.campaign.asr_policy = tier_policy_from_string(cp.value("asr_policy", "strict_or_relaxed"));
    c.campaign.refusal_policy = refusal_policy_from_string(cp.value("refusal_policy", "exclude"));
    c.campaign.filter_nei = cp.value("filter_nei", true);
    c.campaign.perturb_budget = cp.value("perturb_budget", 0.3);
    if (c.campaign.parallelism < 1) throw Error(ErrorKind::ConfigError, "campaign.parallelism must be >= 1");
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return c;
}

Json read_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
}

CampaignConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_config_document(path), path.parent_path());
}

std::string config_digest(const Json& document) {
  Json copy = document;
  if (auto it = copy.find("campaign"); it != copy.end() && it->is_object()) it->erase("parallelism");
  if (auto it = copy.find("gateway"); it != copy.end() && it->is_object()) it->erase("mode");
  return sha256_hex(copy.dump());
}

}  // namespace advclaim
