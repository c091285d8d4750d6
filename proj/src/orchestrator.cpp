#include "advclaim/orchestrator.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "advclaim/error.hpp"
#include "advclaim/evaluator.hpp"
#include "advclaim/perturb.hpp"
#include "advclaim/planner.hpp"
#include "advclaim/prompts.hpp"
#include "advclaim/strategy.hpp"
#include "advclaim/text.hpp"

#ifndef ADVCLAIM_VERSION
#define ADVCLAIM_VERSION "dev"
#endif

namespace advclaim {

std::string extract_candidate(std::string_view reply) {
  std::size_t pos = 0;
  while (pos < reply.size()) {
    std::size_t end = reply.find('\n', pos);
    if (end == std::string_view::npos) end = reply.size();
    std::string line = trim(reply.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    if (line.size() >= 2 && ((line.front() == '"' && line.back() == '"') ||
                             (line.front() == '\'' && line.back() == '\''))) {
      line = trim(std::string_view(line).substr(1, line.size() - 2));
    }
    return line;
  }
  return {};
}

namespace {

std::string next_candidate(Gateway& generator, SessionHandle& session, const std::string& instruction,
                           const Claim& claim) {
  std::string candidate = extract_candidate(generator.send(session, instruction));
  if (candidate.empty() || candidate == claim.text) {
    candidate = extract_candidate(generator.send(session, std::string(prompts::kGeneratorRetry)));
  }
  if (candidate.empty() || candidate == claim.text) {
    throw Error(ErrorKind::BackendUnavailable, "generator returned no usable rewrite");
  }
  return candidate;
}

}  // namespace

AttackTrace attack_claim(const Claim& claim, AttackComponents& c) {
  AttackTrace trace;
  trace.claim = claim;
  trace.manifest_ref = c.manifest_ref;

  trace.benign = c.victim.verify(claim.text);
  if (trace.benign.verdict == Verdict::Refusal) {
    trace.final_status = FinalStatus::SkippedBenignRefusal;
    return trace;
  }
  if (trace.benign.verdict != as_verdict(claim.gold_label)) {
    trace.final_status = FinalStatus::SkippedBenignError;
    return trace;
  }

  PlannerState state = init_state(c.planner);
  SessionHandle session = c.generator.open_session(std::string(prompts::kGeneratorSystem));
  std::optional<std::string> guidance;
  bool succeeded = false;

  while (state.iteration < state.budget) {
    const int iteration = state.iteration + 1;
    try {
      const StrategyDescriptor& strategy = current_strategy(state);
      const auto instruction = render_instruction(strategy, claim.text, guidance);
      const std::string candidate = next_candidate(c.generator, session, instruction.text, claim);

      AttackAttempt attempt;
      attempt.iteration = iteration;
      attempt.strategy_variant = std::string(strategy.variant_id);
      attempt.strategy_family = strategy.family;
      attempt.adversarial_text = candidate;
      attempt.victim_result = c.victim.verify(candidate);
      attempt.validity = c.guard.enabled_during_refinement
                             ? check_validity(claim, candidate, attempt.victim_result,
                                              ValidityTier::Relaxed, c.guard, c.judge)
                             : flip_only_report(claim.gold_label, attempt.victim_result);
      attempt.evaluation =
          evaluate_attempt(trace.benign, attempt.victim_result, claim.gold_label, attempt.validity, c.evaluator);

      auto [decision, next] = decide(state, c.planner, candidate, attempt.evaluation, attempt.validity);
      state = std::move(next);
      if (decision.action == PlannerAction::TerminateSuccess) {
        succeeded = true;
      } else if (state.iteration >= state.budget) {
        decision = PlannerDecision{PlannerAction::TerminateBudget, nullptr, {}};
      }
      guidance = decision.guidance.empty() ? std::nullopt : std::optional<std::string>(decision.guidance);
      attempt.decision = std::move(decision);
      trace.attempts.push_back(std::move(attempt));
      if (succeeded) break;
    } catch (const Error& e) {
      trace.final_status = FinalStatus::Failure;
      trace.error = "iteration " + std::to_string(iteration) + ": " + e.what();
      throw ComponentFailure(std::move(trace), iteration, e.what());
    }
  }

  if (succeeded) {
    const AttackAttempt& last = trace.attempts.back();
    trace.final_adversarial_text = last.adversarial_text;
    trace.final_iteration = last.iteration;
    if (c.guard.enabled_during_refinement) {
      trace.final_status = FinalStatus::SuccessStrict;
      return trace;
    }
    // Guard ablation: the full rules are applied once, at the end.
    ValidityReport final_report;
    try {
      final_report = check_validity(claim, last.adversarial_text, last.victim_result,
                                    ValidityTier::Relaxed, c.guard, c.judge);
    } catch (const Error& e) {
      trace.final_status = FinalStatus::Failure;
      trace.error = std::string("final evaluation: ") + e.what();
      throw ComponentFailure(std::move(trace), last.iteration, e.what());
    }
    trace.final_validity = final_report;
    switch (final_report.tier) {
      case ValidityTier::Strict: trace.final_status = FinalStatus::SuccessStrict; break;
      case ValidityTier::Relaxed: trace.final_status = FinalStatus::SuccessRelaxed; break;
      case ValidityTier::Invalid:
        trace.final_status = FinalStatus::Failure;
        trace.final_adversarial_text.reset();
        trace.final_iteration.reset();
        break;
    }
    return trace;
  }

  if (state.best_candidate) {
    trace.final_status = FinalStatus::SuccessRelaxed;
    trace.final_adversarial_text = state.best_candidate->text;
    trace.final_iteration = state.best_candidate->iteration;
  } else {
    trace.final_status = FinalStatus::Failure;
  }
  return trace;
}

// ---------------------------------------------------------------------------

RequestCounters CampaignServices::counters() const {
  RequestCounters c;
  c.generator = generator ? generator->request_count() : 0;
  c.victim = victim ? victim->request_count() : 0;
  c.judge = judge ? judge->request_count() : 0;
  return c;
}

CampaignServices build_services(const CampaignConfig& config) {
  CampaignServices s;
  if (config.mode != BackendMode::Live) {
    if (config.cassette.empty()) throw Error(ErrorKind::ConfigError, "record/replay mode needs gateway.cassette");
    s.cassette = Cassette::open(config.cassette, config.mode == BackendMode::Record);
  }
  s.generator = std::make_shared<Gateway>(config.generator, s.cassette);
  s.judge = std::make_shared<Gateway>(config.judge, s.cassette);
  if (config.victim_kind == VictimKind::Simulated) {
    SimulatedAfcConfig sim = config.simulated;
    if (config.corpus_path.empty()) throw Error(ErrorKind::ConfigError, "simulated victim needs victim.corpus");
    sim.corpus = load_corpus(config.corpus_path);
    s.victim = std::make_unique<SimulatedVictim>(std::move(sim));
  } else {
    s.victim_gateway = std::make_shared<Gateway>(config.victim_backend, s.cassette);
    s.victim = std::make_unique<LiveVictim>(s.victim_gateway);
  }
  s.semantic_judge = std::make_unique<GuardServices>(config.guard, s.judge);
  return s;
}

Json build_manifest(const CampaignConfig& config, const ClaimSet& dataset) {
  Json m;
  m["tool"] = "advclaim";
  m["version"] = ADVCLAIM_VERSION;
  m["config_digest"] = config_digest(config.document);
  m["seed"] = config.campaign.seed;
  m["mode"] = std::string(to_string(config.mode));
  m["victim"] = std::string(to_string(config.victim_kind));
  m["prompt_digests"] = prompts::prompt_digests();
  Json tok;
  tok["stemmer"] = std::string(text::kStemmerVersion);
  tok["stopwords"] = std::string(text::kStopwordsVersion);
  tok["rouge"] = std::string(kRougeTokenizerVersion);
  m["tokenizers"] = std::move(tok);
  Json planner;
  planner["budget"] = config.planner.budget;
  Json order = Json::array();
  for (auto f : config.planner.family_order) order.push_back(std::string(to_string(f)));
  planner["family_order"] = std::move(order);
  planner["streak_cap"] = config.planner.streak_cap;
  planner["drift_retry_cap"] = config.planner.drift_retry_cap;
  planner["variant_attempt_cap"] = config.planner.variant_attempt_cap;
  planner["start_variant"] = config.planner.start_variant ? Json(*config.planner.start_variant) : Json(nullptr);
  m["planner"] = std::move(planner);
  Json guard;
  guard["strict_sim_threshold"] = config.guard.strict_sim_threshold;
  guard["relaxed_sim_threshold"] = config.guard.relaxed_sim_threshold;
  guard["enabled_during_refinement"] = config.guard.enabled_during_refinement;
  m["guard"] = std::move(guard);
  m["resist_threshold"] = config.evaluator.resist_threshold;
  m["perturb_budget"] = config.campaign.perturb_budget;
  Json ds;
  ds["source"] = dataset.provenance.source_path;
  ds["filter_nei"] = dataset.provenance.filter_nei;
  ds["claims"] = dataset.size();
  ds["positives"] = dataset.positives;
  ds["negatives"] = dataset.negatives;
  ds["nei_removed"] = dataset.provenance.nei_removed;
  m["dataset"] = std::move(ds);
  m["config"] = config.document;
  return m;
}

Json manifest_ref(const Json& manifest) {
  Json ref;
  ref["config_digest"] = manifest.at("config_digest");
  ref["seed"] = manifest.at("seed");
  ref["prompt_digest"] = sha256_hex(manifest.at("prompt_digests").dump());
  return ref;
}

void OrderedTraceWriter::submit(std::size_t index, const AttackTrace& trace) {
  std::lock_guard lock(mutex_);
  pending_.emplace(index, trace_line(trace));
  while (!pending_.empty() && pending_.begin()->first == next_) {
    if (out_) *out_ << pending_.begin()->second << '\n' << std::flush;
    pending_.erase(pending_.begin());
    ++next_;
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << content;
}

}  // namespace

CampaignResult run_campaign(const ClaimSet& dataset, const CampaignConfig& config,
                            CampaignServices& services, const std::optional<std::filesystem::path>& out_dir) {
  if (dataset.claims.empty()) throw Error(ErrorKind::EmptyCampaign, "dataset has no claims");

  CampaignResult result;
  result.manifest = build_manifest(config, dataset);
  const Json ref = manifest_ref(result.manifest);

  std::ofstream trace_stream;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file(*out_dir / "manifest.json", result.manifest.dump(2) + "\n");
    trace_stream.open(*out_dir / "traces.jsonl", std::ios::binary | std::ios::trunc);
    if (!trace_stream) throw Error(ErrorKind::IoError, "cannot write traces.jsonl");
  }
  OrderedTraceWriter writer(out_dir ? &trace_stream : nullptr);

  const std::size_t n = dataset.claims.size();
  result.traces.resize(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> errored{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const Claim& claim = dataset.claims[i];
      AttackComponents components{*services.generator, *services.victim, *services.semantic_judge,
                                  config.guard,        config.planner,   config.evaluator,
                                  ref};
      AttackTrace trace;
      try {
        trace = attack_claim(claim, components);
      } catch (const ComponentFailure& f) {
        trace = f.partial_trace();
        ++errored;
      } catch (const Error& e) {
        // Benign verification failed before any attempt.
        trace.claim = claim;
        trace.manifest_ref = ref;
        trace.final_status = FinalStatus::Failure;
        trace.error = std::string("benign verification: ") + e.what();
        ++errored;
      }
      writer.submit(i, trace);
      result.traces[i] = std::move(trace);
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, config.campaign.parallelism));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < std::min(workers, n); ++w) pool.emplace_back(worker);
    worker();
  }
  result.errored = errored.load();

  ReportOptions options{config.campaign.asr_policy, config.campaign.refusal_policy, config.planner.budget};
  result.report = build_report(result.traces, options, services.counters());
  if (out_dir) write_file(*out_dir / "report.json", result.report.dump(2) + "\n");
  return result;
}

}  // namespace advclaim
