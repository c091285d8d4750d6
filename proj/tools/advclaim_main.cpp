// advclaim command-line front end.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "advclaim/config.hpp"
#include "advclaim/domain.hpp"
#include "advclaim/error.hpp"
#include "advclaim/metrics.hpp"
#include "advclaim/orchestrator.hpp"
#include "advclaim/perturb.hpp"
#include "advclaim/review.hpp"
#include "advclaim/trace.hpp"

namespace fs = std::filesystem;
using namespace advclaim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return read_all(in);
}

Json& ensure_block(Json& doc, const char* name) {
  if (!doc.contains(name)) doc[name] = Json::object();
  return doc[name];
}

struct AttackArgs {
  std::string dataset;
  std::string config;
  std::string out = "run";
  std::optional<std::string> victim;
  std::optional<std::string> mode;
  std::optional<int> budget;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
};

CampaignConfig effective_config(const AttackArgs& a) {
  Json doc = read_config_document(a.config);
  if (a.victim) ensure_block(doc, "victim")["kind"] = *a.victim;
  if (a.mode) ensure_block(doc, "gateway")["mode"] = *a.mode;
  if (a.budget) ensure_block(doc, "planner")["budget"] = *a.budget;
  if (a.parallelism) ensure_block(doc, "campaign")["parallelism"] = *a.parallelism;
  if (a.seed) ensure_block(doc, "campaign")["seed"] = *a.seed;
  return parse_config(doc, fs::path(a.config).parent_path());
}

int run_attack(const AttackArgs& a) {
  CampaignConfig config;
  ClaimSet dataset;
  CampaignServices services;
  try {
    config = effective_config(a);
    dataset = load_dataset(a.dataset, config.campaign.filter_nei);
    services = build_services(config);
  } catch (const Error& e) {
    std::cerr << "advclaim: " << e.what() << '\n';
    return kExitConfig;
  }
  const CampaignResult result = run_campaign(dataset, config, services, fs::path(a.out));
  const Json& asr = result.report.at("asr");
  std::cout << "claims: " << result.traces.size() << ", errored: " << result.errored
            << ", asr(" << asr.at("policy").get<std::string>() << "): " << asr.at("rate").dump() << '\n'
            << "wrote " << (fs::path(a.out) / "traces.jsonl").string() << '\n';
  return result.errored > 0 ? kExitPartial : kExitOk;
}

struct PerturbArgs {
  std::string kind;
  double budget = kDefaultPerturbBudget;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
};

// Each input line is a claim record ({"claim": ...}) or a bare string.
int run_perturb(const PerturbArgs& a) {
  const PerturbKind kind = perturb_kind_from_string(a.kind);
  std::string content;
  if (a.input.empty() || a.input == "-") {
    content = read_all(std::cin);
  } else {
    content = read_file(a.input);
  }
  std::ofstream file_out;
  if (!a.output.empty()) {
    file_out.open(a.output, std::ios::binary | std::ios::trunc);
    if (!file_out) throw Error(ErrorKind::IoError, "cannot write " + a.output);
  }
  std::ostream& out = a.output.empty() ? std::cout : file_out;

  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": " + e.what());
    }
    std::string text;
    if (record.is_string()) {
      text = record.get<std::string>();
      record = Json::object();
    } else if (record.is_object() && record.contains("claim") && record["claim"].is_string()) {
      text = record["claim"].get<std::string>();
    } else {
      throw Error(ErrorKind::MissingField, "line " + std::to_string(line_no) + ": claim");
    }
    const PerturbOutcome outcome = perturb(kind, text, a.budget, a.seed);
    record["original_claim"] = text;
    record["claim"] = outcome.text;
    Json info;
    info["kind"] = std::string(to_string(kind));
    info["budget"] = a.budget;
    info["seed"] = a.seed;
    info["eligible_units"] = outcome.eligible_units;
    info["modified_units"] = outcome.modified_units;
    record["perturbation"] = std::move(info);
    out << record.dump() << '\n';
  }
  return kExitOk;
}

struct ReportArgs {
  std::string traces;
  std::string out;
  std::string asr_policy = "strict_or_relaxed";
  std::string refusal_policy = "exclude";
  int budget = 10;
};

int run_report(const ReportArgs& a) {
  const auto traces = load_traces(a.traces);
  ReportOptions options{tier_policy_from_string(a.asr_policy), refusal_policy_from_string(a.refusal_policy),
                        a.budget};
  const std::string text = build_report(traces, options, std::nullopt).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(a.out, std::ios::binary | std::ios::trunc) << text;
  }
  return kExitOk;
}

int run_review_export(const std::string& traces_path, const std::string& out_path) {
  const auto traces = load_traces(traces_path);
  const std::string text = export_review_queue(traces);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out_path, std::ios::binary | std::ios::trunc) << text;
  }
  return kExitOk;
}

// Re-runs every trace of a finished run against its cassette and compares
// the regenerated trace line with the stored one.
int run_replay(const std::string& run_dir, const std::string& config_path, std::optional<std::string> only) {
  CampaignConfig config;
  CampaignServices services;
  Json manifest;
  std::vector<AttackTrace> traces;
  try {
    Json doc = read_config_document(config_path);
    ensure_block(doc, "gateway")["mode"] = "replay";
    config = parse_config(doc, fs::path(config_path).parent_path());
    services = build_services(config);
    manifest = Json::parse(read_file(fs::path(run_dir) / "manifest.json"));
    traces = load_traces((fs::path(run_dir) / "traces.jsonl").string());
  } catch (const Error& e) {
    std::cerr << "advclaim: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    std::cerr << "advclaim: manifest.json: " << e.what() << '\n';
    return kExitConfig;
  }

  const Json ref = manifest_ref(manifest);
  std::size_t checked = 0;
  std::size_t mismatched = 0;
  for (const AttackTrace& stored : traces) {
    if (only && stored.claim.id != *only) continue;
    ++checked;
    AttackComponents components{*services.generator, *services.victim, *services.semantic_judge,
                                config.guard,        config.planner,   config.evaluator,
                                ref};
    AttackTrace fresh;
    try {
      fresh = attack_claim(stored.claim, components);
    } catch (const ComponentFailure& f) {
      fresh = f.partial_trace();
    } catch (const Error& e) {
      std::cout << stored.claim.id << ": error: " << e.what() << '\n';
      ++mismatched;
      continue;
    }
    const bool same = trace_line(fresh) == trace_line(stored);
    if (!same) ++mismatched;
    std::cout << stored.claim.id << ": " << (same ? "match" : "mismatch") << '\n';
  }
  if (only && checked == 0) {
    std::cerr << "advclaim: no trace for claim " << *only << '\n';
    return kExitConfig;
  }
  std::cout << checked - mismatched << "/" << checked << " traces reproduced\n";
  return mismatched > 0 ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial claim generation against fact-checking pipelines"};
  app.set_version_flag("--version", std::string(ADVCLAIM_VERSION));
  app.require_subcommand(1);

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Run an attack campaign over a claim dataset");
  attack_cmd->add_option("--dataset", attack.dataset, "Claims as JSON Lines")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--config", attack.config, "Campaign config (JSON)")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--victim", attack.victim, "Victim kind")->check(CLI::IsMember({"simulated", "live"}));
  attack_cmd->add_option("--mode", attack.mode, "Backend mode")->check(CLI::IsMember({"live", "record", "replay"}));
  attack_cmd->add_option("--budget", attack.budget, "Iteration budget per claim");
  attack_cmd->add_option("--parallelism", attack.parallelism, "Concurrent claims");
  attack_cmd->add_option("--seed", attack.seed, "Campaign seed");
  attack_cmd->add_option("--out", attack.out, "Output directory")->capture_default_str();

  PerturbArgs perturb_args;
  auto* perturb_cmd = app.add_subcommand("perturb", "Character-level perturbation baselines");
  perturb_cmd->add_option("kind", perturb_args.kind, "leet | homoglyph | charswap | phonetic")
      ->required()
      ->check(CLI::IsMember({"leet", "homoglyph", "charswap", "phonetic"}));
  perturb_cmd->add_option("--budget", perturb_args.budget, "Fraction of eligible units")->capture_default_str();
  perturb_cmd->add_option("--seed", perturb_args.seed, "RNG seed")->capture_default_str();
  perturb_cmd->add_option("--input,-i", perturb_args.input, "JSON Lines input (default: stdin)");
  perturb_cmd->add_option("--output,-o", perturb_args.output, "JSON Lines output (default: stdout)");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Recompute campaign metrics from traces");
  report_cmd->add_option("--traces", report.traces, "traces.jsonl")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report.out, "Output file (default: stdout)");
  report_cmd->add_option("--asr-policy", report.asr_policy)
      ->check(CLI::IsMember({"strict_only", "strict_or_relaxed"}))
      ->capture_default_str();
  report_cmd->add_option("--refusal-policy", report.refusal_policy)
      ->check(CLI::IsMember({"exclude", "count_as_error"}))
      ->capture_default_str();
  report_cmd->add_option("--budget", report.budget, "Rounds in the per-round histogram")->capture_default_str();

  std::string review_traces;
  std::string review_out;
  auto* review_cmd = app.add_subcommand("review", "Human review queue");
  review_cmd->require_subcommand(1);
  auto* review_export = review_cmd->add_subcommand("export", "Export relaxed-tier successes for review");
  review_export->add_option("--traces", review_traces, "traces.jsonl")->required()->check(CLI::ExistingFile);
  review_export->add_option("--out", review_out, "Output file (default: stdout)");

  std::string replay_run;
  std::string replay_config;
  std::optional<std::string> replay_claim;
  auto* replay_cmd = app.add_subcommand("replay", "Re-verify stored traces against their cassette");
  replay_cmd->add_option("--run", replay_run, "Run directory")->required()->check(CLI::ExistingDirectory);
  replay_cmd->add_option("--config", replay_config, "Campaign config")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--claim", replay_claim, "Only this claim id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*attack_cmd) return run_attack(attack);
    if (*perturb_cmd) return run_perturb(perturb_args);
    if (*report_cmd) return run_report(report);
    if (*review_export) return run_review_export(review_traces, review_out);
    if (*replay_cmd) return run_replay(replay_run, replay_config, replay_claim);
  } catch (const Error& e) {
    std::cerr << "advclaim: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? kExitConfig : kExitRuntime;
  }
  return kExitOk;
}
