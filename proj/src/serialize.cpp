#include <fstream>
#include <sstream>

#include "advclaim/error.hpp"
#include "advclaim/trace.hpp"

namespace advclaim {

std::string_view to_string(FinalStatus status) noexcept {
  switch (status) {
    case FinalStatus::SuccessStrict: return "success_strict";
    case FinalStatus::SuccessRelaxed: return "success_relaxed";
    case FinalStatus::Failure: return "failure";
    case FinalStatus::SkippedBenignError: return "skipped_benign_error";
    case FinalStatus::SkippedBenignRefusal: return "skipped_benign_refusal";
  }
  return "";
}

FinalStatus final_status_from_string(std::string_view s) {
  for (auto st : {FinalStatus::SuccessStrict, FinalStatus::SuccessRelaxed, FinalStatus::Failure,
                  FinalStatus::SkippedBenignError, FinalStatus::SkippedBenignRefusal}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorKind::MalformedRecord, "unknown final status '" + std::string(s) + "'");
}

const AttackAttempt* AttackTrace::attempt_at(int iteration) const {
  for (const auto& a : attempts) {
    if (a.iteration == iteration) return &a;
  }
  return nullptr;
}

Json to_json(const RougeScores& s) {
  Json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

RougeScores rouge_scores_from_json(const Json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

namespace {

template <typename T, typename F>
Json optional_json(const std::optional<T>& v, F&& convert) {
  return v ? Json(convert(*v)) : Json(nullptr);
}

}  // namespace

Json to_json(const ValidityReport& r) {
  Json j;
  j["tier"] = std::string(to_string(r.tier));
  j["similarity"] = optional_json(r.similarity, [](double d) { return d; });
  j["nli_forward"] = optional_json(r.nli_forward, [](NliLabel l) { return std::string(to_string(l)); });
  j["nli_backward"] = optional_json(r.nli_backward, [](NliLabel l) { return std::string(to_string(l)); });
  j["justification_relevant"] = optional_json(r.justification_relevant, [](bool b) { return b; });
  j["reasons"] = r.reasons;
  return j;
}

ValidityReport validity_report_from_json(const Json& j) {
  ValidityReport r;
  r.tier = validity_tier_from_string(j.at("tier").get<std::string>());
  if (!j.at("similarity").is_null()) r.similarity = j["similarity"].get<double>();
  if (!j.at("nli_forward").is_null()) r.nli_forward = nli_label_from_string(j["nli_forward"].get<std::string>());
  if (!j.at("nli_backward").is_null()) r.nli_backward = nli_label_from_string(j["nli_backward"].get<std::string>());
  if (!j.at("justification_relevant").is_null()) r.justification_relevant = j["justification_relevant"].get<bool>();
  r.reasons = j.at("reasons").get<std::vector<std::string>>();
  return r;
}

Json to_json(const AttemptEvaluation& e) {
  Json j;
  j["verdict_flipped"] = e.verdict_flipped;
  j["justification_shift"] = to_json(e.justification_shift);
  j["evidence_changed"] = optional_json(e.evidence_changed, [](bool b) { return b; });
  j["category"] = std::string(to_string(e.category));
  j["notes"] = e.notes;
  return j;
}

AttemptEvaluation attempt_evaluation_from_json(const Json& j) {
  AttemptEvaluation e;
  e.verdict_flipped = j.at("verdict_flipped").get<bool>();
  e.justification_shift = rouge_scores_from_json(j.at("justification_shift"));
  if (!j.at("evidence_changed").is_null()) e.evidence_changed = j["evidence_changed"].get<bool>();
  e.category = attempt_category_from_string(j.at("category").get<std::string>());
  e.notes = j.at("notes").get<std::string>();
  return e;
}

Json to_json(const PlannerDecision& d) {
  Json j;
  j["action"] = std::string(to_string(d.action));
  j["next_strategy"] = d.next_strategy ? Json(std::string(d.next_strategy->variant_id)) : Json(nullptr);
  j["guidance"] = d.guidance;
  return j;
}

PlannerDecision planner_decision_from_json(const Json& j) {
  PlannerDecision d;
  d.action = planner_action_from_string(j.at("action").get<std::string>());
  if (!j.at("next_strategy").is_null()) d.next_strategy = &find_strategy(j["next_strategy"].get<std::string>());
  d.guidance = j.at("guidance").get<std::string>();
  return d;
}

Json to_json(const AttackAttempt& a) {
  Json j;
  j["iteration"] = a.iteration;
  j["strategy_family"] = std::string(to_string(a.strategy_family));
  j["strategy"] = a.strategy_variant;
  j["adversarial_text"] = a.adversarial_text;
  j["victim"] = to_json(a.victim_result);
  j["evaluation"] = to_json(a.evaluation);
  j["validity"] = to_json(a.validity);
  j["decision"] = to_json(a.decision);
  return j;
}

AttackAttempt attack_attempt_from_json(const Json& j) {
  AttackAttempt a;
  a.iteration = j.at("iteration").get<int>();
  a.strategy_family = strategy_family_from_string(j.at("strategy_family").get<std::string>());
  a.strategy_variant = j.at("strategy").get<std::string>();
  a.adversarial_text = j.at("adversarial_text").get<std::string>();
  a.victim_result = verification_result_from_json(j.at("victim"));
  a.evaluation = attempt_evaluation_from_json(j.at("evaluation"));
  a.validity = validity_report_from_json(j.at("validity"));
  a.decision = planner_decision_from_json(j.at("decision"));
  return a;
}

Json to_json(const AttackTrace& t) {
  Json j;
  j["claim"] = to_json(t.claim);
  j["benign"] = to_json(t.benign);
  Json attempts = Json::array();
  for (const auto& a : t.attempts) attempts.push_back(to_json(a));
  j["attempts"] = std::move(attempts);
  j["final_status"] = std::string(to_string(t.final_status));
  j["final_adversarial_text"] = optional_json(t.final_adversarial_text, [](const std::string& s) { return s; });
  j["final_iteration"] = optional_json(t.final_iteration, [](int i) { return i; });
  j["final_validity"] = t.final_validity ? to_json(*t.final_validity) : Json(nullptr);
  j["manifest_ref"] = t.manifest_ref;
  j["error"] = optional_json(t.error, [](const std::string& s) { return s; });
  return j;
}

AttackTrace attack_trace_from_json(const Json& j) {
  AttackTrace t;
  t.claim = claim_from_json(j.at("claim"));
  t.benign = verification_result_from_json(j.at("benign"));
  for (const auto& a : j.at("attempts")) t.attempts.push_back(attack_attempt_from_json(a));
  t.final_status = final_status_from_string(j.at("final_status").get<std::string>());
  if (!j.at("final_adversarial_text").is_null()) t.final_adversarial_text = j["final_adversarial_text"].get<std::string>();
  if (!j.at("final_iteration").is_null()) t.final_iteration = j["final_iteration"].get<int>();
  if (!j.at("final_validity").is_null()) t.final_validity = validity_report_from_json(j["final_validity"]);
  t.manifest_ref = j.at("manifest_ref");
  if (!j.at("error").is_null()) t.error = j["error"].get<std::string>();
  return t;
}

std::string trace_line(const AttackTrace& trace) { return to_json(trace).dump(); }

std::vector<AttackTrace> parse_traces(std::string_view jsonl) {
  std::vector<AttackTrace> traces;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      traces.push_back(attack_trace_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::MalformedRecord, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return traces;
}

std::vector<AttackTrace> load_traces(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open traces " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_traces(buffer.str());
}

}  // namespace advclaim
