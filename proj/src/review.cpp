#include "advclaim/review.hpp"

#include <algorithm>
#include <sstream>

#include "advclaim/error.hpp"

namespace advclaim {

std::vector<ReviewRecord> review_records(std::span<const AttackTrace> traces) {
  std::vector<ReviewRecord> records;
  for (const auto& t : traces) {
    if (t.final_status != FinalStatus::SuccessRelaxed || !t.final_iteration) continue;
    const AttackAttempt* a = t.attempt_at(*t.final_iteration);
    if (!a) continue;
    const ValidityReport& v = t.final_validity ? *t.final_validity : a->validity;
    ReviewRecord r;
    r.claim_id = t.claim.id;
    r.benign_text = t.claim.text;
    r.adversarial_text = a->adversarial_text;
    r.similarity = v.similarity;
    if (v.nli_forward) r.nli_forward = std::string(to_string(*v.nli_forward));
    if (v.nli_backward) r.nli_backward = std::string(to_string(*v.nli_backward));
    r.benign_justification = t.benign.justification;
    r.adversarial_justification = a->victim_result.justification;
    records.push_back(std::move(r));
  }
  std::sort(records.begin(), records.end(),
            [](const ReviewRecord& x, const ReviewRecord& y) { return x.claim_id < y.claim_id; });
  return records;
}

std::string render_review_queue(std::span<const ReviewRecord> records) {
  std::string out;
  Json header;
  header["format"] = std::string(kReviewFormat);
  header["version"] = kReviewFormatVersion;
  header["records"] = records.size();
  out += header.dump() + "\n";
  for (const auto& r : records) {
    Json j;
    j["claim_id"] = r.claim_id;
    j["benign_text"] = r.benign_text;
    j["adversarial_text"] = r.adversarial_text;
    j["similarity"] = r.similarity ? Json(*r.similarity) : Json(nullptr);
    j["nli_forward"] = r.nli_forward ? Json(*r.nli_forward) : Json(nullptr);
    j["nli_backward"] = r.nli_backward ? Json(*r.nli_backward) : Json(nullptr);
    j["benign_justification"] = r.benign_justification;
    j["adversarial_justification"] = r.adversarial_justification;
    j["reviewer_decision"] = r.reviewer_decision;
    j["reviewer_notes"] = r.reviewer_notes;
    out += j.dump() + "\n";
  }
  return out;
}

std::string export_review_queue(std::span<const AttackTrace> traces) {
  return render_review_queue(review_records(traces));
}

std::vector<ReviewRecord> import_review_queue(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::vector<ReviewRecord> records;
  bool header_seen = false;
  try {
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      Json j = Json::parse(line);
      if (!header_seen) {
        if (j.value("format", "") != kReviewFormat) {
          throw Error(ErrorKind::MalformedRecord, "missing review-queue header");
        }
        header_seen = true;
        continue;
      }
      ReviewRecord r;
      r.claim_id = j.at("claim_id").get<std::string>();
      r.benign_text = j.at("benign_text").get<std::string>();
      r.adversarial_text = j.at("adversarial_text").get<std::string>();
      if (!j.at("similarity").is_null()) r.similarity = j["similarity"].get<double>();
      if (!j.at("nli_forward").is_null()) r.nli_forward = j["nli_forward"].get<std::string>();
      if (!j.at("nli_backward").is_null()) r.nli_backward = j["nli_backward"].get<std::string>();
      r.benign_justification = j.at("benign_justification").get<std::string>();
      r.adversarial_justification = j.at("adversarial_justification").get<std::string>();
      r.reviewer_decision = j.at("reviewer_decision").get<std::string>();
      r.reviewer_notes = j.at("reviewer_notes").get<std::string>();
      records.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::MalformedRecord, std::string("review queue: ") + e.what());
  }
  if (!header_seen) throw Error(ErrorKind::MalformedRecord, "empty review queue file");
  return records;
}

}  // namespace advclaim
