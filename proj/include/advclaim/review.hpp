#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/trace.hpp"

namespace advclaim {

inline constexpr std::string_view kReviewFormat = "advclaim-review-queue";
inline constexpr int kReviewFormatVersion = 1;

/// One relaxed-tier success awaiting a human decision on factual intent.
struct ReviewRecord {
  std::string claim_id;
  std::string benign_text;
  std::string adversarial_text;
  std::optional<double> similarity;
  std::optional<std::string> nli_forward;
  std::optional<std::string> nli_backward;
  std::string benign_justification;
  std::string adversarial_justification;
  std::string reviewer_decision;  // filled in by the reviewer
  std::string reviewer_notes;

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

std::vector<ReviewRecord> review_records(std::span<const AttackTrace> traces);

/// JSON Lines: a header object, then one record per SuccessRelaxed trace
/// sorted by claim id.
std::string export_review_queue(std::span<const AttackTrace> traces);
std::string render_review_queue(std::span<const ReviewRecord> records);
/// Throws MalformedRecord on a missing/foreign header or bad record.
std::vector<ReviewRecord> import_review_queue(std::string_view jsonl);

}  // namespace advclaim
