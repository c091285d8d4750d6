#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/json.hpp"

namespace advclaim {

/// Ground truth of a claim. TrueClaim is the positive class (y = 0 in the
/// threat model's encoding, where y = 1 marks a false claim).
enum class GoldLabel { TrueClaim, FalseClaim };

/// Victim output label. Refusal covers declined or unparseable responses.
enum class Verdict { TrueClaim, FalseClaim, Refusal };

/// Result of label normalization; NotEnoughInfo is removed by the NEI filter.
enum class NormalizedLabel { TrueClaim, FalseClaim, NotEnoughInfo };

std::string_view to_string(GoldLabel label) noexcept;
std::string_view to_string(Verdict verdict) noexcept;
GoldLabel gold_label_from_string(std::string_view s);
Verdict verdict_from_string(std::string_view s);

[[nodiscard]] constexpr Verdict as_verdict(GoldLabel label) noexcept {
  return label == GoldLabel::TrueClaim ? Verdict::TrueClaim : Verdict::FalseClaim;
}

/// True when the verdict is a definite label that disagrees with gold.
[[nodiscard]] constexpr bool is_flip(Verdict verdict, GoldLabel gold) noexcept {
  return verdict != Verdict::Refusal && verdict != as_verdict(gold);
}

struct Claim {
  std::string id;
  std::string text;
  GoldLabel gold_label = GoldLabel::TrueClaim;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct VerificationResult {
  Verdict verdict = Verdict::Refusal;
  std::string justification;
  std::vector<std::string> evidence_refs;
  std::string raw_response;

  friend bool operator==(const VerificationResult&, const VerificationResult&) = default;
};

struct DatasetProvenance {
  std::string source_path;
  bool filter_nei = true;
  std::size_t nei_removed = 0;
};

struct ClaimSet {
  std::vector<Claim> claims;
  DatasetProvenance provenance;
  std::size_t positives = 0;
  std::size_t negatives = 0;

  [[nodiscard]] std::size_t size() const noexcept { return claims.size(); }
};

/// Case-folds and trims, then maps onto the fixed vocabulary:
///   supported | true | real                                -> TrueClaim
///   refuted | false | fake                                 -> FalseClaim
///   nei | not enough information | not enough info         -> NotEnoughInfo
/// Anything else throws ErrorKind::UnknownLabel.
NormalizedLabel map_label(std::string_view raw);

/// Parses one JSON Lines dataset record. `ordinal` (1-based) is used to
/// synthesize an id when the record has none.
/// Returns the claim or NotEnoughInfo via the out parameter.
Claim parse_claim_record(const Json& record, std::size_t ordinal, NormalizedLabel& label_out);

/// Loads a JSON Lines dataset. With filter_nei set, NEI rows are dropped;
/// without it, an NEI row is an UnknownLabel error since a ClaimSet is binary.
ClaimSet load_dataset(const std::filesystem::path& path, bool filter_nei);
ClaimSet load_dataset_from_string(std::string_view jsonl, bool filter_nei,
                                  std::string source_name = "<memory>");

/// Builds a ClaimSet from already-validated claims (counts derived).
ClaimSet make_claim_set(std::vector<Claim> claims, DatasetProvenance provenance = {});

Json to_json(const Claim& claim);
Claim claim_from_json(const Json& j);
Json to_json(const VerificationResult& result);
VerificationResult verification_result_from_json(const Json& j);

std::string trim(std::string_view s);

}  // namespace advclaim
