#include "advclaim/domain.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "advclaim/error.hpp"

namespace advclaim {

std::string_view to_string(GoldLabel label) noexcept {
  return label == GoldLabel::TrueClaim ? "true" : "false";
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::TrueClaim: return "true";
    case Verdict::FalseClaim: return "false";
    case Verdict::Refusal: return "refusal";
  }
  return "refusal";
}

GoldLabel gold_label_from_string(std::string_view s) {
  switch (map_label(s)) {
    case NormalizedLabel::TrueClaim: return GoldLabel::TrueClaim;
    case NormalizedLabel::FalseClaim: return GoldLabel::FalseClaim;
    case NormalizedLabel::NotEnoughInfo: break;
  }
  throw Error(ErrorKind::UnknownLabel, "NEI is not a gold label");
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "true") return Verdict::TrueClaim;
  if (s == "false") return Verdict::FalseClaim;
  if (s == "refusal") return Verdict::Refusal;
  throw Error(ErrorKind::MalformedRecord, "unknown verdict '" + std::string(s) + "'");
}

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

NormalizedLabel map_label(std::string_view raw) {
  std::string folded = trim(raw);
  std::transform(folded.begin(), folded.end(), folded.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  if (folded == "supported" || folded == "true" || folded == "real") {
    return NormalizedLabel::TrueClaim;
  }
  if (folded == "refuted" || folded == "false" || folded == "fake") {
    return NormalizedLabel::FalseClaim;
  }
  if (folded == "nei" || folded == "not enough information" || folded == "not enough info") {
    return NormalizedLabel::NotEnoughInfo;
  }
  throw Error(ErrorKind::UnknownLabel, "label '" + std::string(raw) + "' is outside the vocabulary");
}

namespace {

std::string ordinal_id(std::size_t ordinal) {
  std::string digits = std::to_string(ordinal);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return digits;
}

const Json& require_field(const Json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) {
    throw Error(ErrorKind::MissingField, std::string("record lacks '") + name + "'");
  }
  return *it;
}

std::string require_string(const Json& value, const char* name) {
  if (!value.is_string()) {
    throw Error(ErrorKind::MalformedRecord, std::string("field '") + name + "' must be a string");
  }
  return value.get<std::string>();
}

}  // namespace

Claim parse_claim_record(const Json& record, std::size_t ordinal, NormalizedLabel& label_out) {
  if (!record.is_object()) {
    throw Error(ErrorKind::MalformedRecord, "record is not a JSON object");
  }
  Claim claim;
  if (auto it = record.find("id"); it != record.end() && !it->is_null()) {
    claim.id = it->is_string() ? it->get<std::string>() : it->dump();
  } else {
    claim.id = ordinal_id(ordinal);
  }
  claim.text = require_string(require_field(record, "claim"), "claim");
  if (trim(claim.text).empty()) {
    throw Error(ErrorKind::MalformedRecord, "claim text is empty");
  }
  label_out = map_label(require_string(require_field(record, "label"), "label"));
  if (label_out != NormalizedLabel::NotEnoughInfo) {
    claim.gold_label = label_out == NormalizedLabel::TrueClaim ? GoldLabel::TrueClaim
                                                               : GoldLabel::FalseClaim;
  }
  if (auto it = record.find("metadata"); it != record.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw Error(ErrorKind::MalformedRecord, "metadata must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      claim.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  return claim;
}

ClaimSet make_claim_set(std::vector<Claim> claims, DatasetProvenance provenance) {
  ClaimSet set;
  set.provenance = std::move(provenance);
  std::unordered_set<std::string> seen;
  for (const auto& claim : claims) {
    if (!seen.insert(claim.id).second) {
      throw Error(ErrorKind::MalformedRecord, "duplicate claim id '" + claim.id + "'");
    }
    if (trim(claim.text).empty()) {
      throw Error(ErrorKind::MalformedRecord, "claim '" + claim.id + "' has empty text");
    }
    if (claim.gold_label == GoldLabel::TrueClaim) {
      ++set.positives;
    } else {
      ++set.negatives;
    }
  }
  set.claims = std::move(claims);
  return set;
}

ClaimSet load_dataset_from_string(std::string_view jsonl, bool filter_nei, std::string source_name) {
  std::vector<Claim> claims;
  DatasetProvenance provenance{std::move(source_name), filter_nei, 0};

  std::size_t line_no = 0;
  std::size_t ordinal = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    ++ordinal;
    try {
      Json record = Json::parse(line);
      NormalizedLabel label{};
      Claim claim = parse_claim_record(record, ordinal, label);
      if (label == NormalizedLabel::NotEnoughInfo) {
        if (!filter_nei) {
          throw Error(ErrorKind::UnknownLabel, "NEI record present with filtering disabled");
        }
        ++provenance.nei_removed;
        continue;
      }
      claims.push_back(std::move(claim));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (claims.empty()) {
    throw Error(ErrorKind::EmptyDataset, "no claims in " + provenance.source_path + " after filtering");
  }
  return make_claim_set(std::move(claims), std::move(provenance));
}

ClaimSet load_dataset(const std::filesystem::path& path, bool filter_nei) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open dataset " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_dataset_from_string(buffer.str(), filter_nei, path.string());
}

Json to_json(const Claim& claim) {
  Json j;
  j["id"] = claim.id;
  j["claim"] = claim.text;
  j["label"] = std::string(to_string(claim.gold_label));
  if (!claim.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : claim.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
  }
  return j;
}

Claim claim_from_json(const Json& j) {
  NormalizedLabel label{};
  Claim claim = parse_claim_record(j, 0, label);
  if (label == NormalizedLabel::NotEnoughInfo) {
    throw Error(ErrorKind::UnknownLabel, "NEI is not a gold label");
  }
  return claim;
}

Json to_json(const VerificationResult& result) {
  Json j;
  j["verdict"] = std::string(to_string(result.verdict));
  j["justification"] = result.justification;
  j["evidence_refs"] = result.evidence_refs;
  j["raw_response"] = result.raw_response;
  return j;
}

VerificationResult verification_result_from_json(const Json& j) {
  VerificationResult r;
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.justification = j.at("justification").get<std::string>();
  r.evidence_refs = j.at("evidence_refs").get<std::vector<std::string>>();
  r.raw_response = j.at("raw_response").get<std::string>();
  return r;
}

}  // namespace advclaim
