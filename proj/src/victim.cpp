#include "advclaim/victim.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "advclaim/error.hpp"
#include "advclaim/prompts.hpp"
#include "advclaim/text.hpp"

namespace advclaim {

std::string_view to_string(Stance stance) noexcept {
  return stance == Stance::Supports ? "supports" : "refutes";
}

Stance stance_from_string(std::string_view s) {
  std::string lowered = text::to_lower_ascii(s);
  if (lowered == "supports" || lowered == "support") return Stance::Supports;
  if (lowered == "refutes" || lowered == "refute") return Stance::Refutes;
  throw Error(ErrorKind::MalformedRecord, "unknown stance '" + std::string(s) + "'");
}

std::vector<EvidenceDoc> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open corpus " + path.string());
  std::vector<EvidenceDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = Json::parse(line);
      EvidenceDoc doc;
      doc.id = j.at("id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      doc.stance = stance_from_string(j.at("stance").get<std::string>());
      doc.topic_key = j.value("topic_key", "");
      if (trim(doc.text).empty()) {
        throw Error(ErrorKind::MalformedRecord, "evidence text is empty");
      }
      docs.push_back(std::move(doc));
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::MalformedRecord,
                  path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<std::string> retrieval_terms(std::string_view text_in, const SimulatedAfcConfig& config) {
  std::vector<std::string> terms;
  for (const auto& token : text::word_tokens(text_in)) {
    std::string lowered = text::to_lower_ascii(token);
    if (text::is_stopword(lowered)) continue;
    if (std::find(config.extra_stopwords.begin(), config.extra_stopwords.end(), lowered) !=
        config.extra_stopwords.end()) {
      continue;
    }
    terms.push_back(config.stemming ? text::stem(lowered) : lowered);
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

namespace {

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  const std::size_t union_size = a.size() + b.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(union_size);
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string render_raw(const VerificationResult& r) {
  std::string raw = "VERDICT: ";
  raw += r.verdict == Verdict::TrueClaim ? "TRUE" : "FALSE";
  raw += "\nJUSTIFICATION: ";
  raw += r.justification;
  return raw;
}

}  // namespace

std::vector<ScoredDoc> simulated_retrieve(std::string_view claim_text, const SimulatedAfcConfig& config) {
  const auto claim_terms = retrieval_terms(claim_text, config);
  std::vector<ScoredDoc> scored;
  for (const auto& doc : config.corpus) {
    double score = jaccard(claim_terms, retrieval_terms(doc.text, config));
    if (score >= config.min_overlap) scored.push_back({doc, score});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc.id < b.doc.id;
  });
  if (scored.size() > config.top_k) scored.resize(config.top_k);
  return scored;
}

VerificationResult simulated_verdict(const std::vector<ScoredDoc>& docs) {
  VerificationResult r;
  if (docs.empty()) {
    r.verdict = Verdict::FalseClaim;
    r.justification = "no evidence retrieved for the claim; unverifiable claims are treated as false.";
    r.raw_response = render_raw(r);
    return r;
  }
  double support = 0.0;
  double refute = 0.0;
  for (const auto& d : docs) {
    (d.doc.stance == Stance::Supports ? support : refute) += d.score;
    r.evidence_refs.push_back(d.doc.id);
  }
  r.verdict = support > refute ? Verdict::TrueClaim : Verdict::FalseClaim;
  std::string j = "Weighted evidence: supports " + fixed3(support) + ", refutes " + fixed3(refute) + ".";
  for (const auto& d : docs) {
    j += " Evidence " + d.doc.id + " " + std::string(to_string(d.doc.stance)) + " the claim (score " +
         fixed3(d.score) + "): " + d.doc.text;
  }
  r.justification = std::move(j);
  r.raw_response = render_raw(r);
  return r;
}

namespace {

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Drops markdown emphasis so "**VERDICT:** TRUE" parses like "VERDICT: TRUE".
std::string strip_markup(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '*' && c != '_' && c != '#' && c != '`') out += c;
  }
  return trim(out);
}

}  // namespace

ParsedVerdict parse_verdict(std::string_view raw) {
  ParsedVerdict parsed;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t end = raw.find('\n', pos);
    if (end == std::string_view::npos) end = raw.size();
    const std::string line = strip_markup(raw.substr(pos, end - pos));
    const std::size_t next = end + 1;
    const std::string upper = upper_ascii(line);
    if (upper.rfind("VERDICT", 0) == 0) {
      std::string rest = trim(std::string_view(upper).substr(7));
      if (rest.empty() || rest.front() != ':') {
        pos = next;
        continue;
      }
      rest = trim(std::string_view(rest).substr(1));
      while (!rest.empty() && (rest.back() == '.' || rest.back() == '!')) rest.pop_back();
      if (rest == "TRUE") {
        parsed.verdict = Verdict::TrueClaim;
      } else if (rest == "FALSE") {
        parsed.verdict = Verdict::FalseClaim;
      } else {
        return parsed;
      }
      std::string_view remainder = next <= raw.size() ? raw.substr(next) : std::string_view{};
      const std::string remainder_upper = upper_ascii(remainder);
      const auto marker = remainder_upper.find("JUSTIFICATION");
      if (marker != std::string::npos) {
        auto colon = remainder.find(':', marker);
        remainder = colon == std::string_view::npos ? remainder.substr(marker + 13)
                                                    : remainder.substr(colon + 1);
      }
      while (!remainder.empty() && (remainder.front() == '*' || remainder.front() == '_')) {
        remainder.remove_prefix(1);
      }
      parsed.justification = trim(remainder);
      return parsed;
    }
    if (end == raw.size()) break;
    pos = next;
  }
  return parsed;
}

VerificationResult SimulatedVictim::verify(std::string_view claim_text) {
  if (trim(claim_text).empty()) throw Error(ErrorKind::EmptyClaim, "claim text is empty");
  ++requests_;
  return simulated_verdict(simulated_retrieve(claim_text, config_));
}

VerificationResult LiveVictim::verify(std::string_view claim_text) {
  if (trim(claim_text).empty()) throw Error(ErrorKind::EmptyClaim, "claim text is empty");
  const ChatMessage messages[] = {
      {Role::System, std::string(prompts::kSurrogateSystem)},
      {Role::User, "Claim: " + std::string(claim_text)},
  };
  VerificationResult r;
  r.raw_response = gateway_->complete_stateless(messages);
  auto parsed = parse_verdict(r.raw_response);
  r.verdict = parsed.verdict;
  r.justification = std::move(parsed.justification);
  return r;
}

}  // namespace advclaim
