#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "advclaim/domain.hpp"
#include "advclaim/gateway.hpp"

namespace advclaim {

enum class Stance { Supports, Refutes };
std::string_view to_string(Stance stance) noexcept;
Stance stance_from_string(std::string_view s);

struct EvidenceDoc {
  std::string id;
  std::string text;
  Stance stance = Stance::Supports;
  std::string topic_key;
};

struct ScoredDoc {
  EvidenceDoc doc;
  double score = 0.0;
};

struct SimulatedAfcConfig {
  std::vector<EvidenceDoc> corpus;
  std::size_t top_k = 3;
  double min_overlap = 0.2;
  bool stemming = true;
  /// Added to the embedded stopword list.
  std::vector<std::string> extra_stopwords;
};

/// Corpus file: JSON Lines of {id, text, stance, topic_key}.
std::vector<EvidenceDoc> load_corpus(const std::filesystem::path& path);

/// Lowercased, stopword-filtered (stemmed unless disabled) unique tokens.
std::vector<std::string> retrieval_terms(std::string_view text, const SimulatedAfcConfig& config);

/// Jaccard overlap of term sets; docs with score >= min_overlap, sorted by
/// (score desc, id asc), truncated to top_k.
std::vector<ScoredDoc> simulated_retrieve(std::string_view claim_text, const SimulatedAfcConfig& config);

/// Stance with the larger score-weighted sum wins; empty or tied evidence
/// yields FalseClaim. The justification lists every doc with stance and score.
VerificationResult simulated_verdict(const std::vector<ScoredDoc>& docs);

struct ParsedVerdict {
  Verdict verdict = Verdict::Refusal;
  std::string justification;
};

/// Total function over arbitrary text. The first line starting with
/// `VERDICT:` decides; anything other than a bare TRUE/FALSE there is a Refusal.
ParsedVerdict parse_verdict(std::string_view raw);

/// f(c) -> (y, j). Implementations keep no memory between calls.
class Victim {
 public:
  virtual ~Victim() = default;
  virtual VerificationResult verify(std::string_view claim_text) = 0;
  [[nodiscard]] virtual std::uint64_t request_count() const noexcept = 0;
  [[nodiscard]] virtual std::string_view kind() const noexcept = 0;
};

class SimulatedVictim final : public Victim {
 public:
  explicit SimulatedVictim(SimulatedAfcConfig config) : config_(std::move(config)) {}
  VerificationResult verify(std::string_view claim_text) override;
  [[nodiscard]] std::uint64_t request_count() const noexcept override { return requests_.load(); }
  [[nodiscard]] std::string_view kind() const noexcept override { return "simulated"; }
  [[nodiscard]] const SimulatedAfcConfig& config() const noexcept { return config_; }

 private:
  SimulatedAfcConfig config_;
  std::atomic<std::uint64_t> requests_{0};
};

/// Surrogate fact-checker reached through a chat backend with the
/// VERDICT/JUSTIFICATION prompt; every call is a fresh two-message request.
class LiveVictim final : public Victim {
 public:
  explicit LiveVictim(std::shared_ptr<Gateway> gateway) : gateway_(std::move(gateway)) {}
  VerificationResult verify(std::string_view claim_text) override;
  [[nodiscard]] std::uint64_t request_count() const noexcept override {
    return gateway_->request_count();
  }
  [[nodiscard]] std::string_view kind() const noexcept override { return "live"; }

 private:
  std::shared_ptr<Gateway> gateway_;
};

}  // namespace advclaim
