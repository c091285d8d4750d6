#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "advclaim/error.hpp"
#include "advclaim/prompts.hpp"
#include "advclaim/victim.hpp"
#include "fakes.hpp"

using namespace advclaim;

namespace {

const std::filesystem::path kGolden = std::filesystem::path(ADVCLAIM_FIXTURE_DIR) / "golden";

SimulatedAfcConfig greek_config() {
  SimulatedAfcConfig c;
  c.corpus = {{"A", "alpha beta gamma epsilon", Stance::Supports, "greek"},
              {"B", "alpha zeta eta theta", Stance::Refutes, "greek"}};
  c.min_overlap = 0.1;
  return c;
}

SimulatedAfcConfig golden_config() {
  SimulatedAfcConfig c;
  c.corpus = load_corpus(kGolden / "corpus.jsonl");
  return c;
}

}  // namespace

TEST(Retrieve, HandComputedJaccard) {
  auto cfg = greek_config();
  const auto all = simulated_retrieve("alpha beta gamma delta", cfg);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].doc.id, "A");
  EXPECT_DOUBLE_EQ(all[0].score, 3.0 / 5.0);
  EXPECT_EQ(all[1].doc.id, "B");
  EXPECT_DOUBLE_EQ(all[1].score, 1.0 / 7.0);
  cfg.top_k = 1;
  const auto top = simulated_retrieve("alpha beta gamma delta", cfg);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].doc.id, "A");
}

TEST(Retrieve, EmptyCorpus) {
  SimulatedAfcConfig cfg;
  EXPECT_TRUE(simulated_retrieve("anything at all", cfg).empty());
}

TEST(Retrieve, WordOrderDoesNotMatter) {
  const auto cfg = golden_config();
  const auto a = simulated_retrieve("The Eiffel Tower in Paris was completed in 1889 for the World Fair.", cfg);
  const auto b = simulated_retrieve("In 1889, for the World Fair, the Eiffel Tower in Paris was completed.", cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].doc.id, b[i].doc.id);
    EXPECT_EQ(a[i].score, b[i].score);
  }
}

TEST(Retrieve, DispersionDropsTheSupportingDoc) {
  const auto cfg = golden_config();
  const auto before = simulated_retrieve("The Eiffel Tower in Paris was completed in 1889 for the World Fair.", cfg);
  ASSERT_FALSE(before.empty());
  EXPECT_EQ(before[0].doc.id, "doc-eiffel-01");
  const auto after = simulated_retrieve(
      "The Eiffel Tower in Paris, a famous landmark, was completed in 1889 for the World Fair.", cfg);
  EXPECT_TRUE(std::none_of(after.begin(), after.end(), [](const ScoredDoc& d) { return d.doc.id == "doc-eiffel-01"; }));
}

TEST(Retrieve, ScoresAreSymmetric) {
  SimulatedAfcConfig cfg;
  const std::string x = "honey found in egyptian tombs";
  const std::string y = "egyptian tombs held edible honey pots";
  cfg.corpus = {{"y", y, Stance::Supports, ""}};
  cfg.min_overlap = 0.0;
  const double xy = simulated_retrieve(x, cfg).at(0).score;
  cfg.corpus = {{"x", x, Stance::Supports, ""}};
  const double yx = simulated_retrieve(y, cfg).at(0).score;
  EXPECT_EQ(xy, yx);
}

TEST(Verdict, WeightedStance) {
  const EvidenceDoc a{"A", "a", Stance::Supports, ""};
  const EvidenceDoc b{"B", "b", Stance::Refutes, ""};
  auto r = simulated_verdict({{a, 0.6}});
  EXPECT_EQ(r.verdict, Verdict::TrueClaim);
  EXPECT_EQ(r.evidence_refs, std::vector<std::string>{"A"});
  EXPECT_NE(r.justification.find("A"), std::string::npos);

  EXPECT_EQ(simulated_verdict({{b, 0.5}, {a, 0.3}}).verdict, Verdict::FalseClaim);
  EXPECT_EQ(simulated_verdict({{a, 0.4}, {b, 0.4}}).verdict, Verdict::FalseClaim);

  auto empty = simulated_verdict({});
  EXPECT_EQ(empty.verdict, Verdict::FalseClaim);
  EXPECT_TRUE(empty.evidence_refs.empty());
  EXPECT_NE(empty.justification.find("no evidence retrieved"), std::string::npos);
}

TEST(Verdict, RawResponseParsesBack) {
  const auto cfg = golden_config();
  SimulatedVictim victim(cfg);
  const auto r = victim.verify("Water boils at 100 degrees Celsius at sea level.");
  const auto parsed = parse_verdict(r.raw_response);
  EXPECT_EQ(parsed.verdict, r.verdict);
  EXPECT_EQ(parsed.justification, r.justification);
}

TEST(SimulatedVictim, SupportsOnlyOverlapGivesTrueCitingDoc) {
  SimulatedVictim victim(greek_config());
  const auto r = victim.verify("alpha beta gamma");
  EXPECT_EQ(r.verdict, Verdict::TrueClaim);
  ASSERT_FALSE(r.evidence_refs.empty());
  EXPECT_EQ(r.evidence_refs[0], "A");
  EXPECT_EQ(victim.request_count(), 1u);
}

TEST(SimulatedVictim, IndependentOfCallOrder) {
  const auto cfg = golden_config();
  const std::vector<std::string> claims = {
      "The Eiffel Tower in Paris was completed in 1889 for the World Fair.",
      "The Great Wall of China is visible from the Moon with the naked eye.",
      "Honey found in ancient Egyptian tombs was still edible.",
      "The Sahara is the largest desert on Earth.",
      "Water boils at 100 degrees Celsius at sea level.",
  };
  SimulatedVictim reference(cfg);
  std::vector<std::string> expected;
  for (const auto& c : claims) expected.push_back(to_json(reference.verify(c)).dump());
  std::vector<std::size_t> order(claims.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937 rng(5);
  for (int round = 0; round < 10; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    SimulatedVictim victim(cfg);
    for (auto i : order) EXPECT_EQ(to_json(victim.verify(claims[i])).dump(), expected[i]);
  }
}

TEST(ParseVerdict, Grammar) {
  auto p = parse_verdict("verdict: true\njustification: x");
  EXPECT_EQ(p.verdict, Verdict::TrueClaim);
  EXPECT_EQ(p.justification, "x");

  p = parse_verdict("VERDICT: FALSE");
  EXPECT_EQ(p.verdict, Verdict::FalseClaim);
  EXPECT_EQ(p.justification, "");

  p = parse_verdict("**VERDICT:** TRUE\n**JUSTIFICATION:** found it");
  EXPECT_EQ(p.verdict, Verdict::TrueClaim);
  EXPECT_EQ(p.justification, "found it");

  EXPECT_EQ(parse_verdict("As an assistant I cannot verify").verdict, Verdict::Refusal);
  EXPECT_EQ(parse_verdict("VERDICT: MOSTLY TRUE").verdict, Verdict::Refusal);
  EXPECT_EQ(parse_verdict("").verdict, Verdict::Refusal);
}

TEST(ParseVerdict, NeverThrowsOnArbitraryBytes) {
  std::mt19937_64 rng(17);
  const std::string pieces[] = {"VERDICT", ":", "TRUE", "FALSE", "\n", "JUSTIFICATION", " ", "*", "\xc3\xa9", "x"};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) s += pieces[rng() % std::size(pieces)];
    EXPECT_NO_THROW(parse_verdict(s));
  }
}

namespace {

std::shared_ptr<Gateway> replay_victim_gateway(const std::string& claim, const std::string& reply) {
  BackendConfig cfg;
  cfg.model = "surrogate";
  cfg.mode = BackendMode::Replay;
  auto cassette = Cassette::in_memory();
  const std::vector<ChatMessage> msgs = {{Role::System, std::string(prompts::kSurrogateSystem)},
                                         {Role::User, "Claim: " + claim}};
  const Json req = build_chat_request(cfg.model, cfg.temperature, msgs);
  cassette->record(request_digest(req), req, reply);
  return std::make_shared<Gateway>(cfg, cassette);
}

}  // namespace

TEST(LiveVictim, ReplayedVerdict) {
  LiveVictim victim(replay_victim_gateway("X", "VERDICT: FALSE\nJUSTIFICATION: no record exists"));
  const auto r = victim.verify("X");
  EXPECT_EQ(r.verdict, Verdict::FalseClaim);
  EXPECT_EQ(r.justification, "no record exists");
  EXPECT_EQ(r.raw_response, "VERDICT: FALSE\nJUSTIFICATION: no record exists");
}

TEST(LiveVictim, ReplayedRefusalKeepsRawText) {
  LiveVictim victim(replay_victim_gateway("Y", "I cannot determine this."));
  const auto r = victim.verify("Y");
  EXPECT_EQ(r.verdict, Verdict::Refusal);
  EXPECT_EQ(r.raw_response, "I cannot determine this.");
}

TEST(LiveVictim, EveryCallIsTwoMessages) {
  auto transport = std::make_shared<fakes::RecordingTransport>(
      [](const Json&) { return std::string("VERDICT: TRUE\nJUSTIFICATION: ok"); });
  BackendConfig cfg;
  cfg.endpoint = "unused";
  auto gw = std::make_shared<Gateway>(cfg, nullptr, transport);
  LiveVictim victim(gw);
  victim.verify("first claim");
  victim.verify("second claim");
  for (const auto& req : transport->requests()) {
    ASSERT_EQ(req.at("messages").size(), 2u);
    EXPECT_EQ(req.at("messages").dump().find("first claim") == std::string::npos ||
                  req.at("messages").dump().find("second claim") == std::string::npos,
              true);
  }
}

TEST(Corpus, MalformedLineIsRejected) {
  const auto path = std::filesystem::temp_directory_path() / "advclaim_bad_corpus.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"a","text":"t","stance":"supports"})" << "\n" << R"({"id":"b","text":"t","stance":"maybe"})"
        << "\n";
  }
  EXPECT_THROW(load_corpus(path), Error);
}
