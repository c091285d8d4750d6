#include "advclaim/strategy.hpp"

#include <array>

#include "advclaim/domain.hpp"
#include "advclaim/error.hpp"

namespace advclaim {

namespace {

constexpr std::string_view kConstraints =
    "Preserve the factual intent of the original claim; do not introduce falsehoods, "
    "do not negate or reverse the asserted fact, and keep every named fact verifiable.";

constexpr std::array<StrategyDescriptor, 10> kTaxonomy = {{
    {StrategyFamily::SearchMisguidance, "low_frequency_synonym",
     "low-frequency synonym introduction",
     "Swap common nouns, verbs and descriptors for rare, formal or uncommon synonyms with the "
     "same meaning. The wording should drift away from the phrasing a typical search query "
     "would use while the meaning stays identical.",
     kConstraints},
    {StrategyFamily::SearchMisguidance, "non_standard_entity_reference",
     "non-standard entity referencing",
     "Replace canonical names of people, places and organisations with descriptive phrases, "
     "metonymy or role-based identifiers. A human reader must still identify each entity "
     "without ambiguity.",
     kConstraints},
    {StrategyFamily::SearchMisguidance, "redundant_background",
     "redundant background information injection",
     "Add true but tangential background details around the core assertion. The extra "
     "details must not change whether the claim is true, only introduce distracting keywords.",
     kConstraints},
    {StrategyFamily::SearchMisguidance, "keyword_dispersion", "keyword dispersion",
     "Restructure the claim so its core keywords are spread over several clauses and separated "
     "by connective phrases. Lower the density of the key terms without removing the fact.",
     kConstraints},
    {StrategyFamily::ReasoningDisruption, "irrelevant_valid_statements",
     "injecting factually irrelevant but valid statements",
     "Place one or two neutral, factually correct statements before or after the core claim. "
     "They should be unrelated to what is being verified and leave the core claim untouched.",
     kConstraints},
    {StrategyFamily::ReasoningDisruption, "syntactic_complexity",
     "increasing syntactic complexity",
     "Rewrite the claim with embedded clauses, nested structure or parenthetical remarks. "
     "The meaning must be unchanged; only parsing effort should grow.",
     kConstraints},
    {StrategyFamily::ReasoningDisruption, "conditional_speculative",
     "introducing conditional or speculative phrasing",
     "Frame the claim inside a conditional or hypothetical construction whose overall truth "
     "value equals that of the original assertion.",
     kConstraints},
    {StrategyFamily::ReasoningDisruption, "double_negation", "employing double negation structures",
     "Express the claim through a double negation or another logically redundant construction "
     "that is equivalent to the original statement.",
     kConstraints},
    {StrategyFamily::StructuralEscalation, "indirect_entity_decomposition",
     "decomposing explicit entities into indirect references",
     "Replace direct entity mentions with descriptions that go through an intermediate concept "
     "or attribute, so identifying the entity takes more than one reasoning step.",
     kConstraints},
    {StrategyFamily::StructuralEscalation, "compound_relational",
     "rephrasing atomic facts as compound relational statements",
     "Turn the single fact into a compound statement built from several linked relations. The "
     "underlying fact must stay the same but verifying it should require combining hops.",
     kConstraints},
}};

std::string_view family_title(StrategyFamily family) {
  switch (family) {
    case StrategyFamily::SearchMisguidance: return "search engine misguidance";
    case StrategyFamily::ReasoningDisruption: return "LLM reasoning disruption";
    case StrategyFamily::StructuralEscalation: return "structural complexity escalation";
  }
  return "";
}

}  // namespace

std::string_view to_string(StrategyFamily family) noexcept {
  switch (family) {
    case StrategyFamily::SearchMisguidance: return "search_misguidance";
    case StrategyFamily::ReasoningDisruption: return "reasoning_disruption";
    case StrategyFamily::StructuralEscalation: return "structural_escalation";
  }
  return "";
}

StrategyFamily strategy_family_from_string(std::string_view s) {
  for (auto f : {StrategyFamily::SearchMisguidance, StrategyFamily::ReasoningDisruption,
                 StrategyFamily::StructuralEscalation}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown strategy family '" + std::string(s) + "'");
}

std::span<const StrategyDescriptor> taxonomy() noexcept { return kTaxonomy; }

const StrategyDescriptor& find_strategy(std::string_view variant_id) {
  for (const auto& d : kTaxonomy) {
    if (d.variant_id == variant_id) return d;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown strategy variant '" + std::string(variant_id) + "'");
}

std::vector<const StrategyDescriptor*> family_variants(StrategyFamily family) {
  std::vector<const StrategyDescriptor*> out;
  for (const auto& d : kTaxonomy) {
    if (d.family == family) out.push_back(&d);
  }
  return out;
}

GenerationInstruction render_instruction(const StrategyDescriptor& strategy,
                                         std::string_view claim_text,
                                         const std::optional<std::string>& feedback) {
  if (trim(claim_text).empty()) {
    throw Error(ErrorKind::EmptyClaim, "cannot render an instruction for an empty claim");
  }
  std::string out;
  out.reserve(512 + claim_text.size());
  out += "### Strategy: ";
  out += strategy.title;
  out += " (";
  out += family_title(strategy.family);
  out += ")\n";
  out += strategy.directive;
  out += "\n\n### Claim to rewrite\n";
  out += claim_text;
  out += "\n\n";
  if (feedback) {
    out += kFeedbackHeader;
    out += "\n";
    out += *feedback;
    out += "\n\n";
  }
  out += "### Constraints\n";
  out += strategy.constraints;
  out += "\nReply with the rewritten claim only, on a single line.";
  return {std::move(out)};
}

}  // namespace advclaim
