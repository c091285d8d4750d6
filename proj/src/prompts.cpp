#include "advclaim/prompts.hpp"

#include "advclaim/gateway.hpp"
#include "advclaim/strategy.hpp"

namespace advclaim::prompts {

Json prompt_digests() {
  auto entry = [](std::string_view version, std::string_view text) {
    Json j;
    j["version"] = std::string(version);
    j["sha256"] = sha256_hex(text);
    return j;
  };
  Json out;
  out["generator_system"] = entry(kGeneratorSystemVersion, kGeneratorSystem);
  out["surrogate_system"] = entry(kSurrogateSystemVersion, kSurrogateSystem);
  out["nli_judge"] = entry(kNliJudgeVersion, std::string(kNliJudgeSystem) + std::string(kNliReask));
  out["relevance_judge"] =
      entry(kRelevanceJudgeVersion, std::string(kRelevanceJudgeSystem) + std::string(kRelevanceReask));
  out["instruction_template"] = entry(kInstructionTemplateVersion, kInstructionTemplateVersion);
  return out;
}

}  // namespace advclaim::prompts
