#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace advclaim {

enum class StrategyFamily { SearchMisguidance, ReasoningDisruption, StructuralEscalation };

inline constexpr std::size_t kFamilyCount = 3;

std::string_view to_string(StrategyFamily family) noexcept;
StrategyFamily strategy_family_from_string(std::string_view s);

struct StrategyDescriptor {
  StrategyFamily family;
  std::string_view variant_id;
  std::string_view title;
  std::string_view directive;
  std::string_view constraints;

  friend bool operator==(const StrategyDescriptor& a, const StrategyDescriptor& b) noexcept {
    return a.variant_id == b.variant_id;
  }
};

/// The ten sub-strategies in their canonical order, grouped 4 / 4 / 2 by family.
std::span<const StrategyDescriptor> taxonomy() noexcept;

/// Throws InvalidArgument for an unknown id.
const StrategyDescriptor& find_strategy(std::string_view variant_id);

/// Variants of one family, in taxonomy order.
std::vector<const StrategyDescriptor*> family_variants(StrategyFamily family);

inline constexpr std::string_view kInstructionTemplateVersion = "instruction-v1";
inline constexpr std::string_view kFeedbackHeader = "### Planner feedback";

struct GenerationInstruction {
  std::string text;
};

/// Pure and deterministic. Throws EmptyClaim when claim_text is blank.
GenerationInstruction render_instruction(const StrategyDescriptor& strategy,
                                         std::string_view claim_text,
                                         const std::optional<std::string>& feedback = std::nullopt);

}  // namespace advclaim
