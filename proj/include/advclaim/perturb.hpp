#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace advclaim {

enum class PerturbKind { Leet, Homoglyph, CharSwap, Phonetic };

std::string_view to_string(PerturbKind kind) noexcept;
PerturbKind perturb_kind_from_string(std::string_view s);

/// Default budget for baseline campaigns. Reported in manifests, not claimed
/// to match any published setting.
inline constexpr double kDefaultPerturbBudget = 0.3;

struct PerturbOutcome {
  std::string text;
  std::size_t eligible_units = 0;  // chars for leet/homoglyph, words otherwise
  std::size_t modified_units = 0;
};

/// round-half-up of budget * eligible. Throws InvalidBudget outside [0, 1].
std::size_t budget_units(double budget, std::size_t eligible);

/// Seeded permutation of [0, n). Fisher-Yates over mt19937_64 with
/// `draw % (i + 1)`, so results are identical across standard libraries.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

PerturbOutcome perturb(PerturbKind kind, std::string_view text, double budget, std::uint64_t seed);

/// {A/a->4, E/e->3, I/i->1, O/o->0, S/s->5, T/t->7}
std::string perturb_leet(std::string_view text, double budget, std::uint64_t seed);
/// Latin letters to single-code-point lookalikes (mostly Cyrillic, plus n -> ñ).
std::string perturb_homoglyph(std::string_view text, double budget, std::uint64_t seed);
/// One adjacent swap inside each selected word (words = ASCII letter runs, length >= 2).
std::string perturb_charswap(std::string_view text, double budget, std::uint64_t seed);
/// Rules, by priority: tion->shun, igh->i, ph->f, ck->k.
std::string perturb_phonetic(std::string_view text, double budget, std::uint64_t seed);

/// The homoglyph table as (ascii, utf8 replacement) pairs.
const std::vector<std::pair<char, std::string_view>>& homoglyph_table();

}  // namespace advclaim
