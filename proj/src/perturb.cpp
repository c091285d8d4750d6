#include "advclaim/perturb.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>

#include "advclaim/error.hpp"

namespace advclaim {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char leet_for(char c) {
  switch (c) {
    case 'A': case 'a': return '4';
    case 'E': case 'e': return '3';
    case 'I': case 'i': return '1';
    case 'O': case 'o': return '0';
    case 'S': case 's': return '5';
    case 'T': case 't': return '7';
    default: return '\0';
  }
}

const std::string_view* homoglyph_for(char c) {
  const auto& table = homoglyph_table();
  auto it = std::find_if(table.begin(), table.end(), [c](const auto& p) { return p.first == c; });
  return it == table.end() ? nullptr : &it->second;
}

std::vector<std::size_t> permute(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  return order;
}

struct Span {
  std::size_t begin;
  std::size_t length;
};

std::vector<Span> alpha_words(std::string_view text) {
  std::vector<Span> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_alpha(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && is_alpha(text[i])) ++i;
    if (i > start) words.push_back({start, i - start});
  }
  return words;
}

// First k entries of the seeded permutation: selection for a smaller budget is
// always a prefix of the selection for a larger one.
std::vector<std::size_t> select_units(std::size_t eligible, double budget, std::uint64_t seed) {
  const std::size_t k = budget_units(budget, eligible);
  auto order = seeded_permutation(eligible, seed);
  order.resize(k);
  return order;
}

struct PhoneticRule {
  std::string_view pattern;
  std::string_view replacement;
};

constexpr std::array<PhoneticRule, 4> kPhoneticRules = {{
    {"tion", "shun"},
    {"igh", "i"},
    {"ph", "f"},
    {"ck", "k"},
}};

bool matches_ci(std::string_view word, std::size_t at, std::string_view pattern) {
  if (at + pattern.size() > word.size()) return false;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(word[at + k])) != pattern[k]) return false;
  }
  return true;
}

std::string apply_phonetic(std::string_view word) {
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    const PhoneticRule* hit = nullptr;
    for (const auto& rule : kPhoneticRules) {
      if (matches_ci(word, i, rule.pattern)) {
        hit = &rule;
        break;
      }
    }
    if (!hit) {
      out += word[i++];
      continue;
    }
    std::string_view matched = word.substr(i, hit->pattern.size());
    bool all_upper = std::all_of(matched.begin(), matched.end(),
                                 [](char c) { return std::isupper(static_cast<unsigned char>(c)); });
    std::string rep(hit->replacement);
    if (all_upper) {
      for (auto& c : rep) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else if (std::isupper(static_cast<unsigned char>(matched.front()))) {
      rep.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(rep.front())));
    }
    out += rep;
    i += hit->pattern.size();
  }
  return out;
}

PerturbOutcome substitute_chars(std::string_view text, double budget, std::uint64_t seed,
                                bool homoglyph) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < text.size(); ++i) {
    bool ok = homoglyph ? homoglyph_for(text[i]) != nullptr : leet_for(text[i]) != '\0';
    if (ok) eligible.push_back(i);
  }
  auto chosen = select_units(eligible.size(), budget, seed);
  std::vector<bool> mark(text.size(), false);
  for (auto idx : chosen) mark[eligible[idx]] = true;

  std::string out;
  out.reserve(text.size() * 2);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!mark[i]) {
      out += text[i];
    } else if (homoglyph) {
      out += *homoglyph_for(text[i]);
    } else {
      out += leet_for(text[i]);
    }
  }
  return {std::move(out), eligible.size(), chosen.size()};
}

PerturbOutcome swap_chars(std::string_view text, double budget, std::uint64_t seed) {
  std::vector<Span> words;
  for (const auto& w : alpha_words(text)) {
    if (w.length >= 2) words.push_back(w);
  }
  const std::size_t k = budget_units(budget, words.size());
  // Permutation first, then one position draw per selected word, so a word's
  // swap position does not depend on the budget.
  std::mt19937_64 rng(seed);
  const auto order = permute(words.size(), rng);
  std::string out(text);
  for (std::size_t n = 0; n < k; ++n) {
    const Span& w = words[order[n]];
    std::size_t pos = rng() % (w.length - 1);
    std::swap(out[w.begin + pos], out[w.begin + pos + 1]);
  }
  return {std::move(out), words.size(), k};
}

PerturbOutcome phonetic(std::string_view text, double budget, std::uint64_t seed) {
  std::vector<Span> eligible;
  for (const auto& w : alpha_words(text)) {
    std::string_view word = text.substr(w.begin, w.length);
    if (apply_phonetic(word) != word) eligible.push_back(w);
  }
  auto chosen = select_units(eligible.size(), budget, seed);
  std::sort(chosen.begin(), chosen.end());

  std::string out;
  std::size_t cursor = 0;
  for (auto idx : chosen) {
    const Span& w = eligible[idx];
    out.append(text.substr(cursor, w.begin - cursor));
    out += apply_phonetic(text.substr(w.begin, w.length));
    cursor = w.begin + w.length;
  }
  out.append(text.substr(cursor));
  return {std::move(out), eligible.size(), chosen.size()};
}

}  // namespace

std::string_view to_string(PerturbKind kind) noexcept {
  switch (kind) {
    case PerturbKind::Leet: return "leet";
    case PerturbKind::Homoglyph: return "homoglyph";
    case PerturbKind::CharSwap: return "charswap";
    case PerturbKind::Phonetic: return "phonetic";
  }
  return "";
}

PerturbKind perturb_kind_from_string(std::string_view s) {
  for (auto k : {PerturbKind::Leet, PerturbKind::Homoglyph, PerturbKind::CharSwap,
                 PerturbKind::Phonetic}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown perturbation '" + std::string(s) + "'");
}

const std::vector<std::pair<char, std::string_view>>& homoglyph_table() {
  static const std::vector<std::pair<char, std::string_view>> table = {
      {'a', "а"}, {'c', "с"}, {'e', "е"}, {'i', "і"}, {'j', "ј"},
      {'n', "ñ"}, {'o', "о"}, {'p', "р"}, {'s', "ѕ"}, {'x', "х"},
      {'y', "у"}, {'A', "А"}, {'B', "В"}, {'C', "С"}, {'E', "Е"},
      {'H', "Н"}, {'I', "І"}, {'K', "К"}, {'M', "М"}, {'O', "О"},
      {'P', "Р"}, {'T', "Т"}, {'X', "Х"},
  };
  return table;
}

std::size_t budget_units(double budget, std::size_t eligible) {
  if (!(budget >= 0.0 && budget <= 1.0)) {
    throw Error(ErrorKind::InvalidBudget, "budget must lie in [0, 1]");
  }
  auto k = static_cast<std::size_t>(std::floor(budget * static_cast<double>(eligible) + 0.5));
  return std::min(k, eligible);
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return permute(n, rng);
}

PerturbOutcome perturb(PerturbKind kind, std::string_view text, double budget, std::uint64_t seed) {
  switch (kind) {
    case PerturbKind::Leet: return substitute_chars(text, budget, seed, false);
    case PerturbKind::Homoglyph: return substitute_chars(text, budget, seed, true);
    case PerturbKind::CharSwap: return swap_chars(text, budget, seed);
    case PerturbKind::Phonetic: return phonetic(text, budget, seed);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown perturbation");
}

std::string perturb_leet(std::string_view text, double budget, std::uint64_t seed) {
  return perturb(PerturbKind::Leet, text, budget, seed).text;
}
std::string perturb_homoglyph(std::string_view text, double budget, std::uint64_t seed) {
  return perturb(PerturbKind::Homoglyph, text, budget, seed).text;
}
std::string perturb_charswap(std::string_view text, double budget, std::uint64_t seed) {
  return perturb(PerturbKind::CharSwap, text, budget, seed).text;
}
std::string perturb_phonetic(std::string_view text, double budget, std::uint64_t seed) {
  return perturb(PerturbKind::Phonetic, text, budget, seed).text;
}

}  // namespace advclaim
