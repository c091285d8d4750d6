#include "advclaim/text.hpp"

#include <algorithm>
#include <array>

namespace advclaim::text {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Sorted for binary search.
constexpr std::array<std::string_view, 124> kStopwords = {
    "a",       "about",   "above",  "after",   "again",  "against", "all",    "also",
    "am",      "an",      "and",    "any",     "are",    "as",      "at",     "be",
    "because", "been",    "before", "being",   "below",  "between", "both",   "but",
    "by",      "can",     "could",  "did",     "do",     "does",    "doing",  "down",
    "during",  "each",    "few",    "for",     "from",   "further", "had",    "has",
    "have",    "having",  "he",     "her",     "here",   "hers",    "herself", "him",
    "himself", "his",     "how",    "i",       "if",     "in",      "into",   "is",
    "it",      "its",     "itself", "just",    "me",     "more",    "most",   "my",
    "myself",  "no",      "nor",    "not",     "now",    "of",      "off",    "on",
    "once",    "only",    "or",     "other",   "our",    "ours",    "out",    "over",
    "own",     "same",    "she",    "should",  "so",     "some",    "such",   "than",
    "that",    "the",     "their",  "theirs",  "them",   "then",    "there",  "these",
    "they",    "this",    "those",  "through", "to",     "too",     "under",  "until",
    "up",      "very",    "was",    "we",      "were",   "what",    "when",   "where",
    "which",   "while",   "who",    "whom",    "why",    "will",    "with",   "would",
    "you",     "your",    "yours",  "yourself",
};

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) tokens.emplace_back(s.substr(start, i - start));
  }
  return tokens;
}

bool is_stopword(std::string_view lowered_token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), lowered_token);
}

std::string stem(std::string_view token) {
  std::string w = to_lower_ascii(token);
  const std::size_t n = w.size();
  if (ends_with(w, "sses")) return w.substr(0, n - 2);
  if (ends_with(w, "ies") && n > 4) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "ing") && n > 5) return w.substr(0, n - 3);
  if (ends_with(w, "ed") && n > 4) return w.substr(0, n - 2);
  if (ends_with(w, "ly") && n > 4) return w.substr(0, n - 2);
  if (ends_with(w, "s") && n > 3 && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return w.substr(0, n - 1);
  }
  return w;
}

std::vector<std::string> content_stems(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& token : word_tokens(s)) {
    std::string lowered = to_lower_ascii(token);
    if (is_stopword(lowered)) continue;
    out.push_back(stem(lowered));
  }
  return out;
}

std::size_t codepoint_count(std::string_view utf8) {
  return static_cast<std::size_t>(std::count_if(utf8.begin(), utf8.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

}  // namespace advclaim::text
