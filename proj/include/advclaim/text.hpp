#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace advclaim::text {

inline constexpr std::string_view kStemmerVersion = "suffix-strip-v1";
inline constexpr std::string_view kStopwordsVersion = "stopwords-en-v1";

std::string to_lower_ascii(std::string_view s);

/// Splits on every byte that is not an ASCII letter/digit. Bytes >= 0x80
/// stay inside tokens so UTF-8 words are not torn apart.
std::vector<std::string> word_tokens(std::string_view s);

bool is_stopword(std::string_view lowered_token);

/// Lowercase + one suffix rule, first match wins:
///   -sses -> -ss, -ies -> -y (len > 4), -ing (len > 5), -ed (len > 4),
///   -ly (len > 4), -s (len > 3, not -ss/-us/-is).
std::string stem(std::string_view token);

/// Lowercased, stopword-filtered, stemmed tokens in text order.
std::vector<std::string> content_stems(std::string_view s);

/// Number of Unicode code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);

}  // namespace advclaim::text
