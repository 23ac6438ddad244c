// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace traitscan::text {

// Placeholder tokens (U+27E8 / U+27E9 brackets).
inline constexpr std::string_view kUrlToken = "⟨url⟩";
inline constexpr std::string_view kMentionToken = "⟨mention⟩";

/// Bumped whenever tokenize() output changes for any input.
inline constexpr int kTokenizerVersion = 1;

inline bool is_placeholder(std::string_view token) {
  return token == kUrlToken || token == kMentionToken;
}

/// NFC-normalizes and lowercases, replaces URLs (http://, https://, www.)
/// and @mentions with placeholder tokens, then splits the remainder on runs
/// of characters that are neither letters, digits, nor combining marks.
std::vector<std::string> tokenize(std::string_view utf8);

/// NFC-normalized, root-locale lowercased copy.
std::string normalize_lower(std::string_view utf8);

/// Number of Unicode code points after NFC normalization.
std::size_t char_count(std::string_view utf8);

/// URLs found by the tokenizer's URL rule, in order of appearance.
std::vector<std::string> find_urls(std::string_view utf8);

/// Number of "#tag" occurrences (hash followed by a letter, digit, or '_').
std::size_t hashtag_count(std::string_view utf8);

/// Segments separated by '.', '!' or '?' that contain a non-space
/// character. URLs are removed first so their dots do not split sentences.
std::size_t sentence_count(std::string_view utf8);

/// Lowercased host of a URL with a leading "www." stripped; "" if none.
std::string registered_domain(std::string_view url);

}  // namespace traitscan::text
