// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "traitscan/error.hpp"

namespace traitscan::text {
namespace {

icu::UnicodeString nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString out = normalizer->normalize(src, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_word_char(UChar32 c) {
  if (u_isalnum(c)) return true;
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_MN_MASK | U_GC_MC_MASK | U_GC_ME_MASK)) != 0;
}

// Decoded code point stream over a UTF-8 buffer.
struct CodePoints {
  std::string_view s;

  UChar32 at(std::size_t i, std::size_t* next = nullptr) const {
    int32_t pos = static_cast<int32_t>(i);
    UChar32 c = 0;
    U8_NEXT(s.data(), pos, static_cast<int32_t>(s.size()), c);
    if (next) *next = static_cast<std::size_t>(pos);
    return c < 0 ? 0xFFFD : c;
  }

  UChar32 before(std::size_t i) const {
    if (i == 0) return 0;
    int32_t pos = static_cast<int32_t>(i);
    UChar32 c = 0;
    U8_PREV(s.data(), 0, pos, c);
    return c < 0 ? 0xFFFD : c;
  }
};

bool starts_with_ci(std::string_view s, std::size_t i, std::string_view prefix) {
  if (s.size() - i < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[i + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

// Length in bytes of a URL starting at i (0 if none). URLs run to the next
// whitespace and must begin at a word boundary.
std::size_t url_length_at(const CodePoints& cp, std::size_t i) {
  const std::string_view s = cp.s;
  if (i > 0 && is_word_char(cp.before(i))) return 0;
  if (!starts_with_ci(s, i, "http://") && !starts_with_ci(s, i, "https://") &&
      !starts_with_ci(s, i, "www."))
    return 0;
  std::size_t j = i;
  while (j < s.size()) {
    std::size_t next = 0;
    const UChar32 c = cp.at(j, &next);
    if (u_isUWhiteSpace(c)) break;
    j = next;
  }
  return j - i;
}

// Length of "@handle" at i (0 if none); handle is word characters or '_'.
std::size_t mention_length_at(const CodePoints& cp, std::size_t i) {
  if (cp.s[i] != '@') return 0;
  if (i > 0 && is_word_char(cp.before(i))) return 0;
  std::size_t j = i + 1;
  while (j < cp.s.size()) {
    std::size_t next = 0;
    const UChar32 c = cp.at(j, &next);
    if (!is_word_char(c) && c != '_') break;
    j = next;
  }
  return j > i + 1 ? j - i : 0;
}

std::string trim_url_tail(std::string_view url) {
  while (!url.empty() && std::string_view(".,;:!?)]}'\"").find(url.back()) != std::string_view::npos)
    url.remove_suffix(1);
  return std::string(url);
}

}  // namespace

std::string normalize_lower(std::string_view utf8) {
  icu::UnicodeString normalized = nfc(utf8);
  normalized.toLower(icu::Locale::getRoot());
  return to_utf8(normalized);
}

std::vector<std::string> tokenize(std::string_view utf8) {
  const std::string s = normalize_lower(utf8);
  const CodePoints cp{s};

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (current.empty()) {
      if (const auto n = url_length_at(cp, i)) {
        tokens.emplace_back(kUrlToken);
        i += n;
        continue;
      }
      if (const auto n = mention_length_at(cp, i)) {
        tokens.emplace_back(kMentionToken);
        i += n;
        continue;
      }
    }
    std::size_t next = 0;
    const UChar32 c = cp.at(i, &next);
    if (is_word_char(c)) {
      current.append(s, i, next - i);
    } else {
      flush();
    }
    i = next;
  }
  flush();
  return tokens;
}

std::size_t char_count(std::string_view utf8) {
  return static_cast<std::size_t>(nfc(utf8).countChar32());
}

std::vector<std::string> find_urls(std::string_view utf8) {
  const CodePoints cp{utf8};
  std::vector<std::string> urls;
  std::size_t i = 0;
  while (i < utf8.size()) {
    if (const auto n = url_length_at(cp, i)) {
      urls.push_back(trim_url_tail(utf8.substr(i, n)));
      i += n;
      continue;
    }
    std::size_t next = 0;
    cp.at(i, &next);
    i = next;
  }
  return urls;
}

std::size_t hashtag_count(std::string_view utf8) {
  const CodePoints cp{utf8};
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    if (const auto n = url_length_at(cp, i)) {
      i += n;
      continue;
    }
    std::size_t next = 0;
    const UChar32 c = cp.at(i, &next);
    if (c == '#' && next < utf8.size() && (i == 0 || !is_word_char(cp.before(i)))) {
      const UChar32 after = cp.at(next);
      if (is_word_char(after) || after == '_') ++count;
    }
    i = next;
  }
  return count;
}

std::size_t sentence_count(std::string_view utf8) {
  const CodePoints cp{utf8};
  std::size_t count = 0;
  bool has_content = false;
  std::size_t i = 0;
  while (i < utf8.size()) {
    if (const auto n = url_length_at(cp, i)) {
      i += n;
      continue;
    }
    std::size_t next = 0;
    const UChar32 c = cp.at(i, &next);
    if (c == '.' || c == '!' || c == '?') {
      count += has_content;
      has_content = false;
    } else if (!u_isUWhiteSpace(c)) {
      has_content = true;
    }
    i = next;
  }
  return count + has_content;
}

std::string registered_domain(std::string_view url) {
  if (const auto scheme = url.find("://"); scheme != std::string_view::npos)
    url.remove_prefix(scheme + 3);
  url = url.substr(0, url.find_first_of("/?#"));
  if (const auto at = url.rfind('@'); at != std::string_view::npos) url.remove_prefix(at + 1);
  url = url.substr(0, url.find(':'));
  std::string host(url);
  for (char& c : host)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);
  return host;
}

}  // namespace traitscan::text
