// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "traitscan/corpus.hpp"
#include "traitscan/feature_matrix.hpp"
#include "traitscan/features.hpp"

namespace traitscan::lexicon {

enum class Format {
  kTsv,         // "word<TAB>category<TAB>flag", flag in {0,1}
  kDictionary,  // "category: word1 word2*"
};

/// "tsv" or "dic". Throws Error on anything else.
Format format_from_string(const std::string& name);

enum class MatchMode { kExact, kPrefixWildcard };

/// Word-to-category associations. Immutable once loaded.
class Lexicon {
 public:
  Lexicon(std::string name, MatchMode mode) : name_(std::move(name)), mode_(mode) {}

  const std::string& name() const { return name_; }
  MatchMode match_mode() const { return mode_; }
  const std::vector<std::string>& categories() const { return categories_; }

  /// Category indices matched by a normalized token, ascending.
  std::vector<std::size_t> match(const std::string& token) const;

  std::size_t category_index(const std::string& category);  // adds if new
  /// A trailing '*' makes the entry a prefix (prefix-wildcard mode only).
  void add(const std::string& word, std::size_t category);

 private:
  std::string name_;
  MatchMode mode_;
  std::vector<std::string> categories_;
  std::map<std::string, std::vector<std::size_t>> exact_;
  std::map<std::string, std::vector<std::size_t>> prefixes_;
};

/// Entries are NFC-normalized and lowercased. Throws Error naming the source
/// and line on malformed rows, on a word/category pair given both flags, or
/// when no category is defined.
Lexicon parse_lexicon(std::istream& in, Format format, const std::string& name,
                      const std::string& source = "lexicon");
/// name defaults to the file stem.
Lexicon load_lexicon(const std::filesystem::path& path, Format format, std::string name = "");

/// "<lexicon>_<category>" for every category of every lexicon, in order.
std::vector<Column> lexicon_columns(const std::vector<Lexicon>& lexicons);

/// Per category: matching token occurrences over all token occurrences of
/// the timeline, placeholders excluded. No tokens yields all-missing.
std::vector<double> lexicon_features(const std::vector<features::TokenizedTweet>& timeline,
                                     const std::vector<Lexicon>& lexicons);

/// Appends lexicon columns for every row of the matrix (rows looked up by
/// user id in the corpus).
void append_lexicon_columns(FeatureMatrix& matrix, const Corpus& corpus,
                            const std::vector<Lexicon>& lexicons, std::size_t timeline_cap = 3200,
                            int workers = 1);

/// Joins a CSV with a user_id column and numeric columns. Users absent from
/// the file get missing cells. An empty file leaves the matrix unchanged and
/// adds a warning. Throws Error on duplicate column names or user ids.
FeatureMatrix join_external_features(const FeatureMatrix& matrix, const std::filesystem::path& path,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace traitscan::lexicon
