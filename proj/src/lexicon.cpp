// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "traitscan/csv.hpp"
#include "traitscan/error.hpp"
#include "traitscan/parallel.hpp"
#include "traitscan/text.hpp"

namespace traitscan::lexicon {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
  const auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

Lexicon parse_tsv(std::istream& in, const std::string& name, const std::string& source) {
  Lexicon lex(name, MatchMode::kExact);
  std::map<std::pair<std::string, std::string>, int> flags;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_ws(t);
    const auto where = source + " line " + std::to_string(line_no);
    if (fields.size() != 3) throw Error(where + ": expected word, category, flag");
    if (fields[2] != "0" && fields[2] != "1") throw Error(where + ": flag must be 0 or 1");
    const int flag = fields[2] == "1";
    const auto word = text::normalize_lower(fields[0]);
    const auto category = text::normalize_lower(fields[1]);
    const auto [it, inserted] = flags.emplace(std::make_pair(word, category), flag);
    if (!inserted && it->second != flag)
      throw Error(where + ": contradictory flags for " + word + "/" + category);
    const auto idx = lex.category_index(category);
    if (flag) lex.add(word, idx);
  }
  return lex;
}

Lexicon parse_dictionary(std::istream& in, const std::string& name, const std::string& source) {
  Lexicon lex(name, MatchMode::kPrefixWildcard);
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto where = source + " line " + std::to_string(line_no);
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw Error(where + ": expected 'category: words'");
    const auto category = text::normalize_lower(trim(t.substr(0, colon)));
    if (category.empty() || category.find_first_of(" \t") != std::string::npos)
      throw Error(where + ": bad category name");
    const auto idx = lex.category_index(category);
    for (const auto& w : split_ws(t.substr(colon + 1))) {
      const auto star = w.find('*');
      if (star != std::string::npos && (star != w.size() - 1 || w.size() == 1))
        throw Error(where + ": '*' allowed only at the end of a word: " + w);
      lex.add(text::normalize_lower(w), idx);
    }
  }
  return lex;
}

}  // namespace

Format format_from_string(const std::string& name) {
  if (name == "tsv") return Format::kTsv;
  if (name == "dic") return Format::kDictionary;
  throw Error("unknown lexicon format '" + name + "' (expected tsv or dic)");
}

std::size_t Lexicon::category_index(const std::string& category) {
  const auto it = std::find(categories_.begin(), categories_.end(), category);
  if (it != categories_.end()) return static_cast<std::size_t>(it - categories_.begin());
  categories_.push_back(category);
  return categories_.size() - 1;
}

void Lexicon::add(const std::string& word, std::size_t category) {
  if (mode_ == MatchMode::kPrefixWildcard && !word.empty() && word.back() == '*') {
    insert_sorted(prefixes_[word.substr(0, word.size() - 1)], category);
  } else {
    insert_sorted(exact_[word], category);
  }
}

std::vector<std::size_t> Lexicon::match(const std::string& token) const {
  std::vector<std::size_t> out;
  if (const auto it = exact_.find(token); it != exact_.end()) out = it->second;
  if (!prefixes_.empty()) {
    for (std::size_t len = 1; len <= token.size(); ++len) {
      const auto it = prefixes_.find(token.substr(0, len));
      if (it == prefixes_.end()) continue;
      for (const auto c : it->second) insert_sorted(out, c);
    }
  }
  return out;
}

Lexicon parse_lexicon(std::istream& in, Format format, const std::string& name, const std::string& source) {
  Lexicon lex = format == Format::kTsv ? parse_tsv(in, name, source) : parse_dictionary(in, name, source);
  if (lex.categories().empty()) throw Error(source + ": no categories defined");
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, Format format, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon " + path.string());
  if (name.empty()) name = path.stem().string();
  return parse_lexicon(in, format, name, path.filename().string());
}

std::vector<Column> lexicon_columns(const std::vector<Lexicon>& lexicons) {
  std::vector<Column> cols;
  for (const auto& lex : lexicons)
    for (const auto& c : lex.categories()) cols.push_back({lex.name() + "_" + c, ColumnKind::kNumeric});
  return cols;
}

std::vector<double> lexicon_features(const std::vector<features::TokenizedTweet>& timeline,
                                     const std::vector<Lexicon>& lexicons) {
  std::unordered_map<std::string, std::size_t> bag;
  std::size_t total = 0;
  for (const auto& t : timeline)
    for (const auto& tok : t.tokens) {
      if (text::is_placeholder(tok)) continue;
      ++bag[tok];
      ++total;
    }
  std::size_t width = 0;
  for (const auto& lex : lexicons) width += lex.categories().size();
  if (total == 0) return std::vector<double>(width, kMissing);

  // Sorted iteration keeps the floating-point sums order-independent.
  std::vector<std::pair<std::string_view, std::size_t>> sorted(bag.begin(), bag.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(width);
  for (const auto& lex : lexicons) {
    std::vector<std::size_t> hits(lex.categories().size(), 0);
    for (const auto& [tok, n] : sorted)
      for (const auto c : lex.match(std::string(tok))) hits[c] += n;
    for (const auto h : hits) out.push_back(static_cast<double>(h) / static_cast<double>(total));
  }
  return out;
}

void append_lexicon_columns(FeatureMatrix& matrix, const Corpus& corpus,
                            const std::vector<Lexicon>& lexicons, std::size_t timeline_cap,
                            int workers) {
  const auto cols = lexicon_columns(lexicons);
  const std::size_t k = cols.size();
  std::vector<double> block(matrix.rows() * k);
  parallel_for(matrix.rows(), workers, [&](std::size_t r) {
    const auto tl = features::tokenize_timeline(corpus.timeline(matrix.user_ids()[r]), timeline_cap);
    const auto vals = lexicon_features(tl, lexicons);
    std::copy(vals.begin(), vals.end(), block.begin() + static_cast<std::ptrdiff_t>(r * k));
  });
  matrix.append_columns(cols, block);
}

FeatureMatrix join_external_features(const FeatureMatrix& matrix, const std::filesystem::path& path,
                                     std::vector<std::string>* warnings) {
  const auto rows = csv::read_file(path);
  const auto source = path.filename().string();
  if (rows.empty()) {
    if (warnings) warnings->push_back(source + ": empty external feature file; nothing joined");
    return matrix;
  }
  const auto& header = rows.front();
  const auto key_it = std::find(header.begin(), header.end(), "user_id");
  if (key_it == header.end()) throw Error(source + ": no user_id column");
  const std::size_t key = static_cast<std::size_t>(key_it - header.begin());

  std::vector<std::size_t> value_cols;
  std::set<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == key) continue;
    if (!names.insert(header[c]).second || matrix.column_index(header[c]))
      throw Error(source + ": duplicate column name " + header[c]);
    value_cols.push_back(c);
  }

  std::unordered_map<std::string, std::vector<double>> by_user;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto where = source + " line " + std::to_string(i + 1);
    if (row.size() != header.size()) throw Error(where + ": wrong field count");
    std::vector<double> vals;
    try {
      for (const auto c : value_cols) vals.push_back(csv::parse_double(row[c]));
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    if (!by_user.emplace(row[key], std::move(vals)).second)
      throw Error(where + ": duplicate user_id " + row[key]);
  }

  const std::size_t k = value_cols.size();
  std::vector<double> block(matrix.rows() * k, kMissing);
  std::size_t absent = 0;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto it = by_user.find(matrix.user_ids()[r]);
    if (it == by_user.end()) {
      ++absent;
      continue;
    }
    std::copy(it->second.begin(), it->second.end(), block.begin() + static_cast<std::ptrdiff_t>(r * k));
  }

  std::vector<Column> cols;
  for (std::size_t j = 0; j < k; ++j) {
    bool binary = true;
    for (std::size_t r = 0; r < matrix.rows() && binary; ++r) {
      const double v = block[r * k + j];
      binary = is_missing(v) || v == 0.0 || v == 1.0;
    }
    cols.push_back({header[value_cols[j]], binary ? ColumnKind::kBinary : ColumnKind::kNumeric});
  }
  if (absent && warnings)
    warnings->push_back(source + ": " + std::to_string(absent) + " users absent; cells left missing");
  FeatureMatrix out = matrix;
  out.append_columns(cols, block);
  return out;
}

}  // namespace traitscan::lexicon
