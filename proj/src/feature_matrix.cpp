// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/feature_matrix.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>

#include "traitscan/csv.hpp"
#include "traitscan/error.hpp"

namespace traitscan {

const char* to_string(ColumnKind kind) {
  return kind == ColumnKind::kBinary ? "binary" : "numeric";
}

ColumnKind column_kind_from_string(const std::string& name) {
  if (name == "binary") return ColumnKind::kBinary;
  if (name == "numeric") return ColumnKind::kNumeric;
  throw Error("unknown column kind '" + name + "'");
}

FeatureMatrix::FeatureMatrix(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::set<std::string> seen;
  for (const auto& c : columns_)
    if (!seen.insert(c.name).second) throw Error("duplicate column name " + c.name);
}

std::vector<std::string> FeatureMatrix::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

std::optional<std::size_t> FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return std::nullopt;
}

void FeatureMatrix::add_row(std::string user_id, int label, std::span<const double> values) {
  if (values.size() != cols())
    throw Error("row for " + user_id + " has " + std::to_string(values.size()) + " values, expected " +
                std::to_string(cols()));
  user_ids_.push_back(std::move(user_id));
  labels_.push_back(label);
  values_.insert(values_.end(), values.begin(), values.end());
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out(columns_);
  out.values_.reserve(rows.size() * cols());
  for (const auto r : rows) {
    if (r >= this->rows()) throw Error("row index out of range");
    out.add_row(user_ids_[r], labels_[r], row(r));
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> cols) const {
  std::vector<Column> picked;
  for (const auto c : cols) {
    if (c >= this->cols()) throw Error("column index out of range");
    picked.push_back(columns_[c]);
  }
  FeatureMatrix out(std::move(picked));
  out.user_ids_ = user_ids_;
  out.labels_ = labels_;
  out.values_.reserve(rows() * cols.size());
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto c : cols) out.values_.push_back(at(r, c));
  return out;
}

void FeatureMatrix::append_columns(const std::vector<Column>& extra_columns,
                                   std::span<const double> extra) {
  const std::size_t k = extra_columns.size();
  if (extra.size() != rows() * k) throw Error("appended block has the wrong size");
  for (const auto& c : extra_columns)
    if (column_index(c.name)) throw Error("duplicate column name " + c.name);
  std::vector<double> merged;
  merged.reserve(rows() * (cols() + k));
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto old = row(r);
    merged.insert(merged.end(), old.begin(), old.end());
    merged.insert(merged.end(), extra.begin() + r * k, extra.begin() + (r + 1) * k);
  }
  columns_.insert(columns_.end(), extra_columns.begin(), extra_columns.end());
  values_ = std::move(merged);
}

std::size_t FeatureMatrix::missing_count() const {
  std::size_t n = 0;
  for (double v : values_) n += is_missing(v);
  return n;
}

bool FeatureMatrix::identical(const FeatureMatrix& other) const {
  if (columns_ != other.columns_ || user_ids_ != other.user_ids_ || labels_ != other.labels_ ||
      values_.size() != other.values_.size())
    return false;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (std::bit_cast<std::uint64_t>(values_[i]) != std::bit_cast<std::uint64_t>(other.values_[i]))
      return false;
  return true;
}

void write_features_csv(const FeatureMatrix& m, std::ostream& out) {
  csv::Row header = m.column_names();
  header.emplace_back("user_id");
  header.emplace_back("label");
  csv::write_row(out, header);
  csv::Row line(m.cols() + 2);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) line[c] = csv::format_double(m.at(r, c));
    line[m.cols()] = m.user_ids()[r];
    line[m.cols() + 1] = std::to_string(m.labels()[r]);
    csv::write_row(out, line);
  }
}

void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_features_csv(m, out);
}

FeatureMatrix read_features_csv(std::istream& in, const std::vector<Column>* kinds,
                                const std::string& source) {
  const auto rows = csv::read_all(in, source);
  if (rows.empty()) throw Error(source + ": empty file");
  const auto& header = rows.front();
  if (header.size() < 2 || header[header.size() - 2] != "user_id" || header.back() != "label")
    throw Error(source + ": header must end with user_id,label");
  const std::size_t n_cols = header.size() - 2;

  std::vector<double> values;
  std::vector<std::string> users;
  std::vector<int> labels;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != header.size())
      throw Error(source + ": expected " + std::to_string(header.size()) + " fields at line " +
                  std::to_string(i + 1));
    try {
      for (std::size_t c = 0; c < n_cols; ++c) values.push_back(csv::parse_double(row[c]));
    } catch (const Error& e) {
      throw Error(source + ": " + e.what() + " at line " + std::to_string(i + 1));
    }
    users.push_back(row[n_cols]);
    if (row.back() != "0" && row.back() != "1")
      throw Error(source + ": label must be 0 or 1 at line " + std::to_string(i + 1));
    labels.push_back(row.back() == "1");
  }

  std::map<std::string, ColumnKind> known;
  if (kinds)
    for (const auto& c : *kinds) known[c.name] = c.kind;
  std::vector<Column> columns;
  for (std::size_t c = 0; c < n_cols; ++c) {
    Column col{header[c], ColumnKind::kNumeric};
    if (const auto it = known.find(col.name); it != known.end()) {
      col.kind = it->second;
    } else {
      bool binary = true;
      for (std::size_t r = 0; r < users.size() && binary; ++r) {
        const double v = values[r * n_cols + c];
        binary = is_missing(v) || v == 0.0 || v == 1.0;
      }
      col.kind = binary ? ColumnKind::kBinary : ColumnKind::kNumeric;
    }
    columns.push_back(std::move(col));
  }

  FeatureMatrix m(std::move(columns));
  for (std::size_t r = 0; r < users.size(); ++r)
    m.add_row(users[r], labels[r], std::span<const double>(values).subspan(r * n_cols, n_cols));
  return m;
}

FeatureMatrix read_features_csv(const std::filesystem::path& path, const std::vector<Column>* kinds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_features_csv(in, kinds, path.filename().string());
}

}  // namespace traitscan
