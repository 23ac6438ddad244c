// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace traitscan {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

enum class ColumnKind { kNumeric, kBinary };

const char* to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& name);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;

  bool operator==(const Column&) const = default;
};

/// Labeled users x named columns, row-major. Missing cells are NaN.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::vector<Column> columns);

  std::size_t rows() const { return user_ids_.size(); }
  std::size_t cols() const { return columns_.size(); }

  const std::vector<Column>& columns() const { return columns_; }
  std::vector<std::string> column_names() const;
  std::optional<std::size_t> column_index(const std::string& name) const;

  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<int>& labels() const { return labels_; }

  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }
  const std::vector<double>& values() const { return values_; }

  /// Throws Error when values.size() != cols().
  void add_row(std::string user_id, int label, std::span<const double> values);

  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  FeatureMatrix select_columns(std::span<const std::size_t> cols) const;
  /// Appends columns; extra holds rows() x extra_columns.size() values.
  /// Throws Error on a duplicate column name.
  void append_columns(const std::vector<Column>& extra_columns, std::span<const double> extra);

  std::size_t missing_count() const;

  /// Bit-exact comparison (NaN cells compare equal to NaN cells).
  bool identical(const FeatureMatrix& other) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::string> user_ids_;
  std::vector<int> labels_;
  std::vector<double> values_;
};

/// Header = column names, then user_id, then label. Missing cells are empty.
void write_features_csv(const FeatureMatrix& m, std::ostream& out);
void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path);

/// Column kinds come from `kinds` when given (matched by name); otherwise a
/// column is binary when every observed value is 0 or 1.
FeatureMatrix read_features_csv(std::istream& in, const std::vector<Column>* kinds = nullptr,
                                const std::string& source = "features.csv");
FeatureMatrix read_features_csv(const std::filesystem::path& path,
                                const std::vector<Column>* kinds = nullptr);

}  // namespace traitscan
