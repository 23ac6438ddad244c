// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace traitscan::csv {

using Row = std::vector<std::string>;

/// RFC 4180 field quoting: only fields containing ',', '"', CR or LF are quoted.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

/// Parses the whole stream; quoted fields may span lines. Blank lines are
/// skipped. Throws Error naming the source and line on an unterminated quote.
std::vector<Row> read_all(std::istream& in, const std::string& source = "csv");
std::vector<Row> read_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double; "" for NaN.
std::string format_double(double v);
/// Inverse of format_double; "" yields NaN. Throws Error on junk.
double parse_double(std::string_view text);

}  // namespace traitscan::csv
