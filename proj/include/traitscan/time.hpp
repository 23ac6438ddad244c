// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace traitscan {

/// UTC seconds since the Unix epoch.
using Timestamp = std::int64_t;

/// Parses ISO-8601 date-times: "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]"
/// with an optional "Z" or "+HH:MM"/"-HHMM" offset (absent offset = UTC).
/// Fractional seconds are truncated. Throws Error on malformed input.
Timestamp parse_iso8601(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

struct CivilDate {
  int year;
  unsigned month;  // 1..12
  unsigned day;    // 1..31
};

CivilDate civil_from_timestamp(Timestamp t);
Timestamp timestamp_from_civil(int year, unsigned month, unsigned day);

inline constexpr std::int64_t kSecondsPerDay = 86400;

}  // namespace traitscan
