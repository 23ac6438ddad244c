// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "traitscan/error.hpp"

namespace traitscan {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  int digits(std::size_t count) {
    if (pos_ + count > s_.size()) fail();
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + count, value);
    if (ec != std::errc{} || ptr != s_.data() + pos_ + count) fail();
    pos_ += count;
    return value;
  }
  void skip_digits() {
    while (!done() && peek() >= '0' && peek() <= '9') ++pos_;
  }
  [[noreturn]] void fail() const {
    throw Error("malformed timestamp '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Timestamp timestamp_from_civil(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) throw Error("invalid calendar date");
  return sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay;
}

CivilDate civil_from_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(sys_seconds{seconds{t}});
  const year_month_day ymd{days};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day())};
}

Timestamp parse_iso8601(std::string_view text) {
  Cursor c(text);
  const int year = c.digits(4);
  if (!c.accept('-')) c.fail();
  const int month = c.digits(2);
  if (!c.accept('-')) c.fail();
  const int day = c.digits(2);
  if (month < 1 || month > 12 || day < 1 || day > 31) c.fail();
  Timestamp t = 0;
  try {
    t = timestamp_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  } catch (const Error&) {
    c.fail();
  }
  if (c.done()) return t;
  if (!c.accept('T') && !c.accept(' ')) c.fail();
  const int hour = c.digits(2);
  if (!c.accept(':')) c.fail();
  const int minute = c.digits(2);
  int second = 0;
  if (c.accept(':')) {
    second = c.digits(2);
    if (c.accept('.')) c.skip_digits();
  }
  if (hour > 23 || minute > 59 || second > 60) c.fail();
  t += hour * 3600 + minute * 60 + second;
  if (c.done() || c.accept('Z')) {
    if (!c.done()) c.fail();
    return t;
  }
  int sign = 0;
  if (c.accept('+')) sign = 1;
  else if (c.accept('-')) sign = -1;
  else c.fail();
  const int off_h = c.digits(2);
  c.accept(':');
  const int off_m = c.digits(2);
  if (!c.done() || off_h > 23 || off_m > 59) c.fail();
  return t - sign * (off_h * 3600 + off_m * 60);
}

std::string format_iso8601(Timestamp t) {
  const CivilDate d = civil_from_timestamp(t);
  Timestamp rem = t - timestamp_from_civil(d.year, d.month, d.day);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", d.year, d.month, d.day,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

}  // namespace traitscan
