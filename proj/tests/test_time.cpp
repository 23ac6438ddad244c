#include <doctest.h>

#include "traitscan/error.hpp"
#include "traitscan/time.hpp"

using namespace traitscan;

TEST_CASE("ISO-8601 parsing normalizes to UTC seconds") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("2022-06-13T00:00:00Z") == 1655078400);
  CHECK(parse_iso8601("2022-06-13") == 1655078400);
  CHECK(parse_iso8601("2022-06-13T02:00:00+02:00") == 1655078400);
  CHECK(parse_iso8601("2022-06-12T19:00:00-0500") == 1655078400);
  CHECK(parse_iso8601("2022-06-13T00:00:00.999Z") == 1655078400);
  CHECK(parse_iso8601("2008-02-27 10:11:12") == 1204107072);
}

TEST_CASE("ISO-8601 formatting round-trips") {
  for (Timestamp t : {Timestamp{0}, Timestamp{1655078400}, Timestamp{1204107072}, Timestamp{-86401}})
    CHECK(parse_iso8601(format_iso8601(t)) == t);
  CHECK(format_iso8601(1204107072) == "2008-02-27T10:11:12Z");
}

TEST_CASE("malformed timestamps are rejected") {
  CHECK_THROWS_AS(parse_iso8601("2022-13-01"), Error);
  CHECK_THROWS_AS(parse_iso8601("2022-02-30"), Error);
  CHECK_THROWS_AS(parse_iso8601("yesterday"), Error);
  CHECK_THROWS_AS(parse_iso8601("2022-06-13T25:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("2022-06-13T10:00:00Zjunk"), Error);
}
