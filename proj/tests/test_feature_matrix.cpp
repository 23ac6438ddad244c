#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "traitscan/csv.hpp"
#include "traitscan/error.hpp"
#include "traitscan/feature_matrix.hpp"
#include "traitscan/rng.hpp"

using namespace traitscan;

TEST_CASE("csv quoting round-trips") {
  std::stringstream buf;
  csv::write_row(buf, {"plain", "a,b", "say \"hi\"", "two\nlines", ""});
  csv::write_row(buf, {"x"});
  const auto rows = csv::read_all(buf);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == csv::Row{"plain", "a,b", "say \"hi\"", "two\nlines", ""});
  CHECK(rows[1] == csv::Row{"x"});

  std::stringstream bad("a,\"open\n");
  CHECK_THROWS_AS(csv::read_all(bad), Error);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::format_double(2.0) == "2");
  CHECK(csv::format_double(kMissing).empty());
  CHECK(std::isnan(csv::parse_double("")));
  CHECK_THROWS_AS(csv::parse_double("1.2x"), Error);
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.index(40)) - 20.0);
    CHECK(csv::parse_double(csv::format_double(v)) == v);
  }
  CHECK(csv::parse_double(csv::format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("FeatureMatrix row and column selection") {
  FeatureMatrix m({{"a", ColumnKind::kNumeric}, {"b", ColumnKind::kBinary}, {"c", ColumnKind::kNumeric}});
  const double r0[] = {1, 0, 2};
  const double r1[] = {3, 1, kMissing};
  m.add_row("u0", 1, r0);
  m.add_row("u1", 0, r1);
  const double bad[] = {1};
  CHECK_THROWS_AS(m.add_row("x", 0, bad), Error);
  CHECK(m.missing_count() == 1);

  const std::vector<std::size_t> cols{2, 0};
  const auto sc = m.select_columns(cols);
  CHECK(sc.column_names() == std::vector<std::string>{"c", "a"});
  CHECK(sc.at(0, 0) == 2);
  CHECK(std::isnan(sc.at(1, 0)));

  const std::vector<std::size_t> rows{1};
  const auto sr = m.select_rows(rows);
  CHECK(sr.rows() == 1);
  CHECK(sr.user_ids()[0] == "u1");
  CHECK(sr.labels()[0] == 0);

  const double extra[] = {7, 8};
  m.append_columns({{"d", ColumnKind::kNumeric}}, extra);
  CHECK(m.cols() == 4);
  CHECK(m.at(1, 3) == 8);
  CHECK_THROWS_AS(m.append_columns({{"a", ColumnKind::kNumeric}}, extra), Error);
  CHECK_THROWS_AS(FeatureMatrix({{"a", ColumnKind::kNumeric}, {"a", ColumnKind::kBinary}}), Error);
}

TEST_CASE("features csv layout and kind inference") {
  FeatureMatrix m({{"x", ColumnKind::kNumeric}, {"flag", ColumnKind::kBinary}});
  const double r0[] = {0.25, 1};
  const double r1[] = {kMissing, 0};
  m.add_row("alice", 1, r0);
  m.add_row("bob,jr", 0, r1);
  std::stringstream buf;
  write_features_csv(m, buf);
  CHECK(buf.str() == "x,flag,user_id,label\n0.25,1,alice,1\n,0,\"bob,jr\",0\n");
  const auto back = read_features_csv(buf);
  CHECK(back.identical(m));

  std::stringstream bad_label("x,user_id,label\n1,u,2\n");
  CHECK_THROWS_AS(read_features_csv(bad_label), Error);
  std::stringstream bad_header("x,label\n1,1\n");
  CHECK_THROWS_AS(read_features_csv(bad_header), Error);
}
