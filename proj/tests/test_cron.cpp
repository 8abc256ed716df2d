#include <doctest.h>

#include "dsr/cron.hpp"
#include "dsr/error.hpp"
#include "dsr/query.hpp"

using namespace dsr;

static int64_t at(const std::string& iso) { return parse_utc_time(iso); }

TEST_CASE("every-minute and exact matches") {
  auto any = CronExpr::parse("* * * * *");
  CHECK(any.matches_minute(at("2026-03-05T10:15:00")));

  auto daily = CronExpr::parse("30 6 * * *");
  CHECK(daily.matches_minute(at("2026-03-05T06:30:00")));
  CHECK(!daily.matches_minute(at("2026-03-05T06:31:00")));
  CHECK(!daily.matches_minute(at("2026-03-05T07:30:00")));
}

TEST_CASE("steps, ranges and lists") {
  auto every5 = CronExpr::parse("*/5 * * * *");
  CHECK(every5.matches_minute(at("2026-01-01T12:05:00")));
  CHECK(every5.matches_minute(at("2026-01-01T12:05:30")));  // same minute
  CHECK(!every5.matches_minute(at("2026-01-01T12:06:00")));

  auto working_hours = CronExpr::parse("0 9-17 * * 1-5");
  CHECK(working_hours.matches_minute(at("2026-08-11T09:00:00")));  // a Tuesday
  CHECK(!working_hours.matches_minute(at("2026-08-15T09:00:00")));  // Saturday

  auto listed = CronExpr::parse("1,31 0 1,15 * *");
  CHECK(listed.matches_minute(at("2026-04-15T00:31:00")));
  CHECK(!listed.matches_minute(at("2026-04-16T00:31:00")));
}

TEST_CASE("vixie day rule: restricted dom OR restricted dow") {
  auto both = CronExpr::parse("0 0 13 * 5");  // 13th or any Friday
  CHECK(both.matches_minute(at("2026-02-13T00:00:00")));  // Friday the 13th
  CHECK(both.matches_minute(at("2026-02-06T00:00:00")));  // a Friday, not 13th
  CHECK(both.matches_minute(at("2026-01-13T00:00:00")));  // 13th, a Tuesday
  CHECK(!both.matches_minute(at("2026-01-14T00:00:00")));

  auto dom_only = CronExpr::parse("0 0 13 * *");
  CHECK(!dom_only.matches_minute(at("2026-02-06T00:00:00")));
}

TEST_CASE("sunday is 0 and 7") {
  auto zero = CronExpr::parse("0 0 * * 0");
  auto seven = CronExpr::parse("0 0 * * 7");
  int64_t sunday = at("2026-08-09T00:00:00");
  CHECK(zero.matches_minute(sunday));
  CHECK(seven.matches_minute(sunday));

  // a range ending at 7 includes sunday; a stepped one only when hit
  auto weekend = CronExpr::parse("0 0 * * 5-7");
  CHECK(weekend.matches_minute(sunday));
  CHECK(weekend.matches_minute(at("2026-08-07T00:00:00")));   // friday
  CHECK(weekend.matches_minute(at("2026-08-08T00:00:00")));   // saturday
  CHECK(!weekend.matches_minute(at("2026-08-10T00:00:00")));  // monday
  auto stepped = CronExpr::parse("0 0 * * 4-7/2");            // thu,sat
  CHECK(!stepped.matches_minute(sunday));
  CHECK(stepped.matches_minute(at("2026-08-08T00:00:00")));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(CronExpr::parse(""), Error);
  CHECK_THROWS_AS(CronExpr::parse("* * * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("* * * * * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("60 * * * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("* 24 * * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("* * 0 * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("* * 32 * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("* * * 13 *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("* * * * 8"), Error);
  CHECK_THROWS_AS(CronExpr::parse("a * * * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("*/0 * * * *"), Error);
  CHECK_THROWS_AS(CronExpr::parse("5-2 * * * *"), Error);
}

TEST_CASE("unsatisfiable day/month combinations are rejected") {
  CHECK_THROWS_AS(CronExpr::parse("0 0 30 2 *"), Error);   // no Feb 30
  CHECK_THROWS_AS(CronExpr::parse("0 0 31 4 *"), Error);   // no Apr 31
  CHECK_NOTHROW(CronExpr::parse("0 0 29 2 *"));            // leap years exist
  CHECK_NOTHROW(CronExpr::parse("0 0 30 2 5"));            // any Feb Friday
  CHECK_NOTHROW(CronExpr::parse("0 0 31 * *"));
}

TEST_CASE("minute formatting") {
  CHECK(format_utc_minute(at("2026-08-11T02:05:59")) == "2026-08-11T02:05");
}
