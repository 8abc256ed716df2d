#include "dsr/cron.hpp"

#include <time.h>

#include <cstdio>
#include <vector>

#include "dsr/error.hpp"

namespace dsr {

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

int parse_num(const std::string& s, const std::string& field) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(Errc::validation, "cron: bad number '" + s + "' in " + field + " field");
  return std::stoi(s);
}

// One field: comma list of `*`, `N`, `A-B`, each optionally `/step`.
// Day-of-week fields pass mod7 so both 0 and 7 mean Sunday (5-7 covers
// fri,sat,sun).
template <size_t N>
bool parse_field(const std::string& text, std::bitset<N>& bits, int lo, int hi,
                 const std::string& name, bool mod7) {
  bool restricted = true;
  for (const std::string& part : split_on(text, ',')) {
    std::string body = part;
    int step = 1;
    if (size_t slash = part.find('/'); slash != std::string::npos) {
      body = part.substr(0, slash);
      step = parse_num(part.substr(slash + 1), name);
      if (step <= 0) fail(Errc::validation, "cron: zero step in " + name);
    }
    int a, b;
    if (body == "*") {
      a = lo;
      b = hi;
      if (step == 1 && split_on(text, ',').size() == 1) restricted = false;
    } else if (size_t dash = body.find('-'); dash != std::string::npos) {
      a = parse_num(body.substr(0, dash), name);
      b = parse_num(body.substr(dash + 1), name);
    } else {
      a = b = parse_num(body, name);
    }
    if (a < lo || b > hi || a > b)
      fail(Errc::validation, "cron: value out of range in " + name + " field");
    for (int v = a; v <= b; v += step) bits.set(size_t(mod7 ? v % 7 : v));
  }
  if (bits.none()) fail(Errc::validation, "cron: empty " + name + " field");
  return restricted;
}

}  // namespace

CronExpr CronExpr::parse(const std::string& text) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) fields.push_back(cur);
  if (fields.size() != 5)
    fail(Errc::validation, "cron needs 5 fields (minute hour dom month dow), got " +
                               std::to_string(fields.size()) + ": '" + text + "'");

  CronExpr e;
  e.text_ = text;
  parse_field(fields[0], e.minutes_, 0, 59, "minute", false);
  parse_field(fields[1], e.hours_, 0, 23, "hour", false);
  e.dom_restricted_ = parse_field(fields[2], e.days_, 1, 31, "day-of-month", false);
  parse_field(fields[3], e.months_, 1, 12, "month", false);
  e.dow_restricted_ = parse_field(fields[4], e.weekdays_, 0, 7, "day-of-week", true);

  if (!e.satisfiable())
    fail(Errc::validation, "cron never fires (no real date matches): '" + text + "'");
  return e;
}

bool CronExpr::day_matches(int mday, int month, int wday) const {
  if (!months_.test(size_t(month))) return false;
  bool dom_ok = days_.test(size_t(mday));
  bool dow_ok = weekdays_.test(size_t(wday));
  if (dom_restricted_ && dow_restricted_) return dom_ok || dow_ok;
  if (dom_restricted_) return dom_ok;
  if (dow_restricted_) return dow_ok;
  return true;
}

bool CronExpr::matches_minute(int64_t epoch_seconds) const {
  time_t t = time_t(epoch_seconds);
  struct tm tm;
  gmtime_r(&t, &tm);
  return minutes_.test(size_t(tm.tm_min)) && hours_.test(size_t(tm.tm_hour)) &&
         day_matches(tm.tm_mday, tm.tm_mon + 1, tm.tm_wday);
}

bool CronExpr::satisfiable() const {
  // Scan two leap cycles of real dates; day/month/weekday combinations
  // repeat within that span.
  struct tm tm = {};
  tm.tm_year = 2024 - 1900;
  tm.tm_mon = 0;
  tm.tm_mday = 1;
  time_t t = timegm(&tm);
  for (int day = 0; day < 366 * 8; ++day) {
    struct tm cur;
    time_t ts = t + time_t(day) * 86400;
    gmtime_r(&ts, &cur);
    if (day_matches(cur.tm_mday, cur.tm_mon + 1, cur.tm_wday)) return true;
  }
  return false;
}

std::string format_utc_minute(int64_t epoch_seconds) {
  time_t t = time_t(epoch_seconds);
  struct tm tm;
  gmtime_r(&t, &tm);
  char buf[40];
  snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", tm.tm_year + 1900,
           tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min);
  return buf;
}

}  // namespace dsr
