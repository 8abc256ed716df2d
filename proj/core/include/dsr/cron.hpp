#pragma once

#include <bitset>
#include <cstdint>
#include <string>

namespace dsr {

// Standard 5-field cron (minute hour day-of-month month day-of-week),
// minute resolution, UTC. Supports `*`, lists, ranges and steps; day-of-week
// accepts 0-7 with both 0 and 7 meaning Sunday. When both day fields are
// restricted, either may match (vixie rule).
class CronExpr {
 public:
  static CronExpr parse(const std::string& text);

  bool matches_minute(int64_t epoch_seconds) const;

  // True when some real calendar date can satisfy the day/month fields.
  bool satisfiable() const;

  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::bitset<60> minutes_;
  std::bitset<24> hours_;
  std::bitset<32> days_;    // 1..31
  std::bitset<13> months_;  // 1..12
  std::bitset<7> weekdays_; // 0 = Sunday
  bool dom_restricted_ = false;
  bool dow_restricted_ = false;

  bool day_matches(int mday, int month, int wday) const;
};

// UTC minute index (epoch / 60) rendered as YYYY-MM-DDTHH:MM.
std::string format_utc_minute(int64_t epoch_seconds);

}  // namespace dsr
