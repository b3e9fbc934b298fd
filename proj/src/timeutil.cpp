#include "archfs/timeutil.hpp"

#include <cstdio>
#include <ctime>

namespace archfs {

std::optional<OffsetTime> parse_rfc3339(std::string_view s) {
  int y, mo, d, h, mi, sec;
  int oh = 0, om = 0;
  char sign = 'Z';
  std::string buf(s);

  int n = std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%2d:%2d",
                      &y, &mo, &d, &h, &mi, &sec, &sign, &oh, &om);
  if (n < 6) return std::nullopt;
  int32_t offset_min = 0;
  if (n == 6 || sign == 'Z' || sign == 'z') {
    if (n == 7 && sign != 'Z' && sign != 'z') return std::nullopt;
  } else if (n == 9 && (sign == '+' || sign == '-')) {
    offset_min = oh * 60 + om;
    if (sign == '-') offset_min = -offset_min;
  } else {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60)
    return std::nullopt;

  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = sec;
  time_t local = timegm(&tm);  // fields interpreted as if UTC
  return OffsetTime{static_cast<int64_t>(local) - offset_min * 60, offset_min};
}

std::string format_rfc3339(const OffsetTime &t) {
  time_t shifted = static_cast<time_t>(t.epoch_s + t.offset_min * 60);
  std::tm tm{};
  gmtime_r(&shifted, &tm);
  int32_t off = t.offset_min;
  char sign = off < 0 ? '-' : '+';
  if (off < 0) off = -off;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, sign, off / 60, off % 60);
  return buf;
}

CalendarDate utc_date(const OffsetTime &t) {
  time_t secs = static_cast<time_t>(t.epoch_s);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return CalendarDate{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday};
}

std::string utc_date_string(const OffsetTime &t) {
  CalendarDate d = utc_date(t);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

}  // namespace archfs
