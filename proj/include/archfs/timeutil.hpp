#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace archfs {

// A wall-clock timestamp with the UTC offset it was recorded in.
// Comparisons are by absolute instant; the offset only affects rendering.
struct OffsetTime {
  int64_t epoch_s = 0;       // seconds since the Unix epoch, UTC
  int32_t offset_min = 0;    // recorded zone offset, minutes east of UTC

  bool operator==(const OffsetTime &) const = default;
};

// Parses "YYYY-MM-DDTHH:MM:SS(+|-)HH:MM" or the "Z" suffix form.
std::optional<OffsetTime> parse_rfc3339(std::string_view s);

// Canonical serialization, always with an explicit numeric offset.
std::string format_rfc3339(const OffsetTime &t);

struct CalendarDate {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31
};

// Calendar date of the instant rendered in UTC, ignoring the stored offset.
CalendarDate utc_date(const OffsetTime &t);

// "YYYY-MM-DD" of the instant in UTC.
std::string utc_date_string(const OffsetTime &t);

}  // namespace archfs
