// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rolemine {

/// A broken-down UTC timestamp.
struct Civil {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

std::int64_t to_epoch_seconds(const Civil& c);
Civil from_epoch_seconds(std::int64_t seconds);

/// Adds calendar months in UTC, clamping the day of month to the target
/// month's length (Jan 31 + 1 month = Feb 28/29). Time of day is preserved.
std::int64_t add_months_utc(std::int64_t epoch_seconds, int months);

/// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS" (UTC) or a plain integer
/// epoch-second count. Returns nullopt on malformed input.
std::optional<std::int64_t> parse_utc_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SS" rendering of a UTC timestamp.
std::string format_utc(std::int64_t epoch_seconds);

}  // namespace rolemine
