// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/civil.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace rolemine {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[static_cast<std::size_t>(month - 1)];
}

bool parse_int(std::string_view s, int& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
  // Howard Hinnant's chrono-compatible civil day algorithm.
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  year = static_cast<int>(y + (month <= 2));
}

std::int64_t to_epoch_seconds(const Civil& c) {
  return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 +
         c.minute * 60 + c.second;
}

Civil from_epoch_seconds(std::int64_t seconds) {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  Civil c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 3600);
  c.minute = static_cast<int>((rem % 3600) / 60);
  c.second = static_cast<int>(rem % 60);
  return c;
}

std::int64_t add_months_utc(std::int64_t epoch_seconds, int months) {
  Civil c = from_epoch_seconds(epoch_seconds);
  int total = c.year * 12 + (c.month - 1) + months;
  int year = total / 12;
  int month0 = total % 12;
  if (month0 < 0) {
    month0 += 12;
    year -= 1;
  }
  c.year = year;
  c.month = month0 + 1;
  const int max_day = days_in_month(c.year, c.month);
  if (c.day > max_day) c.day = max_day;
  return to_epoch_seconds(c);
}

std::optional<std::int64_t> parse_utc_timestamp(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // Plain integer means epoch seconds.
  bool all_digits = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (!(ch >= '0' && ch <= '9') && !(i == 0 && ch == '-')) {
      all_digits = false;
      break;
    }
  }
  if (all_digits) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size()) return v;
    return std::nullopt;
  }
  Civil c;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_int(text.substr(0, 4), c.year) ||
      !parse_int(text.substr(5, 2), c.month) ||
      !parse_int(text.substr(8, 2), c.day))
    return std::nullopt;
  if (c.month < 1 || c.month > 12 || c.day < 1 ||
      c.day > days_in_month(c.year, c.month))
    return std::nullopt;
  if (text.size() == 10) return to_epoch_seconds(c);
  if (text.size() != 19 || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    return std::nullopt;
  if (!parse_int(text.substr(11, 2), c.hour) ||
      !parse_int(text.substr(14, 2), c.minute) ||
      !parse_int(text.substr(17, 2), c.second))
    return std::nullopt;
  if (c.hour > 23 || c.minute > 59 || c.second > 59) return std::nullopt;
  return to_epoch_seconds(c);
}

std::string format_utc(std::int64_t epoch_seconds) {
  const Civil c = from_epoch_seconds(epoch_seconds);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", c.year,
                c.month, c.day, c.hour, c.minute, c.second);
  return buf;
}

}  // namespace rolemine
