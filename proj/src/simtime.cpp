// Copyright 2026 The iotgov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iotgov/simtime.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace iotgov {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool read_int(const std::string& s, std::size_t& pos, int digits, int& out) {
  int v = 0;
  for (int i = 0; i < digits; ++i) {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      return false;
    v = v * 10 + (s[pos] - '0');
    ++pos;
  }
  out = v;
  return true;
}

}  // namespace

std::optional<TimeMs> parse_date(const std::string& text) {
  std::size_t pos = 0;
  int y, m, d;
  if (!read_int(text, pos, 4, y)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_int(text, pos, 2, m)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_int(text, pos, 2, d)) return std::nullopt;
  if (pos != text.size()) return std::nullopt;
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  return days_from_civil(y, m, d) * kMsPerDay;
}

std::optional<TimeMs> parse_iso8601(const std::string& text, bool* had_zone) {
  if (had_zone) *had_zone = false;
  std::size_t pos = 0;
  int y, mo, d, h, mi, s;
  if (!read_int(text, pos, 4, y)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
  if (!read_int(text, pos, 2, mo)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
  if (!read_int(text, pos, 2, d)) return std::nullopt;
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) return std::nullopt;
  ++pos;
  if (!read_int(text, pos, 2, h)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
  if (!read_int(text, pos, 2, mi)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
  if (!read_int(text, pos, 2, s)) return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
    return std::nullopt;

  TimeMs frac_ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100;
    int digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (digits < 3) frac_ms += (text[pos] - '0') * scale;
      scale /= 10;
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
  }

  TimeMs offset_ms = 0;
  if (pos < text.size()) {
    char c = text[pos];
    if (c == 'Z') {
      ++pos;
      if (had_zone) *had_zone = true;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh, om;
      if (!read_int(text, pos, 2, oh)) return std::nullopt;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (!read_int(text, pos, 2, om)) return std::nullopt;
      offset_ms = (oh * kMsPerHour + om * kMsPerMinute) * (c == '-' ? -1 : 1);
      if (had_zone) *had_zone = true;
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;

  TimeMs local = days_from_civil(y, mo, d) * kMsPerDay + h * kMsPerHour +
                 mi * kMsPerMinute + s * kMsPerSecond + frac_ms;
  return local - offset_ms;
}

std::string format_iso8601(TimeMs utc_ms) {
  std::int64_t days = utc_ms / kMsPerDay;
  TimeMs rem = utc_ms % kMsPerDay;
  if (rem < 0) {
    rem += kMsPerDay;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  int h = static_cast<int>(rem / kMsPerHour);
  int mi = static_cast<int>((rem / kMsPerMinute) % 60);
  int s = static_cast<int>((rem / kMsPerSecond) % 60);
  int ms = static_cast<int>(rem % 1000);
  char buf[40];
  if (ms != 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", y, m,
                  d, h, mi, s, ms);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d, h,
                  mi, s);
  }
  return buf;
}

std::optional<TimeMs> parse_duration(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  std::int64_t n = 0;
  bool any = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    n = n * 10 + (text[pos] - '0');
    if (n > 100000000000LL) return std::nullopt;
    ++pos;
    any = true;
  }
  if (!any) return std::nullopt;
  std::string unit = text.substr(pos);
  if (unit == "ms") return n;
  if (unit == "s") return n * kMsPerSecond;
  if (unit == "min") return n * kMsPerMinute;
  if (unit == "h") return n * kMsPerHour;
  if (unit == "d") return n * kMsPerDay;
  if (unit == "y") return n * kMsPerYear;
  return std::nullopt;
}

std::string format_duration(TimeMs ms) {
  if (ms % kMsPerYear == 0 && ms != 0) return std::to_string(ms / kMsPerYear) + "y";
  if (ms % kMsPerDay == 0 && ms != 0) return std::to_string(ms / kMsPerDay) + "d";
  if (ms % kMsPerHour == 0 && ms != 0) return std::to_string(ms / kMsPerHour) + "h";
  if (ms % kMsPerMinute == 0 && ms != 0)
    return std::to_string(ms / kMsPerMinute) + "min";
  if (ms % kMsPerSecond == 0) return std::to_string(ms / kMsPerSecond) + "s";
  return std::to_string(ms) + "ms";
}

}  // namespace iotgov
