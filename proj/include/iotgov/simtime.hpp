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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace iotgov {

// All engine timestamps are UTC milliseconds since the Unix epoch. The
// simulator advances this clock logically; nothing reads wall time.
using TimeMs = std::int64_t;

constexpr TimeMs kMsPerSecond = 1000;
constexpr TimeMs kMsPerMinute = 60 * kMsPerSecond;
constexpr TimeMs kMsPerHour = 60 * kMsPerMinute;
constexpr TimeMs kMsPerDay = 24 * kMsPerHour;
// Calendar-free year of 365 days; retention arithmetic only.
constexpr TimeMs kMsPerYear = 365 * kMsPerDay;

// Parses ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]" into UTC ms.
// A missing zone designator is taken as UTC; `had_zone` reports whether one
// was present so callers can apply a known source offset to zoneless stamps.
std::optional<TimeMs> parse_iso8601(const std::string& text,
                                    bool* had_zone = nullptr);

// Parses "YYYY-MM-DD" as UTC midnight.
std::optional<TimeMs> parse_date(const std::string& text);

std::string format_iso8601(TimeMs utc_ms);

// Duration literals used by the policy DSL and contracts: "500ms", "30s",
// "5min", "2h", "30d", "10y".
std::optional<TimeMs> parse_duration(const std::string& text);
std::string format_duration(TimeMs ms);

}  // namespace iotgov
