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

#include "iotgov/semver.hpp"

#include <cctype>
#include <cstdlib>

namespace iotgov {

std::optional<SemVer> SemVer::parse(const std::string& text) {
  SemVer v;
  int parts[3] = {0, 0, 0};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      return std::nullopt;
    long n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      n = n * 10 + (text[pos] - '0');
      if (n > 1000000) return std::nullopt;
      ++pos;
    }
    parts[i] = static_cast<int>(n);
    if (i < 2) {
      if (pos >= text.size() || text[pos] != '.') return std::nullopt;
      ++pos;
    }
  }
  if (pos != text.size()) return std::nullopt;
  v.major = parts[0];
  v.minor = parts[1];
  v.patch = parts[2];
  return v;
}

std::string_view bump_name(VersionBump bump) {
  switch (bump) {
    case VersionBump::Patch: return "patch";
    case VersionBump::Minor: return "minor";
    case VersionBump::Major: return "major";
  }
  return "patch";
}

bool bump_satisfied(const SemVer& prev, const SemVer& next, VersionBump required) {
  if (next <= prev) return false;
  switch (required) {
    case VersionBump::Major:
      return next.major > prev.major;
    case VersionBump::Minor:
      return next.major > prev.major ||
             (next.major == prev.major && next.minor > prev.minor);
    case VersionBump::Patch:
      return true;  // any strictly greater version suffices
  }
  return false;
}

}  // namespace iotgov
