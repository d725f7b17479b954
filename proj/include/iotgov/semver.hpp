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

#include <compare>
#include <optional>
#include <string>

namespace iotgov {

struct SemVer {
  int major = 0;
  int minor = 0;
  int patch = 0;

  auto operator<=>(const SemVer&) const = default;

  std::string str() const {
    return std::to_string(major) + "." + std::to_string(minor) + "." +
           std::to_string(patch);
  }

  static std::optional<SemVer> parse(const std::string& text);
};

enum class VersionBump { Patch, Minor, Major };

std::string_view bump_name(VersionBump bump);

// True when `next` increments `prev` by at least the required component.
bool bump_satisfied(const SemVer& prev, const SemVer& next, VersionBump required);

}  // namespace iotgov
