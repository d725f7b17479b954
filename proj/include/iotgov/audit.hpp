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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/errors.hpp"
#include "iotgov/simtime.hpp"

namespace iotgov::audit {

struct AuditRecord {
  std::uint64_t index = 0;
  TimeMs timestamp = 0;
  std::string actor;
  std::string action;  // ingest | publish | access | export | admission | ...
  std::string resource;
  std::string outcome;
  std::string reason;
  std::string hash;  // hex(SHA256(prev_hash || canonical body))

  // Canonical body serialization; the hash input, so field order is fixed.
  std::string body() const;

  nlohmann::json to_json() const;
  static AuditRecord from_json(const nlohmann::json& j);
};

struct ChainVerification {
  bool valid = true;
  std::optional<std::uint64_t> first_bad_index;
};

// Append-only decision log with hash chaining. Appends serialize through one
// mutex; chain integrity depends on that single choke point.
class AuditLog {
 public:
  Result<std::uint64_t> append(TimeMs timestamp, const std::string& actor,
                               const std::string& action, const std::string& resource,
                               const std::string& outcome, const std::string& reason);

  ChainVerification verify() const;
  ChainVerification verify_range(std::uint64_t first, std::uint64_t last) const;

  std::vector<AuditRecord> records() const;
  std::size_t size() const;

  // Line-delimited JSON, one record per line.
  std::string serialize() const;
  Status load(const std::string& text);  // replaces current contents

 private:
  mutable std::mutex mutex_;
  std::vector<AuditRecord> records_;
};

}  // namespace iotgov::audit
