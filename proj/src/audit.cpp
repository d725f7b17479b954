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

#include "iotgov/audit.hpp"

#include <sstream>

#include "iotgov/sha256.hpp"

namespace iotgov::audit {

namespace {

constexpr char kGenesis[] = "genesis";

std::string chain_hash(const std::string& prev_hash, const std::string& body) {
  Sha256 h;
  h.update(prev_hash);
  h.update(body);
  return to_hex(h.digest());
}

}  // namespace

std::string AuditRecord::body() const {
  // '\x1e' separators keep adjacent fields from melting together.
  std::string out;
  out += std::to_string(index);
  out += '\x1e';
  out += std::to_string(timestamp);
  out += '\x1e';
  out += actor;
  out += '\x1e';
  out += action;
  out += '\x1e';
  out += resource;
  out += '\x1e';
  out += outcome;
  out += '\x1e';
  out += reason;
  return out;
}

nlohmann::json AuditRecord::to_json() const {
  return {{"index", index},     {"timestamp", timestamp}, {"actor", actor},
          {"action", action},   {"resource", resource},   {"outcome", outcome},
          {"reason", reason},   {"hash", hash}};
}

AuditRecord AuditRecord::from_json(const nlohmann::json& j) {
  AuditRecord r;
  r.index = j.value("index", std::uint64_t{0});
  r.timestamp = j.value("timestamp", TimeMs{0});
  r.actor = j.value("actor", std::string{});
  r.action = j.value("action", std::string{});
  r.resource = j.value("resource", std::string{});
  r.outcome = j.value("outcome", std::string{});
  r.reason = j.value("reason", std::string{});
  r.hash = j.value("hash", std::string{});
  return r;
}

Result<std::uint64_t> AuditLog::append(TimeMs timestamp, const std::string& actor,
                                       const std::string& action,
                                       const std::string& resource,
                                       const std::string& outcome,
                                       const std::string& reason) {
  if (actor.empty() || action.empty() || resource.empty() || outcome.empty())
    return Error{ErrorCode::IncompleteRecord,
                 "audit record requires actor, action, resource, outcome"};
  std::lock_guard lock(mutex_);
  AuditRecord r;
  r.index = records_.size();
  r.timestamp = timestamp;
  r.actor = actor;
  r.action = action;
  r.resource = resource;
  r.outcome = outcome;
  r.reason = reason;
  const std::string prev = records_.empty() ? kGenesis : records_.back().hash;
  r.hash = chain_hash(prev, r.body());
  records_.push_back(std::move(r));
  return records_.back().index;
}

ChainVerification AuditLog::verify() const {
  std::lock_guard lock(mutex_);
  if (records_.empty()) return {};
  return verify_range(0, records_.size() - 1);
}

ChainVerification AuditLog::verify_range(std::uint64_t first,
                                         std::uint64_t last) const {
  // Recompute from genesis: a range check still needs every predecessor hash.
  ChainVerification out;
  std::string prev = kGenesis;
  for (std::uint64_t i = 0; i < records_.size() && i <= last; ++i) {
    const AuditRecord& r = records_[i];
    std::string expected = chain_hash(prev, r.body());
    if (r.index != i || (i >= first && r.hash != expected)) {
      out.valid = false;
      out.first_bad_index = i;
      return out;
    }
    prev = r.hash;
  }
  return out;
}

std::vector<AuditRecord> AuditLog::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

std::string AuditLog::serialize() const {
  std::lock_guard lock(mutex_);
  std::ostringstream out;
  for (const AuditRecord& r : records_) out << r.to_json().dump() << "\n";
  return out.str();
}

Status AuditLog::load(const std::string& text) {
  std::vector<AuditRecord> loaded;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      return Error{ErrorCode::IoError, "corrupt audit log line"};
    loaded.push_back(AuditRecord::from_json(j));
  }
  std::lock_guard lock(mutex_);
  records_ = std::move(loaded);
  return {};
}

}  // namespace iotgov::audit
