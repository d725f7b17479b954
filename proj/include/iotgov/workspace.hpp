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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotgov/asset_registry.hpp"
#include "iotgov/audit.hpp"
#include "iotgov/boundary.hpp"
#include "iotgov/canonical.hpp"
#include "iotgov/contract.hpp"
#include "iotgov/policy_engine.hpp"
#include "iotgov/privacy.hpp"
#include "iotgov/quality.hpp"

namespace iotgov::workspace {

// File-backed state shared by CLI invocations. One directory holds the fleet,
// contract registry, policy sources, mapping set, product catalog, privacy
// budgets, quarantine, notifications, partitioned canonical store, and the
// audit log.
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  Status load();
  Status save();

  // Builds an enforcement point wired to this workspace's state. Policies are
  // composed as of `now`; quarantine, store, catalog, notifications, and the
  // audit log are restored.
  Result<std::string> compose_policies_check(TimeMs now) const;
  Status make_enforcement(TimeMs now);

  asset::AssetRegistry assets;
  contract::ContractRegistry contracts;
  std::vector<policy::PolicyAst> policies;
  std::optional<canonical::MappingSet> mappings;
  std::map<std::string, std::string> bindings;  // signal -> contract id
  std::vector<boundary::ProductDefinition> products;
  std::map<std::string, privacy::PrivacyBudget> budgets;
  std::vector<boundary::QuarantineItem> quarantine;
  std::vector<boundary::Notification> notifications;
  privacy::PartitionedStore store;
  std::vector<quality::MessageObservation> observations;
  std::string audit_text;  // raw JSONL, loaded into the enforcement point
  nlohmann::json last_result;  // most recent scenario result, if any

  canonical::CanonicalBaseline baseline = canonical::CanonicalBaseline::standard();
  privacy::TokenVault vault;
  std::optional<boundary::EnforcementPoint> enforcement;

 private:
  std::filesystem::path root_;
};

Result<nlohmann::json> read_json_file(const std::filesystem::path& path);
Status write_text_file(const std::filesystem::path& path, const std::string& text);
Result<std::string> read_text_file(const std::filesystem::path& path);

}  // namespace iotgov::workspace
