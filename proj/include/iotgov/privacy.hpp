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

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/canonical.hpp"
#include "iotgov/errors.hpp"
#include "iotgov/policy_engine.hpp"
#include "iotgov/rng.hpp"

namespace iotgov::privacy {

// Reversible tokenization per scope. Tokens are keyed digests; reversal goes
// through the vault map, never through the token itself, and detokenization
// is gated by a policy decision.
class TokenVault {
 public:
  explicit TokenVault(std::string secret = "vault-secret")
      : secret_(std::move(secret)) {}

  Result<std::string> tokenize(const std::string& value, const std::string& scope);
  Result<std::string> detokenize(const std::string& token, const std::string& scope,
                                 const policy::EffectivePolicy& effective,
                                 const policy::AttributeRequest& requester);

  Status create_scope(const std::string& scope);
  bool has_scope(const std::string& scope) const;

  // Bijection audit: no two values share a token within a scope.
  bool bijective() const;

 private:
  std::string secret_;
  mutable std::mutex mutex_;
  // scope -> (value -> token, token -> value)
  std::map<std::string, std::map<std::string, std::string>> value_to_token_;
  std::map<std::string, std::map<std::string, std::string>> token_to_value_;
};

// --- Aggregation ----------------------------------------------------------------

struct AggregateGroup {
  std::string group_id;  // ancestor node id at the requested level
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct AggregateRecord {
  std::string sensor_id;
  std::vector<std::string> lineage;  // root-first ancestor ids
  double value = 0.0;
};

// Groups records by their ancestor at `level` (sensor|asset|line|site) and
// suppresses groups smaller than `k`; small groups re-identify too easily.
Result<std::vector<AggregateGroup>> aggregate_records(
    const std::vector<AggregateRecord>& records, const std::string& level,
    std::size_t k = 5);

// --- Differential privacy ---------------------------------------------------------

struct BudgetLedgerEntry {
  std::string query_id;
  double epsilon = 0.0;
};

struct PrivacyBudget {
  std::string product_id;
  double epsilon_total = 0.0;
  double epsilon_spent = 0.0;
  std::vector<BudgetLedgerEntry> ledger;

  nlohmann::json to_json() const;
  static PrivacyBudget from_json(const nlohmann::json& j);
};

struct DpAnswer {
  double value = 0.0;
  double epsilon_spent_total = 0.0;
};

// Laplace mechanism: answer + Laplace(sensitivity / epsilon) noise, charged
// against the product budget. Denies (not degrades) once the budget would be
// exceeded.
Result<DpAnswer> dp_query(double true_answer, double sensitivity, double epsilon,
                          PrivacyBudget& budget, Rng& rng,
                          const std::string& query_id = "");

// --- Residency partitioning ----------------------------------------------------------

struct PartitionedStore {
  // region -> payload records; catalog metadata is replicated everywhere.
  std::map<std::string, std::vector<canonical::CanonicalMeasurement>> payload_by_region;
  std::vector<nlohmann::json> catalog;  // metadata only, globally visible

  std::size_t total_payloads() const;
};

// Routes a measurement's payload into its jurisdiction partition and adds a
// payload-free catalog entry visible from every region.
Result<std::string> route_partition(PartitionedStore& store,
                                    const canonical::CanonicalMeasurement& m,
                                    const AttrMap& asset_attrs);

}  // namespace iotgov::privacy
