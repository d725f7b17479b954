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

#include "iotgov/privacy.hpp"

#include <algorithm>
#include <cmath>

#include "iotgov/sha256.hpp"

namespace iotgov::privacy {

Status TokenVault::create_scope(const std::string& scope) {
  std::lock_guard lock(mutex_);
  value_to_token_.try_emplace(scope);
  token_to_value_.try_emplace(scope);
  return {};
}

bool TokenVault::has_scope(const std::string& scope) const {
  std::lock_guard lock(mutex_);
  return value_to_token_.contains(scope);
}

Result<std::string> TokenVault::tokenize(const std::string& value,
                                         const std::string& scope) {
  std::lock_guard lock(mutex_);
  auto sit = value_to_token_.find(scope);
  if (sit == value_to_token_.end())
    return Error{ErrorCode::UnknownScope, "no token scope " + scope};
  auto existing = sit->second.find(value);
  if (existing != sit->second.end()) return existing->second;

  std::string token = "tok_" + keyed_digest_hex(secret_, scope + '\x1f' + value)
                                   .substr(0, 24);
  auto& reverse = token_to_value_[scope];
  if (auto clash = reverse.find(token);
      clash != reverse.end() && clash->second != value) {
    // Digest collision inside one scope; widen until distinct.
    token = "tok_" + keyed_digest_hex(secret_, scope + '\x1f' + value);
  }
  sit->second.emplace(value, token);
  reverse.emplace(token, value);
  return token;
}

Result<std::string> TokenVault::detokenize(const std::string& token,
                                           const std::string& scope,
                                           const policy::EffectivePolicy& effective,
                                           const policy::AttributeRequest& requester) {
  {
    std::lock_guard lock(mutex_);
    if (!token_to_value_.contains(scope))
      return Error{ErrorCode::UnknownScope, "no token scope " + scope};
  }
  policy::AttributeRequest request = requester;
  request.action = "detokenize";
  request.resource["scope"] = Value(scope);
  policy::Decision decision = policy::evaluate_request(effective, request);
  if (decision.outcome != policy::Outcome::Allow) {
    std::string reasons;
    for (const auto& r : decision.reasons) reasons += (reasons.empty() ? "" : ",") + r;
    return Error{ErrorCode::AccessDenied, "detokenize denied: " + reasons};
  }
  std::lock_guard lock(mutex_);
  const auto& reverse = token_to_value_.at(scope);
  auto it = reverse.find(token);
  if (it == reverse.end())
    return Error{ErrorCode::UnknownScope, "token not present in scope " + scope};
  return it->second;
}

bool TokenVault::bijective() const {
  std::lock_guard lock(mutex_);
  for (const auto& [scope, forward] : value_to_token_) {
    const auto& reverse = token_to_value_.at(scope);
    if (forward.size() != reverse.size()) return false;
    for (const auto& [value, token] : forward) {
      auto it = reverse.find(token);
      if (it == reverse.end() || it->second != value) return false;
    }
  }
  return true;
}

Result<std::vector<AggregateGroup>> aggregate_records(
    const std::vector<AggregateRecord>& records, const std::string& level,
    std::size_t k) {
  if (records.empty())
    return Error{ErrorCode::EmptyInput, "no records to aggregate"};

  // Lineage is Enterprise/Site/Line/Asset/Component/Sensor, root first.
  int depth;
  if (level == "site") {
    depth = 1;
  } else if (level == "line") {
    depth = 2;
  } else if (level == "asset") {
    depth = 3;
  } else if (level == "sensor") {
    depth = 5;
  } else {
    return Error{ErrorCode::EmptyInput, "unknown aggregation level " + level};
  }

  std::map<std::string, std::vector<double>> groups;
  for (const AggregateRecord& r : records) {
    std::string group = static_cast<std::size_t>(depth) < r.lineage.size()
                            ? r.lineage[depth]
                            : (r.lineage.empty() ? r.sensor_id : r.lineage.back());
    groups[group].push_back(r.value);
  }

  std::vector<AggregateGroup> out;
  for (const auto& [group_id, values] : groups) {
    if (values.size() < k) continue;  // suppressed
    AggregateGroup g;
    g.group_id = group_id;
    g.count = values.size();
    g.min = *std::min_element(values.begin(), values.end());
    g.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    g.mean = sum / static_cast<double>(values.size());
    out.push_back(g);
  }
  return out;
}

nlohmann::json PrivacyBudget::to_json() const {
  nlohmann::json ledger_json = nlohmann::json::array();
  for (const auto& e : ledger)
    ledger_json.push_back({{"query_id", e.query_id}, {"epsilon", e.epsilon}});
  return {{"product_id", product_id},
          {"epsilon_total", epsilon_total},
          {"epsilon_spent", epsilon_spent},
          {"ledger", ledger_json}};
}

PrivacyBudget PrivacyBudget::from_json(const nlohmann::json& j) {
  PrivacyBudget b;
  b.product_id = j.value("product_id", std::string{});
  b.epsilon_total = j.value("epsilon_total", 0.0);
  b.epsilon_spent = j.value("epsilon_spent", 0.0);
  if (j.contains("ledger")) {
    for (const auto& je : j.at("ledger")) {
      b.ledger.push_back(
          {je.value("query_id", std::string{}), je.value("epsilon", 0.0)});
    }
  }
  return b;
}

Result<DpAnswer> dp_query(double true_answer, double sensitivity, double epsilon,
                          PrivacyBudget& budget, Rng& rng,
                          const std::string& query_id) {
  if (epsilon <= 0.0)
    return Error{ErrorCode::BudgetExhausted, "epsilon must be positive"};
  if (sensitivity < 0.0)
    return Error{ErrorCode::BudgetExhausted, "sensitivity must be non-negative"};
  if (budget.epsilon_spent + epsilon > budget.epsilon_total)
    return Error{ErrorCode::BudgetExhausted,
                 "budget " + budget.product_id + ": spent " +
                     std::to_string(budget.epsilon_spent) + " + " +
                     std::to_string(epsilon) + " exceeds " +
                     std::to_string(budget.epsilon_total)};
  double scale = sensitivity / epsilon;
  DpAnswer answer;
  answer.value = true_answer + rng.laplace(scale);
  budget.epsilon_spent += epsilon;
  budget.ledger.push_back({query_id, epsilon});
  answer.epsilon_spent_total = budget.epsilon_spent;
  return answer;
}

std::size_t PartitionedStore::total_payloads() const {
  std::size_t n = 0;
  for (const auto& [_, records] : payload_by_region) n += records.size();
  return n;
}

Result<std::string> route_partition(PartitionedStore& store,
                                    const canonical::CanonicalMeasurement& m,
                                    const AttrMap& asset_attrs) {
  auto it = asset_attrs.find("jurisdiction");
  if (it == asset_attrs.end() || !it->second.is_string())
    return Error{ErrorCode::UnknownJurisdiction,
                 "asset " + m.asset_id + " has no jurisdiction attribute"};
  const std::string region = it->second.as_string();
  store.payload_by_region[region].push_back(m);
  // Catalog metadata replicates globally; it names the measurement without
  // carrying its value.
  store.catalog.push_back({{"asset_id", m.asset_id},
                           {"concept", m.concept_name},
                           {"event_time", m.event_time},
                           {"region", region}});
  return region;
}

}  // namespace iotgov::privacy
