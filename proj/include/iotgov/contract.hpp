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
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/canonical.hpp"
#include "iotgov/errors.hpp"
#include "iotgov/schema.hpp"
#include "iotgov/semver.hpp"
#include "iotgov/simtime.hpp"

namespace iotgov::contract {

enum class ContractState {
  Definition,
  Review,
  Deployment,
  Enforcement,
  Evolution,
  Retirement,
};

std::string_view contract_state_name(ContractState state);
std::optional<ContractState> contract_state_from_name(const std::string& name);

enum class TimestampSemantics { Event, Ingestion };
enum class OrderingGuarantee { None, PerDevice };

struct FieldSemantics {
  std::string unit;
  double precision = 0.0;
  std::string canonical_concept;
};

struct TemporalSpec {
  TimestampSemantics timestamp_semantics = TimestampSemantics::Event;
  double expected_sample_rate_hz = 1.0;
  TimeMs max_timestamp_drift_ms = 60 * kMsPerSecond;
  OrderingGuarantee ordering = OrderingGuarantee::PerDevice;
};

// R / A / C / I role letters per steward.
struct Steward {
  std::string name;
  std::string role;
};

struct Ownership {
  std::string domain;
  std::string producer;  // plant or system
  std::vector<Steward> stewards;

  std::optional<std::string> responsible() const {
    for (const auto& s : stewards) {
      if (s.role == "R") return s.name;
    }
    return std::nullopt;
  }
};

// Declared quality SLA. completeness/consistency are minimum score fractions;
// accuracy_max_deviation and freshness_max_age bound individual samples.
// Minimum score fractions for accuracy/freshness/validity are optional knobs
// for products that want breach alerts on those dimensions too.
struct QualitySla {
  double completeness = 0.0;
  double accuracy_max_deviation = 0.0;
  TimeMs freshness_max_age_ms = 0;
  double consistency = 0.0;
  std::optional<double> accuracy_min;
  std::optional<double> freshness_min;
  std::optional<double> validity_min;
};

struct DataContract {
  std::string contract_id;
  SemVer version;
  schema::StructSchema schema;
  std::map<std::string, FieldSemantics> semantics;  // field name -> annotations
  TemporalSpec temporal;
  Ownership ownership;
  QualitySla quality_sla;
  schema::CompatibilityMode compatibility = schema::CompatibilityMode::Backward;
  ContractState state = ContractState::Definition;
  std::optional<TimeMs> end_of_life;  // set on Retirement
  // Migration window communicated to consumers on breaking changes;
  // metadata only, nothing enforces it.
  std::optional<TimeMs> migration_window_ms;

  nlohmann::json to_json() const;
  static Result<DataContract> from_json(const nlohmann::json& j);
};

struct Subscription {
  std::string consumer;
  std::string contract_id;
  SemVer version;
};

struct ImpactEntry {
  std::string consumer;
  SemVer version;
  bool deprecated = false;  // subscribed version is retired
};

class ContractRegistry {
 public:
  explicit ContractRegistry(TimeMs retirement_grace_ms = 30 * kMsPerDay)
      : grace_ms_(retirement_grace_ms) {}

  // Validates shape, resolves canonical concepts against the baseline, and
  // requires strict version monotonicity per contract_id. Stored versions are
  // immutable; state transitions happen through transition_state.
  Result<SemVer> register_contract(const DataContract& contract,
                                   const canonical::CanonicalBaseline& baseline);

  Result<ContractState> transition_state(const std::string& contract_id,
                                         const SemVer& version,
                                         ContractState target, TimeMs now);

  // Exact version when given; otherwise the latest enforcement-eligible
  // version (Enforcement, Evolution, or Retirement still within grace).
  Result<DataContract> resolve(const std::string& contract_id,
                               std::optional<SemVer> version, TimeMs now) const;

  Result<DataContract> latest(const std::string& contract_id) const;
  std::vector<SemVer> versions(const std::string& contract_id) const;

  Status subscribe(const std::string& consumer, const std::string& contract_id,
                   const SemVer& version);
  Result<std::vector<ImpactEntry>> impact_analysis(const std::string& contract_id) const;

  // Semver gate used at publication: a change classified `major` must raise
  // the major component, `minor` at least the minor component.
  static Status enforce_semver(const DataContract& prev, const DataContract& next);

  bool enforcement_eligible(const DataContract& contract, TimeMs now) const;

  std::vector<std::string> contract_ids() const;
  TimeMs grace_ms() const { return grace_ms_; }

  nlohmann::json to_json() const;
  Status load(const nlohmann::json& doc,
              const canonical::CanonicalBaseline& baseline);

 private:
  mutable std::shared_mutex mutex_;
  TimeMs grace_ms_;
  // contract_id -> versions in ascending order
  std::map<std::string, std::vector<DataContract>> contracts_;
  std::vector<Subscription> subscriptions_;
};

// Shape checks that do not need the registry: schema validity, semantics
// referencing real fields, SLA ranges, declared compatibility.
Status validate_contract_shape(const DataContract& contract);

}  // namespace iotgov::contract
