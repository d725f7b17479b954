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

#include "iotgov/contract.hpp"
#include <mutex>

#include <algorithm>

namespace iotgov::contract {

namespace {

constexpr std::string_view kStateNames[] = {"Definition", "Review",
                                            "Deployment", "Enforcement",
                                            "Evolution",  "Retirement"};

bool state_transition_legal(ContractState from, ContractState to) {
  switch (from) {
    case ContractState::Definition:
      return to == ContractState::Review;
    case ContractState::Review:
      return to == ContractState::Deployment;
    case ContractState::Deployment:
      return to == ContractState::Enforcement;
    case ContractState::Enforcement:
      return to == ContractState::Evolution || to == ContractState::Retirement;
    case ContractState::Evolution:
      return to == ContractState::Review;
    case ContractState::Retirement:
      return false;  // terminal
  }
  return false;
}

}  // namespace

std::string_view contract_state_name(ContractState state) {
  return kStateNames[static_cast<int>(state)];
}

std::optional<ContractState> contract_state_from_name(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kStateNames[i]) return static_cast<ContractState>(i);
  }
  return std::nullopt;
}

nlohmann::json DataContract::to_json() const {
  nlohmann::json sem = nlohmann::json::object();
  for (const auto& [field, s] : semantics) {
    sem[field] = {{"unit", s.unit},
                  {"precision", s.precision},
                  {"concept", s.canonical_concept}};
  }
  nlohmann::json stewards = nlohmann::json::array();
  for (const auto& s : ownership.stewards)
    stewards.push_back({{"name", s.name}, {"role", s.role}});

  nlohmann::json sla{{"completeness", quality_sla.completeness},
                     {"accuracy_max_deviation", quality_sla.accuracy_max_deviation},
                     {"freshness_max_age_s",
                      quality_sla.freshness_max_age_ms / kMsPerSecond},
                     {"consistency", quality_sla.consistency}};
  if (quality_sla.accuracy_min) sla["accuracy"] = *quality_sla.accuracy_min;
  if (quality_sla.freshness_min) sla["freshness"] = *quality_sla.freshness_min;
  if (quality_sla.validity_min) sla["validity"] = *quality_sla.validity_min;

  nlohmann::json j{
      {"contract_id", contract_id},
      {"version", version.str()},
      {"schema", schema.to_json()},
      {"semantics", sem},
      {"temporal",
       {{"timestamp_semantics",
         temporal.timestamp_semantics == TimestampSemantics::Event ? "event"
                                                                   : "ingestion"},
        {"expected_sample_rate_hz", temporal.expected_sample_rate_hz},
        {"max_timestamp_drift_s", temporal.max_timestamp_drift_ms / kMsPerSecond},
        {"ordering",
         temporal.ordering == OrderingGuarantee::PerDevice ? "per-device" : "none"}}},
      {"ownership",
       {{"domain", ownership.domain},
        {"producer", ownership.producer},
        {"stewards", stewards}}},
      {"quality_sla", sla},
      {"compatibility", std::string(schema::compatibility_mode_name(compatibility))},
      {"state", std::string(contract_state_name(state))}};
  if (end_of_life) j["end_of_life"] = *end_of_life;
  if (migration_window_ms) j["migration_window_ms"] = *migration_window_ms;
  return j;
}

Result<DataContract> DataContract::from_json(const nlohmann::json& j) {
  DataContract c;
  if (!j.contains("contract_id") || !j.contains("version") || !j.contains("schema"))
    return Error{ErrorCode::MalformedContract,
                 "contract requires contract_id, version, schema"};
  c.contract_id = j.at("contract_id").get<std::string>();
  auto version = SemVer::parse(j.at("version").get<std::string>());
  if (!version)
    return Error{ErrorCode::MalformedContract,
                 "bad version on contract " + c.contract_id};
  c.version = *version;

  auto schema = schema::StructSchema::from_json(j.at("schema"));
  if (!schema.ok()) return schema.error();
  c.schema = std::move(schema).take();

  if (j.contains("semantics")) {
    for (auto it = j.at("semantics").begin(); it != j.at("semantics").end(); ++it) {
      FieldSemantics s;
      s.unit = it.value().value("unit", std::string{});
      s.precision = it.value().value("precision", 0.0);
      s.canonical_concept = it.value().value("concept", std::string{});
      c.semantics[it.key()] = s;
    }
  }

  if (j.contains("temporal")) {
    const auto& jt = j.at("temporal");
    c.temporal.timestamp_semantics =
        jt.value("timestamp_semantics", "event") == std::string("ingestion")
            ? TimestampSemantics::Ingestion
            : TimestampSemantics::Event;
    c.temporal.expected_sample_rate_hz = jt.value("expected_sample_rate_hz", 1.0);
    c.temporal.max_timestamp_drift_ms =
        static_cast<TimeMs>(jt.value("max_timestamp_drift_s", 60.0) * 1000.0);
    c.temporal.ordering = jt.value("ordering", "per-device") == std::string("none")
                              ? OrderingGuarantee::None
                              : OrderingGuarantee::PerDevice;
  }

  if (j.contains("ownership")) {
    const auto& jo = j.at("ownership");
    c.ownership.domain = jo.value("domain", std::string{});
    c.ownership.producer = jo.value("producer", std::string{});
    if (jo.contains("stewards")) {
      for (const auto& js : jo.at("stewards")) {
        c.ownership.stewards.push_back(
            {js.value("name", std::string{}), js.value("role", std::string{})});
      }
    }
  }

  if (j.contains("quality_sla")) {
    const auto& js = j.at("quality_sla");
    c.quality_sla.completeness = js.value("completeness", 0.0);
    c.quality_sla.accuracy_max_deviation = js.value("accuracy_max_deviation", 0.0);
    c.quality_sla.freshness_max_age_ms =
        static_cast<TimeMs>(js.value("freshness_max_age_s", 0.0) * 1000.0);
    c.quality_sla.consistency = js.value("consistency", 0.0);
    if (js.contains("accuracy")) c.quality_sla.accuracy_min = js.at("accuracy").get<double>();
    if (js.contains("freshness"))
      c.quality_sla.freshness_min = js.at("freshness").get<double>();
    if (js.contains("validity")) c.quality_sla.validity_min = js.at("validity").get<double>();
  }

  // Compatibility must be declared; silently defaulting it would hide the
  // most consequential clause of the contract.
  if (!j.contains("compatibility"))
    return Error{ErrorCode::MalformedContract,
                 "contract " + c.contract_id + " does not declare compatibility"};
  auto mode = schema::compatibility_mode_from_name(j.at("compatibility").get<std::string>());
  if (!mode)
    return Error{ErrorCode::MalformedContract,
                 "unknown compatibility mode on " + c.contract_id};
  c.compatibility = *mode;

  if (j.contains("state")) {
    auto state = contract_state_from_name(j.at("state").get<std::string>());
    if (!state)
      return Error{ErrorCode::MalformedContract, "unknown state on " + c.contract_id};
    c.state = *state;
  }
  if (j.contains("end_of_life")) c.end_of_life = j.at("end_of_life").get<TimeMs>();
  if (j.contains("migration_window_ms"))
    c.migration_window_ms = j.at("migration_window_ms").get<TimeMs>();
  return c;
}

Status validate_contract_shape(const DataContract& contract) {
  if (contract.contract_id.empty())
    return Error{ErrorCode::MalformedContract, "empty contract_id"};
  if (auto s = contract.schema.validate(); !s.ok()) return s;
  for (const auto& [field, _] : contract.semantics) {
    if (!contract.schema.find(field))
      return Error{ErrorCode::MalformedContract,
                   "semantics reference unknown field " + field};
  }
  const auto& sla = contract.quality_sla;
  if (sla.completeness < 0.0 || sla.completeness > 1.0 || sla.consistency < 0.0 ||
      sla.consistency > 1.0)
    return Error{ErrorCode::MalformedContract,
                 "quality SLA fractions must lie in [0,1]"};
  if (sla.accuracy_max_deviation < 0.0 || sla.freshness_max_age_ms < 0)
    return Error{ErrorCode::MalformedContract, "quality SLA bounds must be >= 0"};
  if (contract.temporal.expected_sample_rate_hz <= 0.0)
    return Error{ErrorCode::MalformedContract, "sample rate must be positive"};
  return {};
}

Result<SemVer> ContractRegistry::register_contract(
    const DataContract& contract, const canonical::CanonicalBaseline& baseline) {
  if (auto s = validate_contract_shape(contract); !s.ok()) return s.error();
  for (const auto& [field, sem] : contract.semantics) {
    if (!sem.canonical_concept.empty() && !baseline.has_concept(sem.canonical_concept))
      return Error{ErrorCode::UnknownCanonicalConcept,
                   "field " + field + " maps to unknown concept " +
                       sem.canonical_concept};
  }

  std::unique_lock lock(mutex_);
  auto& versions = contracts_[contract.contract_id];
  if (!versions.empty() && contract.version <= versions.back().version)
    return Error{ErrorCode::NonMonotonicVersion,
                 "version " + contract.version.str() + " does not exceed latest " +
                     versions.back().version.str()};
  DataContract stored = contract;
  stored.state = ContractState::Definition;
  stored.end_of_life.reset();
  versions.push_back(std::move(stored));
  return contract.version;
}

Result<ContractState> ContractRegistry::transition_state(
    const std::string& contract_id, const SemVer& version, ContractState target,
    TimeMs now) {
  std::unique_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end())
    return Error{ErrorCode::UnknownContract, "unknown contract " + contract_id};
  for (DataContract& c : it->second) {
    if (c.version != version) continue;
    if (!state_transition_legal(c.state, target))
      return Error{ErrorCode::IllegalTransition,
                   std::string(contract_state_name(c.state)) + " -> " +
                       std::string(contract_state_name(target))};
    c.state = target;
    if (target == ContractState::Retirement) c.end_of_life = now;
    return c.state;
  }
  return Error{ErrorCode::UnknownContract,
               contract_id + "@" + version.str() + " not registered"};
}

bool ContractRegistry::enforcement_eligible(const DataContract& contract,
                                            TimeMs now) const {
  switch (contract.state) {
    case ContractState::Enforcement:
    case ContractState::Evolution:  // prior version keeps enforcing while a
                                    // replacement is drafted
      return true;
    case ContractState::Retirement:
      return contract.end_of_life && now < *contract.end_of_life + grace_ms_;
    default:
      return false;
  }
}

Result<DataContract> ContractRegistry::resolve(const std::string& contract_id,
                                               std::optional<SemVer> version,
                                               TimeMs now) const {
  std::shared_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end())
    return Error{ErrorCode::UnknownContract, "unknown contract " + contract_id};
  if (version) {
    for (const DataContract& c : it->second) {
      if (c.version == *version) return c;
    }
    return Error{ErrorCode::UnknownContract,
                 contract_id + "@" + version->str() + " not registered"};
  }
  for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
    if (enforcement_eligible(*rit, now)) return *rit;
  }
  return Error{ErrorCode::NoEnforcedVersion,
               "no enforcement-eligible version of " + contract_id};
}

Result<DataContract> ContractRegistry::latest(const std::string& contract_id) const {
  std::shared_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end() || it->second.empty())
    return Error{ErrorCode::UnknownContract, "unknown contract " + contract_id};
  return it->second.back();
}

std::vector<SemVer> ContractRegistry::versions(const std::string& contract_id) const {
  std::shared_lock lock(mutex_);
  std::vector<SemVer> out;
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end()) return out;
  for (const DataContract& c : it->second) out.push_back(c.version);
  return out;
}

Status ContractRegistry::subscribe(const std::string& consumer,
                                   const std::string& contract_id,
                                   const SemVer& version) {
  std::unique_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end())
    return Error{ErrorCode::UnknownContract, "unknown contract " + contract_id};
  bool found = std::any_of(it->second.begin(), it->second.end(),
                           [&](const DataContract& c) { return c.version == version; });
  if (!found)
    return Error{ErrorCode::UnknownContract,
                 contract_id + "@" + version.str() + " not registered"};
  subscriptions_.push_back({consumer, contract_id, version});
  return {};
}

Result<std::vector<ImpactEntry>> ContractRegistry::impact_analysis(
    const std::string& contract_id) const {
  std::shared_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end())
    return Error{ErrorCode::UnknownContract, "unknown contract " + contract_id};
  std::vector<ImpactEntry> out;
  for (const Subscription& sub : subscriptions_) {
    if (sub.contract_id != contract_id) continue;
    bool deprecated = false;
    for (const DataContract& c : it->second) {
      if (c.version == sub.version && c.state == ContractState::Retirement)
        deprecated = true;
    }
    out.push_back({sub.consumer, sub.version, deprecated});
  }
  return out;
}

Status ContractRegistry::enforce_semver(const DataContract& prev,
                                        const DataContract& next) {
  VersionBump required = schema::classify_schema_change(prev.schema, next.schema);
  if (!bump_satisfied(prev.version, next.version, required)) {
    return Error{ErrorCode::IncompatibleContract,
                 "change requires a " + std::string(bump_name(required)) +
                     " bump over " + prev.version.str() + "; got " +
                     next.version.str()};
  }
  return {};
}

std::vector<std::string> ContractRegistry::contract_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : contracts_) out.push_back(id);
  return out;
}

nlohmann::json ContractRegistry::to_json() const {
  std::shared_lock lock(mutex_);
  nlohmann::json contracts = nlohmann::json::array();
  for (const auto& [_, versions] : contracts_) {
    for (const DataContract& c : versions) contracts.push_back(c.to_json());
  }
  nlohmann::json subs = nlohmann::json::array();
  for (const Subscription& s : subscriptions_) {
    subs.push_back({{"consumer", s.consumer},
                    {"contract_id", s.contract_id},
                    {"version", s.version.str()}});
  }
  return {{"contracts", contracts}, {"subscriptions", subs}};
}

Status ContractRegistry::load(const nlohmann::json& doc,
                              const canonical::CanonicalBaseline& baseline) {
  if (doc.contains("contracts")) {
    for (const auto& jc : doc.at("contracts")) {
      auto contract = DataContract::from_json(jc);
      if (!contract.ok()) return contract.error();
      auto state = contract->state;
      auto eol = contract->end_of_life;
      auto r = register_contract(contract.value(), baseline);
      if (!r.ok()) return r.error();
      // Restore persisted lifecycle state directly; transitions were already
      // validated when they happened.
      std::unique_lock lock(mutex_);
      auto& stored = contracts_[contract->contract_id].back();
      stored.state = state;
      stored.end_of_life = eol;
    }
  }
  if (doc.contains("subscriptions")) {
    for (const auto& js : doc.at("subscriptions")) {
      auto version = SemVer::parse(js.value("version", std::string{}));
      if (!version) return Error{ErrorCode::MalformedContract, "bad subscription version"};
      auto s = subscribe(js.value("consumer", std::string{}),
                         js.value("contract_id", std::string{}), *version);
      if (!s.ok()) return s;
    }
  }
  return {};
}

}  // namespace iotgov::contract
