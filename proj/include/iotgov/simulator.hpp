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
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/asset_registry.hpp"
#include "iotgov/boundary.hpp"
#include "iotgov/canonical.hpp"
#include "iotgov/contract.hpp"
#include "iotgov/policy_engine.hpp"
#include "iotgov/quality.hpp"

namespace iotgov::sim {

struct FleetSpec {
  int sites = 2;
  int lines_per_site = 2;
  int assets_per_line = 3;
  int sensors_per_asset = 1;
  std::vector<std::string> jurisdictions = {"EU", "US"};  // cycled across sites

  nlohmann::json to_json() const;
  static FleetSpec from_json(const nlohmann::json& j);
};

// Everything a scenario needs to run the full pipeline: hierarchy, devices,
// per-stream contracts, vendor mappings, and stream bindings. Two synthetic
// vendor dialects: "A" tags PLC<n>.TT<n>/PT<n>, reports degF/psi with zoned
// ISO timestamps; "B" tags S7.DB<n>.W<n>, reports K/bar with epoch millis.
struct Fleet {
  std::vector<asset::AssetNode> nodes;
  std::vector<asset::DeviceIdentity> devices;
  std::vector<contract::DataContract> contracts;
  nlohmann::json mapping_document;
  std::map<std::string, std::string> bindings;  // signal -> contract_id

  struct Stream {
    std::string signal;
    std::string sensor_id;
    std::string device_id;
    std::string contract_id;
    std::string dialect;       // "A" | "B"
    std::string measurement;   // "temperature" | "pressure"
    double base_canonical = 0.0;
    double jitter_stddev = 0.0;
  };
  std::vector<Stream> streams;

  nlohmann::json to_json() const;
};

Result<Fleet> generate_fleet(const FleetSpec& spec, std::uint64_t seed);

// Built-in layered policy corpus used when a scenario names no policy files.
std::vector<std::string> default_policy_texts();

enum class FaultKind {
  UnitDrift,
  Dropout,
  Duplication,
  TimestampCorruption,
  SchemaDriftNoBump,
  OutOfOrder,
  DeviceRevocation,
};

std::string_view fault_kind_name(FaultKind kind);
std::optional<FaultKind> fault_kind_from_name(const std::string& name);

struct FaultSpec {
  TimeMs at_ms = 0;  // offset from scenario start
  FaultKind kind = FaultKind::Dropout;
  double rate = 0.0;      // Dropout / Duplication
  TimeMs skew_ms = 0;     // TimestampCorruption
  TimeMs window_ms = 0;   // OutOfOrder
  std::string target;     // signal, or device id for DeviceRevocation
  // SchemaDriftNoBump flavor: add-unknown-field | drop-required-field
  std::string drift_mode = "add-unknown-field";
};

struct Scenario {
  std::uint64_t seed = 42;
  TimeMs duration_ms = 100 * kMsPerSecond;
  FleetSpec fleet;
  std::vector<FaultSpec> faults;
  TimeMs quality_window_ms = 60 * kMsPerSecond;
  double sample_fraction = 1.0;
  std::vector<std::string> policy_texts;  // defaults when empty

  nlohmann::json to_json() const;
  static Result<Scenario> from_json(const nlohmann::json& j);
};

struct FaultDetection {
  FaultSpec fault;
  bool detected = false;
  TimeMs detected_at = 0;  // absolute simulated time
  TimeMs latency_ms = 0;
  std::string via;  // range-violation | sla-breach:<dim> | admission-reject | ...
  // Per-message accounting on the fault's target after the injection time.
  std::uint64_t affected = 0;
  std::uint64_t acted_on = 0;
};

struct DropoutTruth {
  std::string signal;
  std::uint64_t produced = 0;
  std::uint64_t dropped = 0;

  double retention() const {
    std::uint64_t total = produced + dropped;
    return total == 0 ? 1.0 : static_cast<double>(produced) / static_cast<double>(total);
  }
};

struct ScenarioResult {
  boundary::BoundaryCounters counters;
  std::vector<FaultDetection> detections;
  std::vector<quality::QualityScore> window_scores;
  std::vector<quality::SlaBreach> breaches;
  std::map<std::string, DropoutTruth> dropout_truth;  // per targeted signal
  quality::GovernanceReport report;
  std::string event_digest;
  bool audit_chain_valid = false;
  std::size_t validation_reports = 0;

  nlohmann::json to_json() const;
  std::string summary() const;
};

// Simulated start instant: 2026-01-01T00:00:00Z.
TimeMs scenario_epoch();

Result<ScenarioResult> run_scenario(const Scenario& scenario);

// Runs the scenario against caller-provided state; the simple overload wires
// everything up itself. Exposed so tests can inspect the enforcement point.
struct ScenarioContext {
  asset::AssetRegistry assets;
  contract::ContractRegistry contracts;
  privacy::TokenVault vault;
  std::optional<boundary::EnforcementPoint> enforcement;
  Fleet fleet;
};

Result<ScenarioResult> run_scenario(const Scenario& scenario, ScenarioContext& ctx);

}  // namespace iotgov::sim
