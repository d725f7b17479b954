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

#include "iotgov/simulator.hpp"

#include <algorithm>
#include <sstream>

#include "iotgov/rng.hpp"
#include "iotgov/sha256.hpp"

namespace iotgov::sim {

namespace {

struct DialectInfo {
  const char* value_field;
  const char* ts_field;
  const char* id_field;
};

DialectInfo dialect_info(const std::string& dialect) {
  if (dialect == "A") return {"value", "ts", "tag"};
  return {"val", "t_ms", "point"};
}

std::string local_iso_plus2(TimeMs utc_ms) {
  std::string s = format_iso8601(utc_ms + 2 * kMsPerHour);
  s.pop_back();  // trailing 'Z'
  return s + "+02:00";
}

std::string credential_for(std::uint64_t seed, const std::string& device_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Rng::derive_seed(seed, device_id)));
  return std::string("cred-") + buf;
}

contract::DataContract make_stream_contract(const Fleet::Stream& stream,
                                            const std::string& site_id,
                                            double range_min, double range_max,
                                            const std::string& vendor_unit,
                                            const std::string& concept_name) {
  contract::DataContract c;
  c.contract_id = stream.contract_id;
  c.version = {1, 0, 0};

  DialectInfo info = dialect_info(stream.dialect);
  schema::FieldDef id_field{info.id_field, schema::FieldType::String, true, {}, {}, {}};
  schema::FieldDef value_field{info.value_field, schema::FieldType::Float, true,
                               range_min, range_max, {}};
  schema::FieldDef ts_field{info.ts_field,
                            stream.dialect == "A" ? schema::FieldType::Timestamp
                                                  : schema::FieldType::Integer,
                            true,
                            {},
                            {},
                            {}};
  c.schema.fields = {id_field, value_field, ts_field};

  c.semantics[info.value_field] = {vendor_unit, 0.1, concept_name};
  c.temporal.expected_sample_rate_hz = 1.0;
  c.temporal.max_timestamp_drift_ms = 60 * kMsPerSecond;
  c.temporal.ordering = contract::OrderingGuarantee::PerDevice;
  c.ownership.domain = "manufacturing";
  c.ownership.producer = site_id;
  c.ownership.stewards = {{"steward-" + site_id, "R"},
                          {"quality-lead", "A"},
                          {"ops-center", "C"},
                          {"analytics", "I"}};
  c.quality_sla.completeness = 0.95;
  c.quality_sla.accuracy_max_deviation =
      stream.measurement == "temperature" ? 2.0 : 10.0;
  c.quality_sla.freshness_max_age_ms = 120 * kMsPerSecond;
  c.quality_sla.consistency = 0.90;
  c.quality_sla.accuracy_min = 0.90;
  c.quality_sla.validity_min = 0.90;
  c.compatibility = schema::CompatibilityMode::Backward;
  return c;
}

}  // namespace

nlohmann::json FleetSpec::to_json() const {
  return {{"sites", sites},
          {"lines_per_site", lines_per_site},
          {"assets_per_line", assets_per_line},
          {"sensors_per_asset", sensors_per_asset},
          {"jurisdictions", jurisdictions}};
}

FleetSpec FleetSpec::from_json(const nlohmann::json& j) {
  FleetSpec s;
  s.sites = j.value("sites", 2);
  s.lines_per_site = j.value("lines_per_site", 2);
  s.assets_per_line = j.value("assets_per_line", 3);
  s.sensors_per_asset = j.value("sensors_per_asset", 1);
  if (j.contains("jurisdictions"))
    s.jurisdictions = j.at("jurisdictions").get<std::vector<std::string>>();
  return s;
}

nlohmann::json Fleet::to_json() const {
  nlohmann::json jnodes = nlohmann::json::array();
  for (const auto& n : nodes) jnodes.push_back(n.to_json());
  nlohmann::json jdevices = nlohmann::json::array();
  for (const auto& d : devices) jdevices.push_back(d.to_json());
  nlohmann::json jcontracts = nlohmann::json::array();
  for (const auto& c : contracts) jcontracts.push_back(c.to_json());
  nlohmann::json jstreams = nlohmann::json::array();
  for (const auto& s : streams) {
    jstreams.push_back({{"signal", s.signal},
                        {"sensor", s.sensor_id},
                        {"device", s.device_id},
                        {"contract", s.contract_id},
                        {"dialect", s.dialect},
                        {"measurement", s.measurement},
                        {"base", s.base_canonical},
                        {"jitter", s.jitter_stddev}});
  }
  return {{"nodes", jnodes},
          {"devices", jdevices},
          {"contracts", jcontracts},
          {"mappings", mapping_document},
          {"bindings", bindings},
          {"streams", jstreams}};
}

Result<Fleet> generate_fleet(const FleetSpec& spec, std::uint64_t seed) {
  if (spec.sites < 1 || spec.lines_per_site < 1 || spec.assets_per_line < 1 ||
      spec.sensors_per_asset < 1)
    return Error{ErrorCode::BadSpec, "fleet spec requires at least one of each level"};
  if (spec.jurisdictions.empty())
    return Error{ErrorCode::BadSpec, "fleet spec requires at least one jurisdiction"};

  Fleet fleet;
  nlohmann::json mappings = nlohmann::json::array();

  asset::AssetNode enterprise;
  enterprise.id = "ent";
  enterprise.level = asset::Level::Enterprise;
  enterprise.lifecycle = asset::Lifecycle::Operation;
  enterprise.attributes = {{"jurisdiction", Value("GLOBAL")},
                           {"classification", Value("Internal")},
                           {"organization", Value("global-manufacturing")}};
  fleet.nodes.push_back(enterprise);

  int sensor_counter = 0;
  for (int s = 1; s <= spec.sites; ++s) {
    std::string site_id = "site" + std::to_string(s);
    std::string jurisdiction =
        spec.jurisdictions[(s - 1) % spec.jurisdictions.size()];
    std::string dialect = (s % 2 == 1) ? "A" : "B";

    asset::AssetNode site;
    site.id = site_id;
    site.level = asset::Level::Site;
    site.parent = "ent";
    site.lifecycle = asset::Lifecycle::Operation;
    site.attributes = {{"jurisdiction", Value(jurisdiction)},
                       {"geo_lat", Value(40.0 + s)},
                       {"geo_lon", Value(-3.0 - s)},
                       {"operational_hours", Value("24x7")}};
    fleet.nodes.push_back(site);

    for (int l = 1; l <= spec.lines_per_site; ++l) {
      std::string line_id = site_id + "-line" + std::to_string(l);
      asset::AssetNode line;
      line.id = line_id;
      line.level = asset::Level::Line;
      line.parent = site_id;
      line.lifecycle = asset::Lifecycle::Operation;
      line.attributes = {{"product_family", Value(l % 2 ? "hvac" : "boiler")},
                         {"schedule", Value("continuous")}};
      fleet.nodes.push_back(line);

      for (int a = 1; a <= spec.assets_per_line; ++a) {
        std::string asset_id = line_id + "-asset" + std::to_string(a);
        asset::AssetNode machine;
        machine.id = asset_id;
        machine.level = asset::Level::Asset;
        machine.parent = line_id;
        machine.lifecycle = asset::Lifecycle::Operation;
        machine.attributes = {{"manufacturer", Value(a % 2 ? "acme" : "umbra")},
                              {"criticality", Value(a == 1 ? "tier-1" : "tier-2")},
                              {"model", Value("mx-" + std::to_string(100 + a))}};
        fleet.nodes.push_back(machine);

        std::string comp_id = asset_id + "-comp";
        asset::AssetNode comp;
        comp.id = comp_id;
        comp.level = asset::Level::Component;
        comp.parent = asset_id;
        comp.lifecycle = asset::Lifecycle::Operation;
        comp.attributes = {{"part_number", Value("pn-" + std::to_string(7000 + a))},
                           {"firmware", Value("2.4.1")}};
        fleet.nodes.push_back(comp);

        for (int n = 1; n <= spec.sensors_per_asset; ++n) {
          ++sensor_counter;
          std::string sensor_id = comp_id + "-s" + std::to_string(n);
          bool is_temperature = (sensor_counter % 2 == 1);

          Fleet::Stream stream;
          stream.sensor_id = sensor_id;
          stream.device_id = "dev-" + sensor_id;
          stream.contract_id = "ct-" + sensor_id;
          stream.dialect = dialect;
          stream.measurement = is_temperature ? "temperature" : "pressure";
          stream.base_canonical = is_temperature ? 75.0 : 170.0;
          stream.jitter_stddev = is_temperature ? 1.0 : 5.0;

          std::string vendor_unit, concept_name;
          double range_min, range_max;
          if (is_temperature) {
            concept_name = "Measurement.Temperature";
            if (dialect == "A") {
              vendor_unit = "degF";
              range_min = 140.0;
              range_max = 240.0;
              stream.signal = "PLC" + std::to_string(s) + ".TT" +
                              std::to_string(sensor_counter);
            } else {
              vendor_unit = "K";
              range_min = 330.0;
              range_max = 370.0;
              stream.signal = "S7.DB" + std::to_string(s) + ".W" +
                              std::to_string(sensor_counter);
            }
          } else {
            concept_name = "Measurement.Pressure";
            if (dialect == "A") {
              vendor_unit = "psi";
              range_min = 10.0;
              range_max = 40.0;
              stream.signal = "PLC" + std::to_string(s) + ".PT" +
                              std::to_string(sensor_counter);
            } else {
              vendor_unit = "bar";
              range_min = 1.0;
              range_max = 3.0;
              stream.signal = "S7.DB" + std::to_string(s) + ".W" +
                              std::to_string(sensor_counter);
            }
          }

          asset::AssetNode sensor;
          sensor.id = sensor_id;
          sensor.level = asset::Level::Sensor;
          sensor.parent = comp_id;
          sensor.lifecycle = asset::Lifecycle::Operation;
          sensor.attributes = {{"measurement", Value(stream.measurement)},
                               {"units", Value(vendor_unit)},
                               {"sample_rate_hz", Value(1.0)},
                               {"accuracy_spec", Value(0.5)},
                               {"last_calibration", Value("2025-11-20")}};
          fleet.nodes.push_back(sensor);

          asset::DeviceIdentity device;
          device.device_id = stream.device_id;
          device.asset_ref = sensor_id;
          device.credential = credential_for(seed, stream.device_id);
          device.state = asset::DeviceState::Active;
          fleet.devices.push_back(device);

          fleet.contracts.push_back(make_stream_contract(
              stream, site_id, range_min, range_max, vendor_unit, concept_name));
          fleet.bindings[stream.signal] = stream.contract_id;

          DialectInfo info = dialect_info(stream.dialect);
          mappings.push_back(
              {{"signal", stream.signal},
               {"concept", concept_name},
               {"source_unit", vendor_unit},
               {"transform", {{"type", "affine"}, {"a", 1.0}, {"b", 0.0}}},
               {"value_field", info.value_field},
               {"timestamp_field", info.ts_field},
               {"clock_skew_bound_ms", 0}});
          fleet.streams.push_back(stream);
        }
      }
    }
  }
  fleet.mapping_document = {{"version", "1"}, {"mappings", mappings}};
  return fleet;
}

std::vector<std::string> default_policy_texts() {
  return {
      "policy ent-access layer enterprise category access version 1.0.0\n"
      "permit when subject.role == \"Analyst\" and subject.mfa == true and "
      "subject.jurisdiction == asset.jurisdiction\n"
      "permit when subject.role == \"Steward\" and subject.mfa == true\n",

      "policy ent-compliance layer enterprise category compliance version 1.0.0\n"
      "forbid when resource.classification == \"Restricted\" and "
      "env.residency_target != asset.jurisdiction\n"
      "retain 10y when asset.site.jurisdiction == \"EU\" and "
      "resource.category == \"quality-inspection\"\n",

      "policy ent-security layer enterprise category security version 1.0.0\n"
      "forbid when subject.role == \"external\" and resource.classification in "
      "{\"Confidential\", \"Restricted\"}\n",
  };
}

std::string_view fault_kind_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::UnitDrift: return "UnitDrift";
    case FaultKind::Dropout: return "Dropout";
    case FaultKind::Duplication: return "Duplication";
    case FaultKind::TimestampCorruption: return "TimestampCorruption";
    case FaultKind::SchemaDriftNoBump: return "SchemaDriftNoBump";
    case FaultKind::OutOfOrder: return "OutOfOrder";
    case FaultKind::DeviceRevocation: return "DeviceRevocation";
  }
  return "Dropout";
}

std::optional<FaultKind> fault_kind_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(FaultKind::DeviceRevocation); ++i) {
    auto kind = static_cast<FaultKind>(i);
    if (name == fault_kind_name(kind)) return kind;
  }
  return std::nullopt;
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json jfaults = nlohmann::json::array();
  for (const FaultSpec& f : faults) {
    nlohmann::json jf{{"at_s", f.at_ms / kMsPerSecond},
                      {"kind", std::string(fault_kind_name(f.kind))},
                      {"target", f.target}};
    if (f.rate > 0) jf["rate"] = f.rate;
    if (f.skew_ms != 0) jf["skew_s"] = f.skew_ms / kMsPerSecond;
    if (f.window_ms != 0) jf["window_s"] = f.window_ms / kMsPerSecond;
    if (!f.drift_mode.empty()) jf["drift"] = f.drift_mode;
    jfaults.push_back(jf);
  }
  return {{"seed", seed},
          {"duration_s", duration_ms / kMsPerSecond},
          {"fleet", fleet.to_json()},
          {"faults", jfaults},
          {"quality_window_s", quality_window_ms / kMsPerSecond},
          {"sample_fraction", sample_fraction}};
}

Result<Scenario> Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  s.seed = j.value("seed", std::uint64_t{42});
  s.duration_ms = static_cast<TimeMs>(j.value("duration_s", 100.0) * 1000.0);
  if (j.contains("fleet")) s.fleet = FleetSpec::from_json(j.at("fleet"));
  s.quality_window_ms =
      static_cast<TimeMs>(j.value("quality_window_s", 60.0) * 1000.0);
  s.sample_fraction = j.value("sample_fraction", 1.0);
  if (j.contains("policies"))
    s.policy_texts = j.at("policies").get<std::vector<std::string>>();
  if (j.contains("faults")) {
    for (const auto& jf : j.at("faults")) {
      FaultSpec f;
      f.at_ms = static_cast<TimeMs>(jf.value("at_s", 0.0) * 1000.0);
      auto kind = fault_kind_from_name(jf.value("kind", std::string{}));
      if (!kind)
        return Error{ErrorCode::ScenarioInvalid,
                     "unknown fault kind " + jf.value("kind", std::string{})};
      f.kind = *kind;
      f.rate = jf.value("rate", 0.0);
      f.skew_ms = static_cast<TimeMs>(jf.value("skew_s", 0.0) * 1000.0);
      f.window_ms = static_cast<TimeMs>(jf.value("window_s", 0.0) * 1000.0);
      f.target = jf.value("target", std::string{});
      f.drift_mode = jf.value("drift", "add-unknown-field");
      if (f.rate < 0.0 || f.rate > 1.0)
        return Error{ErrorCode::ScenarioInvalid, "fault rate outside [0,1]"};
      s.faults.push_back(f);
    }
  }
  return s;
}

TimeMs scenario_epoch() { return *parse_iso8601("2026-01-01T00:00:00Z"); }

nlohmann::json ScenarioResult::to_json() const {
  nlohmann::json jdet = nlohmann::json::array();
  for (const FaultDetection& d : detections) {
    jdet.push_back({{"kind", std::string(fault_kind_name(d.fault.kind))},
                    {"target", d.fault.target},
                    {"at_s", d.fault.at_ms / kMsPerSecond},
                    {"detected", d.detected},
                    {"latency_ms", d.latency_ms},
                    {"via", d.via},
                    {"affected", d.affected},
                    {"acted_on", d.acted_on}});
  }
  nlohmann::json jbreach = nlohmann::json::array();
  for (const auto& b : breaches) {
    jbreach.push_back({{"product", b.product_id},
                       {"dimension", b.dimension},
                       {"threshold", b.threshold},
                       {"observed", b.observed},
                       {"detected_at", b.detected_at},
                       {"routed_to", b.routed_to}});
  }
  nlohmann::json jscores = nlohmann::json::array();
  for (const auto& s : window_scores) {
    jscores.push_back({{"stream", s.stream_id},
                       {"window_start", s.window_start},
                       {"window_end", s.window_end},
                       {"completeness", s.dims.completeness},
                       {"accuracy", s.dims.accuracy},
                       {"freshness", s.dims.freshness},
                       {"consistency", s.dims.consistency},
                       {"validity", s.dims.validity},
                       {"composite", s.composite},
                       {"sample_fraction", s.sample_fraction},
                       {"accuracy_basis", s.dims.accuracy_from_ground_truth
                                              ? "ground-truth"
                                              : "declared-range"}});
  }
  return {{"produced", counters.produced},
          {"accepted", counters.accepted},
          {"warned", counters.warned},
          {"quarantined", counters.quarantined},
          {"rejected", counters.rejected},
          {"detections", jdet},
          {"breaches", jbreach},
          {"window_scores", jscores},
          {"event_digest", event_digest},
          {"audit_chain_valid", audit_chain_valid},
          {"validation_reports", validation_reports},
          {"report", report.to_json()}};
}

std::string ScenarioResult::summary() const {
  std::ostringstream out;
  out << "scenario: produced=" << counters.produced
      << " accepted=" << counters.accepted << " warned=" << counters.warned
      << " quarantined=" << counters.quarantined
      << " rejected=" << counters.rejected << "\n";
  for (const FaultDetection& d : detections) {
    out << "  fault " << fault_kind_name(d.fault.kind) << " on " << d.fault.target
        << (d.detected ? " detected via " + d.via + " after " +
                             std::to_string(d.latency_ms / 1000.0) + " s"
                       : " UNDETECTED")
        << "\n";
  }
  out << "  breaches: " << breaches.size()
      << ", audit chain: " << (audit_chain_valid ? "valid" : "BROKEN")
      << ", digest: " << event_digest.substr(0, 16) << "\n";
  return out.str();
}

Result<ScenarioResult> run_scenario(const Scenario& scenario) {
  ScenarioContext ctx;
  return run_scenario(scenario, ctx);
}

Result<ScenarioResult> run_scenario(const Scenario& scenario, ScenarioContext& ctx) {
  if (scenario.duration_ms <= 0)
    return Error{ErrorCode::ScenarioInvalid, "duration must be positive"};
  if (scenario.sample_fraction <= 0.0 || scenario.sample_fraction > 1.0)
    return Error{ErrorCode::ScenarioInvalid, "sample fraction outside (0,1]"};

  auto fleet = generate_fleet(scenario.fleet, scenario.seed);
  if (!fleet.ok()) return fleet.error();
  ctx.fleet = std::move(fleet).take();

  const TimeMs t0 = scenario_epoch();
  auto baseline = canonical::CanonicalBaseline::standard();

  for (const asset::AssetNode& n : ctx.fleet.nodes) {
    if (auto r = ctx.assets.register_node(n); !r.ok()) return r.error();
  }
  for (const asset::DeviceIdentity& d : ctx.fleet.devices) {
    if (auto r = ctx.assets.register_device(d); !r.ok()) return r.error();
  }
  for (const contract::DataContract& c : ctx.fleet.contracts) {
    if (auto r = ctx.contracts.register_contract(c, baseline); !r.ok())
      return r.error();
    for (contract::ContractState target :
         {contract::ContractState::Review, contract::ContractState::Deployment,
          contract::ContractState::Enforcement}) {
      if (auto r = ctx.contracts.transition_state(c.contract_id, c.version, target, t0);
          !r.ok())
        return r.error();
    }
  }

  auto mapping_set =
      canonical::load_mapping_set(ctx.fleet.mapping_document, baseline);
  if (!mapping_set.ok()) return mapping_set.error();

  std::vector<policy::PolicyAst> policies;
  const auto texts = scenario.policy_texts.empty() ? default_policy_texts()
                                                   : scenario.policy_texts;
  for (const std::string& text : texts) {
    auto ast = policy::parse_policy(text);
    if (!ast.ok()) return ast.error();
    policies.push_back(std::move(ast).take());
  }
  auto effective = policy::compose_all(policies, t0);
  if (!effective.ok()) return effective.error();

  ctx.enforcement.emplace(ctx.assets, ctx.contracts, std::move(mapping_set).take(),
                          std::move(effective).take(), ctx.vault);
  boundary::EnforcementPoint& ep = *ctx.enforcement;
  for (const auto& [signal, contract_id] : ctx.fleet.bindings)
    ep.bind_stream(signal, contract_id);

  // Validate fault targets.
  std::map<std::string, const Fleet::Stream*> by_signal;
  std::map<std::string, const Fleet::Stream*> by_device;
  for (const Fleet::Stream& s : ctx.fleet.streams) {
    by_signal[s.signal] = &s;
    by_device[s.device_id] = &s;
  }
  for (const FaultSpec& f : scenario.faults) {
    if (f.kind == FaultKind::DeviceRevocation) {
      if (!by_device.contains(f.target))
        return Error{ErrorCode::UnknownStream, "no device " + f.target};
    } else if (!by_signal.contains(f.target)) {
      return Error{ErrorCode::UnknownStream, "no stream " + f.target};
    }
    if (f.at_ms < 0 || f.at_ms >= scenario.duration_ms)
      return Error{ErrorCode::ScenarioInvalid, "fault scheduled outside duration"};
  }

  ScenarioResult result;
  result.detections.reserve(scenario.faults.size());
  for (const FaultSpec& f : scenario.faults) {
    FaultDetection det;
    det.fault = f;
    result.detections.push_back(std::move(det));
  }

  std::map<std::string, Rng> gen_rng;
  for (const Fleet::Stream& s : ctx.fleet.streams)
    gen_rng.emplace(s.signal, Rng(Rng::derive_seed(scenario.seed, "gen:" + s.signal)));
  std::vector<Rng> fault_rng;
  for (std::size_t i = 0; i < scenario.faults.size(); ++i)
    fault_rng.emplace_back(
        Rng::derive_seed(scenario.seed, "fault:" + std::to_string(i)));
  std::vector<bool> revocation_applied(scenario.faults.size(), false);

  std::map<std::string, std::uint64_t> sequence;
  std::ostringstream event_log;

  auto scan_result = [&](const boundary::IngestResult& res, std::size_t fault_ix,
                         FaultKind kind, TimeMs now) {
    FaultDetection& det = result.detections[fault_ix];
    bool hit = false;
    switch (kind) {
      case FaultKind::UnitDrift:
        for (const auto& v : res.report.violations)
          if (v.kind == "range-exceedance") hit = true;
        break;
      case FaultKind::TimestampCorruption:
        for (const auto& v : res.report.violations)
          if (v.kind == "timestamp-drift") hit = true;
        break;
      case FaultKind::SchemaDriftNoBump:
        for (const auto& v : res.report.violations)
          if (v.kind == "unknown-field" || v.kind == "missing-required") hit = true;
        break;
      case FaultKind::OutOfOrder:
        for (const auto& v : res.report.violations)
          if (v.kind == "out-of-order") hit = true;
        break;
      case FaultKind::DeviceRevocation:
        hit = res.disposition == boundary::Disposition::Rejected;
        break;
      default:
        break;
    }
    ++det.affected;
    if (hit) {
      ++det.acted_on;
      if (!det.detected) {
        det.detected = true;
        det.detected_at = now;
        det.latency_ms = now - (t0 + det.fault.at_ms);
        switch (kind) {
          case FaultKind::UnitDrift: det.via = "range-violation"; break;
          case FaultKind::TimestampCorruption: det.via = "drift-violation"; break;
          case FaultKind::SchemaDriftNoBump: det.via = "schema-violation"; break;
          case FaultKind::OutOfOrder: det.via = "ordering-violation"; break;
          case FaultKind::DeviceRevocation: det.via = "admission-reject"; break;
          default: break;
        }
      }
    }
  };

  for (TimeMs t = 0; t < scenario.duration_ms; t += kMsPerSecond) {
    const TimeMs now = t0 + t;

    for (std::size_t i = 0; i < scenario.faults.size(); ++i) {
      const FaultSpec& f = scenario.faults[i];
      if (f.kind == FaultKind::DeviceRevocation && !revocation_applied[i] &&
          t >= f.at_ms) {
        revocation_applied[i] = true;
        auto s = ctx.assets.revoke_device(f.target);
        if (!s.ok()) return s.error();
        event_log << t / 1000 << "|revoke|" << f.target << "\n";
      }
    }

    for (const Fleet::Stream& stream : ctx.fleet.streams) {
      Rng& rng = gen_rng.at(stream.signal);
      double true_value = stream.base_canonical +
                          rng.gaussian(0.0, stream.jitter_stddev);

      // Stream faults active at this tick.
      bool dropped = false;
      bool unit_drift = false;
      bool schema_drift_add = false, schema_drift_drop = false;
      TimeMs skew = 0;
      TimeMs shuffle = 0;
      double dup_rate = 0.0;
      std::size_t dup_ix = 0;
      for (std::size_t i = 0; i < scenario.faults.size(); ++i) {
        const FaultSpec& f = scenario.faults[i];
        if (f.target != stream.signal || t < f.at_ms) continue;
        switch (f.kind) {
          case FaultKind::Dropout:
            if (fault_rng[i].bernoulli(f.rate)) dropped = true;
            break;
          case FaultKind::UnitDrift:
            unit_drift = true;
            break;
          case FaultKind::TimestampCorruption:
            skew = f.skew_ms;
            break;
          case FaultKind::SchemaDriftNoBump:
            if (f.drift_mode == "drop-required-field")
              schema_drift_drop = true;
            else
              schema_drift_add = true;
            break;
          case FaultKind::OutOfOrder:
            shuffle = static_cast<TimeMs>(fault_rng[i].uniform01() *
                                          static_cast<double>(f.window_ms));
            break;
          case FaultKind::Duplication:
            dup_rate = f.rate;
            dup_ix = i;
            break;
          default:
            break;
        }
      }

      if (dropped) {
        result.dropout_truth[stream.signal].dropped++;
        event_log << t / 1000 << "|" << stream.signal << "|dropped\n";
        continue;
      }
      result.dropout_truth[stream.signal].produced++;

      DialectInfo info = dialect_info(stream.dialect);
      const std::string vendor_unit =
          stream.measurement == "temperature"
              ? (stream.dialect == "A" ? "degF" : "K")
              : (stream.dialect == "A" ? "psi" : "bar");
      const std::string canonical_unit =
          stream.measurement == "temperature" ? "degC" : "kPa";

      double vendor_value;
      if (unit_drift) {
        // The source was "recalibrated": it now emits canonical-magnitude
        // numbers while the contract still declares the vendor unit.
        vendor_value = true_value;
      } else {
        auto converted = canonical::convert_unit(true_value, canonical_unit, vendor_unit);
        if (!converted.ok()) return converted.error();
        vendor_value = converted.value();
      }

      TimeMs event_ts = now + skew - shuffle;

      nlohmann::json payload;
      payload[info.id_field] = stream.signal;
      if (!schema_drift_drop) payload[info.value_field] = vendor_value;
      if (stream.dialect == "A") {
        payload[info.ts_field] = local_iso_plus2(event_ts);
      } else {
        payload[info.ts_field] = event_ts;
      }
      if (schema_drift_add) payload["line_voltage"] = 230;

      boundary::TelemetryMessage msg;
      msg.device_id = stream.device_id;
      msg.credential = credential_for(scenario.seed, stream.device_id);
      msg.signal = stream.signal;
      msg.payload = payload;
      msg.event_time = event_ts;
      msg.sequence = ++sequence[stream.device_id];

      ep.set_truth_hint(true_value);
      boundary::IngestResult res = ep.ingest(msg, now);
      ep.clear_truth_hint();
      ++result.validation_reports;
      event_log << t / 1000 << "|" << stream.signal << "|"
                << disposition_name(res.disposition) << "\n";

      for (std::size_t i = 0; i < scenario.faults.size(); ++i) {
        const FaultSpec& f = scenario.faults[i];
        bool targeted = f.kind == FaultKind::DeviceRevocation
                            ? f.target == stream.device_id
                            : f.target == stream.signal;
        if (targeted && t >= f.at_ms) scan_result(res, i, f.kind, now);
      }

      if (dup_rate > 0.0 && fault_rng[dup_ix].bernoulli(dup_rate)) {
        ep.set_truth_hint(true_value);
        boundary::IngestResult dup = ep.ingest(msg, now);
        ep.clear_truth_hint();
        ++result.validation_reports;
        event_log << t / 1000 << "|" << stream.signal << "|dup-"
                  << disposition_name(dup.disposition) << "\n";
      }
    }
  }

  // Tumbling windows over the whole run, per stream.
  std::size_t windows_evaluated = 0, windows_with_breach = 0;
  const auto& observations = ep.observations();
  for (const Fleet::Stream& stream : ctx.fleet.streams) {
    auto contract = ctx.contracts.resolve(stream.contract_id, std::nullopt,
                                          t0 + scenario.duration_ms);
    if (!contract.ok()) continue;
    for (TimeMs ws = 0; ws < scenario.duration_ms; ws += scenario.quality_window_ms) {
      TimeMs window_start = t0 + ws;
      TimeMs window_end =
          t0 + std::min(ws + scenario.quality_window_ms, scenario.duration_ms);
      std::vector<quality::MessageObservation> window;
      for (const auto& obs : observations) {
        if (obs.stream_id != stream.contract_id) continue;
        if (obs.event_time < window_start || obs.event_time >= window_end) continue;
        window.push_back(obs);
      }
      auto dims = quality::compute_dimension_scores(
          window, contract.value(), window_start, window_end,
          scenario.sample_fraction,
          Rng::derive_seed(scenario.seed, "window:" + stream.signal + ":" +
                                              std::to_string(ws)));
      if (!dims.ok()) continue;
      quality::QualityScore score;
      score.stream_id = stream.contract_id;
      score.window_start = window_start;
      score.window_end = window_end;
      score.dims = dims.value();
      score.sample_fraction = scenario.sample_fraction;
      auto composite = quality::composite_score(dims.value(), quality::Weights{});
      score.composite = composite.ok() ? composite.value() : 0.0;
      result.window_scores.push_back(score);
      ++windows_evaluated;

      auto breaches = quality::evaluate_sla(stream.contract_id, score, contract.value());
      if (breaches.ok() && !breaches->empty()) {
        ++windows_with_breach;
        for (const auto& b : breaches.value()) result.breaches.push_back(b);
        // SLA-based detection for rate faults on this stream.
        for (std::size_t i = 0; i < scenario.faults.size(); ++i) {
          const FaultSpec& f = scenario.faults[i];
          if (f.target != stream.signal) continue;
          if (t0 + f.at_ms >= window_end) continue;
          FaultDetection& det = result.detections[i];
          bool relevant =
              (f.kind == FaultKind::Dropout &&
               std::any_of(breaches->begin(), breaches->end(),
                           [](const auto& b) { return b.dimension == "completeness"; })) ||
              (f.kind == FaultKind::UnitDrift &&
               std::any_of(breaches->begin(), breaches->end(), [](const auto& b) {
                 return b.dimension == "accuracy" || b.dimension == "validity";
               }));
          if (relevant && !det.detected) {
            det.detected = true;
            det.detected_at = window_end;
            det.latency_ms = window_end - (t0 + f.at_ms);
            det.via = "sla-breach:" +
                      (f.kind == FaultKind::Dropout ? std::string("completeness")
                                                    : std::string("accuracy"));
          }
        }
      }

      // Duplication shows as more messages than distinct slots.
      for (std::size_t i = 0; i < scenario.faults.size(); ++i) {
        const FaultSpec& f = scenario.faults[i];
        if (f.kind != FaultKind::Duplication || f.target != stream.signal) continue;
        if (t0 + f.at_ms >= window_end) continue;
        std::set<TimeMs> distinct;
        for (const auto& obs : window) distinct.insert(obs.event_time);
        if (window.size() > distinct.size() && !result.detections[i].detected) {
          result.detections[i].detected = true;
          result.detections[i].detected_at = window_end;
          result.detections[i].latency_ms = window_end - (t0 + f.at_ms);
          result.detections[i].via = "duplicate-detection";
        }
      }
    }
  }

  result.counters = ep.counters();
  result.audit_chain_valid = ep.audit_log().verify().valid;
  result.event_digest = sha256_hex(event_log.str());

  quality::ReportInputs inputs;
  for (const FaultDetection& d : result.detections) {
    if (d.detected)
      inputs.detections.push_back({t0 + d.fault.at_ms, d.detected_at});
  }
  inputs.breaches = result.breaches;
  inputs.audit_records = ep.audit_log().records();
  inputs.validation_by_severity = ep.validation_severity_counts();
  inputs.windows_evaluated = windows_evaluated;
  inputs.windows_with_breach = windows_with_breach;
  inputs.streams_total = ctx.fleet.streams.size();
  inputs.streams_governed = ctx.fleet.bindings.size();
  result.report = quality::governance_report(inputs);
  return result;
}

}  // namespace iotgov::sim
