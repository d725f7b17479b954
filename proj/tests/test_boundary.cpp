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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iotgov/boundary.hpp"
#include "iotgov/simulator.hpp"

using namespace iotgov;
using namespace iotgov::boundary;

namespace {

const TimeMs kT0 = 1'767'225'600'000;  // 2026-01-01T00:00:00Z

// One EU site with a single Fahrenheit temperature stream, plus a US site for
// relocation and residency cases.
struct Rig {
  asset::AssetRegistry assets;
  contract::ContractRegistry contracts;
  privacy::TokenVault vault;
  std::optional<EnforcementPoint> ep;

  Rig() {
    auto add = [&](const char* id, asset::Level level, const char* parent,
                   AttrMap attrs = {}) {
      asset::AssetNode n;
      n.id = id;
      n.level = level;
      if (parent) n.parent = parent;
      n.attributes = std::move(attrs);
      n.lifecycle = asset::Lifecycle::Operation;
      REQUIRE(assets.register_node(n).ok());
    };
    add("ent", asset::Level::Enterprise, nullptr,
        {{"jurisdiction", Value("GLOBAL")}, {"classification", Value("Internal")}});
    add("site-eu", asset::Level::Site, "ent", {{"jurisdiction", Value("EU")}});
    add("site-us", asset::Level::Site, "ent", {{"jurisdiction", Value("US")}});
    add("line-1", asset::Level::Line, "site-eu");
    add("press-1", asset::Level::Asset, "line-1");
    add("spindle-1", asset::Level::Component, "press-1");
    add("tt-1", asset::Level::Sensor, "spindle-1",
        {{"measurement", Value("temperature")}, {"units", Value("degF")}});

    REQUIRE(assets
                .register_device({"dev-1", "tt-1", "secret-1",
                                  asset::DeviceState::Active})
                .ok());

    auto baseline = canonical::CanonicalBaseline::standard();
    contract::DataContract c;
    c.contract_id = "ct-temp";
    c.version = {1, 0, 0};
    schema::FieldDef tag{"tag", schema::FieldType::String, true, {}, {}, {}};
    schema::FieldDef value{"value", schema::FieldType::Float, true, 140.0, 240.0, {}};
    schema::FieldDef ts{"ts", schema::FieldType::Timestamp, true, {}, {}, {}};
    c.schema.fields = {tag, value, ts};
    c.semantics["value"] = {"degF", 0.1, "Measurement.Temperature"};
    c.temporal.expected_sample_rate_hz = 1.0;
    c.temporal.max_timestamp_drift_ms = 60'000;
    c.ownership.domain = "manufacturing";
    c.ownership.producer = "site-eu";
    c.ownership.stewards = {{"ada", "R"}, {"grace", "A"}};
    c.quality_sla.completeness = 0.95;
    c.quality_sla.accuracy_max_deviation = 2.0;
    c.quality_sla.freshness_max_age_ms = 120'000;
    c.quality_sla.consistency = 0.9;
    c.compatibility = schema::CompatibilityMode::Backward;
    REQUIRE(contracts.register_contract(c, baseline).ok());
    for (auto state : {contract::ContractState::Review,
                       contract::ContractState::Deployment,
                       contract::ContractState::Enforcement}) {
      REQUIRE(contracts.transition_state("ct-temp", {1, 0, 0}, state, kT0).ok());
    }

    nlohmann::json mapping_doc{
        {"version", "1"},
        {"mappings",
         {{{"signal", "PLC1.TT1"},
           {"concept", "Measurement.Temperature"},
           {"source_unit", "degF"},
           {"transform", {{"type", "affine"}, {"a", 1.0}, {"b", 0.0}}},
           {"value_field", "value"},
           {"timestamp_field", "ts"}}}}};
    auto mappings = canonical::load_mapping_set(mapping_doc, baseline);
    REQUIRE(mappings.ok());

    std::vector<policy::PolicyAst> policies;
    for (const std::string& text : sim::default_policy_texts()) {
      auto ast = policy::parse_policy(text);
      REQUIRE(ast.ok());
      policies.push_back(std::move(ast).take());
    }
    auto effective = policy::compose_all(policies, kT0);
    REQUIRE(effective.ok());

    ep.emplace(assets, contracts, std::move(mappings).take(),
               std::move(effective).take(), vault);
    ep->bind_stream("PLC1.TT1", "ct-temp");
  }

  TelemetryMessage message(double fahrenheit = 167.0, TimeMs at = kT0) {
    TelemetryMessage m;
    m.device_id = "dev-1";
    m.credential = "secret-1";
    m.signal = "PLC1.TT1";
    m.payload = {{"tag", "PLC1.TT1"},
                 {"value", fahrenheit},
                 {"ts", format_iso8601(at)}};
    m.event_time = at;
    m.sequence = 1;
    return m;
  }
};

}  // namespace

TEST_CASE("ingest: compliant message is stored, acked, audited") {
  Rig rig;
  auto r = rig.ep->ingest(rig.message(), kT0);
  CHECK(r.disposition == Disposition::Accept);
  CHECK(r.acked);
  REQUIRE(r.stored.has_value());
  CHECK(r.stored->value == doctest::Approx(75.0));  // 167 degF
  CHECK(r.stored->unit == "degC");
  REQUIRE_FALSE(r.stored->lineage.empty());

  // Stored in the EU partition only.
  const auto& store = rig.ep->canonical_store();
  REQUIRE(store.payload_by_region.contains("EU"));
  CHECK(store.payload_by_region.at("EU").size() == 1);
  CHECK(store.total_payloads() == 1);

  CHECK(rig.ep->audit_log().size() == 1);
  CHECK(rig.ep->audit_log().verify().valid);
  CHECK(rig.ep->counters().accepted == 1);
}

TEST_CASE("ingest: missing required field quarantines and notifies the steward") {
  Rig rig;
  TelemetryMessage m = rig.message();
  m.payload.erase("value");
  auto r = rig.ep->ingest(m, kT0);
  CHECK(r.disposition == Disposition::Quarantine);
  CHECK_FALSE(r.acked);
  CHECK(r.nack_summary.find("missing-required") != std::string::npos);
  REQUIRE(rig.ep->quarantine_list().size() == 1);
  REQUIRE(rig.ep->notifications().size() == 1);
  CHECK(rig.ep->notifications()[0].steward == "ada");
  CHECK(rig.ep->counters().quarantined == 1);
}

TEST_CASE("ingest: out-of-range value warns but is not blocked") {
  Rig rig;
  auto r = rig.ep->ingest(rig.message(400.0), kT0);
  CHECK(r.disposition == Disposition::AcceptWithWarnings);
  CHECK(r.acked);
  REQUIRE(r.report.violations.size() == 1);
  CHECK(r.report.violations[0].kind == "range-exceedance");
  CHECK(r.report.violations[0].severity == Severity::Warning);
  CHECK(rig.ep->counters().warned == 1);
  CHECK(rig.ep->canonical_store().total_payloads() == 1);
}

TEST_CASE("ingest: unknown asset reference is a critical referential failure") {
  Rig rig;
  TelemetryMessage m = rig.message();
  m.payload["asset_id"] = "ghost-asset";
  auto r = rig.ep->ingest(m, kT0);
  CHECK(r.disposition == Disposition::Quarantine);
  bool referential = false;
  for (const auto& v : r.report.violations) {
    if (v.kind == "referential-integrity") referential = true;
  }
  CHECK(referential);
}

TEST_CASE("ingest: revoked device is rejected before validation") {
  Rig rig;
  REQUIRE(rig.assets.revoke_device("dev-1").ok());
  auto r = rig.ep->ingest(rig.message(), kT0);
  CHECK(r.disposition == Disposition::Rejected);
  CHECK_FALSE(r.acked);
  CHECK(rig.ep->counters().rejected == 1);
  CHECK(rig.ep->canonical_store().total_payloads() == 0);
  // Wrong credential also rejects.
  Rig rig2;
  TelemetryMessage spoof = rig2.message();
  spoof.credential = "guessed";
  CHECK(rig2.ep->ingest(spoof, kT0).disposition == Disposition::Rejected);
}

TEST_CASE("ingest: timestamp drift warns within 2x and quarantines beyond") {
  Rig rig;
  auto warn = rig.ep->ingest(rig.message(167.0, kT0 + 90'000), kT0);
  CHECK(warn.disposition == Disposition::AcceptWithWarnings);

  auto critical = rig.ep->ingest(rig.message(167.0, kT0 + 300'000), kT0);
  CHECK(critical.disposition == Disposition::Quarantine);
}

TEST_CASE("ingest: asset without a jurisdiction cannot be routed; fail closed") {
  Rig rig;
  // Strip every jurisdiction on the lineage so partition routing has nothing
  // to go on: the message must quarantine rather than land anywhere.
  asset::AssetRegistry bare;
  auto add = [&](const char* id, asset::Level level, const char* parent) {
    asset::AssetNode n;
    n.id = id;
    n.level = level;
    if (parent) n.parent = parent;
    n.lifecycle = asset::Lifecycle::Operation;
    REQUIRE(bare.register_node(n).ok());
  };
  add("ent", asset::Level::Enterprise, nullptr);
  add("site-x", asset::Level::Site, "ent");
  add("line-1", asset::Level::Line, "site-x");
  add("press-1", asset::Level::Asset, "line-1");
  add("spindle-1", asset::Level::Component, "press-1");
  add("tt-1", asset::Level::Sensor, "spindle-1");
  REQUIRE(bare.register_device({"dev-1", "tt-1", "secret-1",
                                asset::DeviceState::Active})
              .ok());

  auto baseline = canonical::CanonicalBaseline::standard();
  nlohmann::json mapping_doc{
      {"version", "1"},
      {"mappings",
       {{{"signal", "PLC1.TT1"},
         {"concept", "Measurement.Temperature"},
         {"source_unit", "degF"},
         {"transform", {{"type", "affine"}, {"a", 1.0}, {"b", 0.0}}},
         {"value_field", "value"},
         {"timestamp_field", "ts"}}}}};
  auto mappings = canonical::load_mapping_set(mapping_doc, baseline);
  REQUIRE(mappings.ok());
  EnforcementPoint ep(bare, rig.contracts, std::move(mappings).take(),
                      policy::EffectivePolicy{}, rig.vault);
  ep.bind_stream("PLC1.TT1", "ct-temp");

  auto r = ep.ingest(rig.message(), kT0);
  CHECK(r.disposition == Disposition::Quarantine);
  bool unroutable = false;
  for (const auto& v : r.report.violations) {
    if (v.kind == "unknown-jurisdiction") unroutable = true;
  }
  CHECK(unroutable);
  CHECK(ep.canonical_store().total_payloads() == 0);
}

TEST_CASE("ingest: every message yields one report and audit appends") {
  Rig rig;
  std::size_t n = 0;
  rig.ep->ingest(rig.message(), kT0);
  ++n;
  TelemetryMessage bad = rig.message();
  bad.payload.erase("value");
  rig.ep->ingest(bad, kT0 + 1000);
  ++n;
  REQUIRE(rig.assets.revoke_device("dev-1").ok());
  rig.ep->ingest(rig.message(), kT0 + 2000);
  ++n;
  const auto& c = rig.ep->counters();
  CHECK(c.produced == n);
  CHECK(c.accepted + c.warned + c.quarantined + c.rejected == n);
  CHECK(rig.ep->audit_log().size() >= n);
  CHECK(rig.ep->audit_log().verify().valid);
}

TEST_CASE("quarantine: requeue after a contract fix accepts on second pass") {
  Rig rig;
  // New field appears before the contract declares it: drift, quarantined.
  TelemetryMessage m = rig.message();
  m.payload["humidity"] = 41.5;
  auto first = rig.ep->ingest(m, kT0);
  REQUIRE(first.disposition == Disposition::Quarantine);
  auto items = rig.ep->quarantine_list();
  REQUIRE(items.size() == 1);

  // Register v1.1.0 adding the optional field, then requeue.
  auto baseline = canonical::CanonicalBaseline::standard();
  auto fixed = rig.contracts.resolve("ct-temp", SemVer{1, 0, 0}, kT0);
  REQUIRE(fixed.ok());
  contract::DataContract v11 = fixed.value();
  v11.version = {1, 1, 0};
  schema::FieldDef humidity{"humidity", schema::FieldType::Float, false, 0.0,
                            100.0, {}};
  v11.schema.fields.push_back(humidity);
  REQUIRE(rig.contracts.register_contract(v11, baseline).ok());
  for (auto state : {contract::ContractState::Review,
                     contract::ContractState::Deployment,
                     contract::ContractState::Enforcement}) {
    REQUIRE(rig.contracts.transition_state("ct-temp", {1, 1, 0}, state, kT0).ok());
  }

  auto second = rig.ep->quarantine_requeue(items[0].id, kT0 + 1000);
  REQUIRE(second.ok());
  CHECK(second->disposition == Disposition::Accept);
  CHECK(second->report.contract_version == SemVer{1, 1, 0});

  auto missing = rig.ep->quarantine_requeue(999, kT0);
  REQUIRE_FALSE(missing.ok());
  CHECK(missing.code() == ErrorCode::UnknownQuarantineId);
}

TEST_CASE("quarantine: resolve records the note and closes the item") {
  Rig rig;
  TelemetryMessage m = rig.message();
  m.payload.erase("value");
  rig.ep->ingest(m, kT0);
  auto items = rig.ep->quarantine_list();
  REQUIRE(items.size() == 1);
  auto resolved = rig.ep->quarantine_resolve(items[0].id, "sensor rewired", kT0 + 5000);
  REQUIRE(resolved.ok());
  CHECK(resolved->status == "resolved");
  CHECK(resolved->note == "sensor rewired");
  CHECK(resolved->resolved_at == kT0 + 5000);
  CHECK(rig.ep->quarantine_list()[0].status == "resolved");
}

TEST_CASE("audit chain: tampering is pinpointed") {
  audit::AuditLog log;
  REQUIRE(log.append(kT0, "a", "ingest", "r1", "Accept", "ok").ok());
  REQUIRE(log.append(kT0 + 1, "a", "ingest", "r2", "Accept", "ok").ok());
  REQUIRE(log.append(kT0 + 2, "a", "ingest", "r3", "Deny", "bad").ok());
  CHECK(log.verify().valid);

  // Flip one byte inside record 1's body (the middle record).
  std::string serialized = log.serialize();
  auto pos = serialized.find("r2");
  REQUIRE(pos != std::string::npos);
  serialized[pos + 1] = 'X';
  audit::AuditLog tampered;
  REQUIRE(tampered.load(serialized).ok());
  auto verdict = tampered.verify();
  CHECK_FALSE(verdict.valid);
  REQUIRE(verdict.first_bad_index.has_value());
  CHECK(*verdict.first_bad_index == 1);

  audit::AuditLog empty;
  CHECK(empty.verify().valid);

  auto incomplete = log.append(kT0, "", "ingest", "r", "Accept", "");
  REQUIRE_FALSE(incomplete.ok());
  CHECK(incomplete.code() == ErrorCode::IncompleteRecord);
}

TEST_CASE("publish: product meeting its SLA registers in the catalog") {
  Rig rig;
  for (int i = 0; i < 60; ++i) {
    auto r = rig.ep->ingest(rig.message(167.0, kT0 + i * 1000), kT0 + i * 1000);
    REQUIRE(r.disposition == Disposition::Accept);
  }
  ProductDefinition def;
  def.product_id = "line-temperature";
  def.version = {1, 0, 0};
  def.source_contract_ids = {"ct-temp"};
  def.product_schema.fields = {
      {"value", schema::FieldType::Float, true, {}, {}, {}}};
  def.sla.completeness = 0.9;
  def.sla.consistency = 0.9;
  def.ownership.domain = "manufacturing";
  def.ownership.stewards = {{"ada", "R"}};
  auto r = rig.ep->publish_product(def, kT0 + 61'000);
  REQUIRE(r.ok());
  CHECK(r->registered);
  CHECK(rig.ep->catalog().size() == 1);
  rig.ep->subscribe_product("analytics", "line-temperature");
  CHECK(rig.ep->product_subscriptions().size() == 1);
}

TEST_CASE("publish: SLA failure blocks deployment and alerts the steward") {
  Rig rig;
  // Only 30 of 60 expected samples: completeness 0.5 < 0.9.
  for (int i = 0; i < 60; i += 2) {
    rig.ep->ingest(rig.message(167.0, kT0 + i * 1000), kT0 + i * 1000);
  }
  ProductDefinition def;
  def.product_id = "line-temperature";
  def.version = {1, 0, 0};
  def.source_contract_ids = {"ct-temp"};
  def.sla.completeness = 0.9;
  def.ownership.stewards = {{"ada", "R"}};
  auto r = rig.ep->publish_product(def, kT0 + 61'000);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::SlaFailure);
  bool alerted = false;
  for (const auto& n : rig.ep->notifications()) {
    if (n.subject == "publication-blocked" && n.steward == "ada") alerted = true;
  }
  CHECK(alerted);
  CHECK(rig.ep->catalog().empty());
}

TEST_CASE("publish: removing a field without a major bump is incompatible") {
  Rig rig;
  for (int i = 0; i < 60; ++i)
    rig.ep->ingest(rig.message(167.0, kT0 + i * 1000), kT0 + i * 1000);

  ProductDefinition v1;
  v1.product_id = "line-temperature";
  v1.version = {1, 0, 0};
  v1.source_contract_ids = {"ct-temp"};
  v1.product_schema.fields = {
      {"value", schema::FieldType::Float, true, {}, {}, {}},
      {"site", schema::FieldType::String, true, {}, {}, {}}};
  v1.sla.completeness = 0.5;
  v1.ownership.stewards = {{"ada", "R"}};
  REQUIRE(rig.ep->publish_product(v1, kT0 + 61'000).ok());

  ProductDefinition v2 = v1;
  v2.version = {1, 1, 0};
  v2.product_schema.fields.pop_back();  // drops "site"
  auto rejected = rig.ep->publish_product(v2, kT0 + 62'000);
  REQUIRE_FALSE(rejected.ok());
  CHECK(rejected.code() == ErrorCode::IncompatibleContract);

  v2.version = {2, 0, 0};
  CHECK(rig.ep->publish_product(v2, kT0 + 63'000).ok());
}

TEST_CASE("publish: source contracts must be enforceable") {
  Rig rig;
  ProductDefinition def;
  def.product_id = "p";
  def.version = {1, 0, 0};
  def.source_contract_ids = {"no-such-contract"};
  def.ownership.stewards = {{"ada", "R"}};
  auto r = rig.ep->publish_product(def, kT0);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::UnknownSourceContract);
}

TEST_CASE("access: allow writes an audit entry, deny logs the reason") {
  Rig rig;
  policy::AttributeRequest request;
  request.subject = {{"name", Value("dana")},
                     {"role", Value("Analyst")},
                     {"jurisdiction", Value("EU")},
                     {"mfa", Value(true)}};
  request.resource = {{"classification", Value("Confidential")},
                      {"stream", Value("ct-temp")}};
  request.env = {{"timestamp", Value(static_cast<std::int64_t>(kT0))}};
  request.asset = {{"jurisdiction", Value("EU")}};
  request.action = "read";

  nlohmann::json records = nlohmann::json::array();
  records.push_back({{"asset_id", "tt-1"}, {"value", 75.0}});

  auto allowed = rig.ep->authorize_access(request, records, kT0);
  CHECK(allowed.decision.outcome == policy::Outcome::Allow);
  CHECK(allowed.payload.size() == 1);

  policy::AttributeRequest no_mfa = request;
  no_mfa.subject["mfa"] = Value(false);
  auto denied = rig.ep->authorize_access(no_mfa, records, kT0);
  CHECK(denied.decision.outcome == policy::Outcome::Deny);

  auto log = rig.ep->audit_log().records();
  REQUIRE(log.size() == 2);
  CHECK(log[0].outcome == "Allow");
  CHECK(log[1].outcome == "Deny");
  CHECK_FALSE(log[1].reason.empty());
  CHECK(log[1].actor == "dana");
}

TEST_CASE("access: escalation pends the request and notifies a steward") {
  Rig rig;
  std::vector<policy::PolicyAst> policies;
  for (const std::string& text : sim::default_policy_texts()) {
    auto ast = policy::parse_policy(text);
    REQUIRE(ast.ok());
    policies.push_back(std::move(ast).take());
  }
  auto after_hours = policy::parse_policy(
      "policy after-hours layer domain category access version 1.0.0\n"
      "escalate when env.channel == \"remote\"\n");
  REQUIRE(after_hours.ok());
  policies.push_back(std::move(after_hours).take());
  auto effective = policy::compose_all(policies, kT0);
  REQUIRE(effective.ok());
  EnforcementPoint ep2(rig.assets, rig.contracts, canonical::MappingSet{},
                       std::move(effective).take(), rig.vault);

  policy::AttributeRequest request;
  request.subject = {{"role", Value("Analyst")},
                     {"jurisdiction", Value("EU")},
                     {"mfa", Value(true)}};
  request.resource = {{"classification", Value("Internal")}};
  request.env = {{"timestamp", Value(static_cast<std::int64_t>(kT0))},
                 {"channel", Value("remote")}};
  request.asset = {{"jurisdiction", Value("EU")}};

  nlohmann::json records = nlohmann::json::array();
  records.push_back({{"value", 75.0}});
  auto r = ep2.authorize_access(request, records, kT0);
  CHECK(r.decision.outcome == policy::Outcome::Escalate);
  CHECK(r.payload.is_null());  // withheld until a steward decides
  bool pended = false;
  for (const auto& n : ep2.notifications()) {
    if (n.subject == "access-escalation") pended = true;
  }
  CHECK(pended);
  auto log = ep2.audit_log().records();
  REQUIRE(log.size() == 1);
  CHECK(log[0].outcome == "Escalate");
}

TEST_CASE("access: mask obligation tokenizes the named field") {
  Rig rig;
  // A domain policy narrows analyst access and masks serial numbers.
  std::vector<policy::PolicyAst> policies;
  for (const std::string& text : sim::default_policy_texts()) {
    auto ast = policy::parse_policy(text);
    REQUIRE(ast.ok());
    policies.push_back(std::move(ast).take());
  }
  auto masked = policy::parse_policy(
      "policy dom layer domain category access version 1.0.0\n"
      "permit when subject.role == \"Analyst\" and subject.mfa == true "
      "with mask(resource.serial_number)\n");
  REQUIRE(masked.ok());
  policies.push_back(std::move(masked).take());
  auto effective = policy::compose_all(policies, kT0);
  REQUIRE(effective.ok());
  EnforcementPoint ep2(rig.assets, rig.contracts, canonical::MappingSet{},
                       std::move(effective).take(), rig.vault);

  policy::AttributeRequest request;
  request.subject = {{"role", Value("Analyst")},
                     {"jurisdiction", Value("EU")},
                     {"mfa", Value(true)}};
  request.resource = {{"classification", Value("Internal")}};
  request.env = {{"timestamp", Value(static_cast<std::int64_t>(kT0))}};
  request.asset = {{"jurisdiction", Value("EU")}};

  nlohmann::json records = nlohmann::json::array();
  records.push_back({{"serial_number", "SN-123"}, {"value", 75.0}});
  auto r = ep2.authorize_access(request, records, kT0);
  REQUIRE(r.decision.outcome == policy::Outcome::Allow);
  REQUIRE(r.payload.size() == 1);
  std::string token = r.payload[0]["serial_number"].get<std::string>();
  CHECK(token != "SN-123");
  CHECK(token.substr(0, 4) == "tok_");
  CHECK(r.payload[0]["value"] == 75.0);
}

TEST_CASE("export: residency, purpose, and the allowed path") {
  Rig rig;
  for (int i = 0; i < 10; ++i)
    rig.ep->ingest(rig.message(167.0, kT0 + i * 1000), kT0 + i * 1000);

  ProductDefinition def;
  def.product_id = "temps";
  def.version = {1, 0, 0};
  def.source_contract_ids = {"ct-temp"};
  def.sla.completeness = 0.0;  // no SLA gate for this test
  def.ownership.stewards = {{"ada", "R"}};
  def.pii_fields = {"asset_id"};
  def.classification = "Internal";
  REQUIRE(rig.ep->publish_product(def, kT0 + 11'000).ok());

  SUBCASE("restricted EU data may not leave the EU") {
    ProductDefinition restricted = def;
    restricted.product_id = "temps-restricted";
    restricted.classification = "Restricted";
    REQUIRE(rig.ep->publish_product(restricted, kT0 + 11'000).ok());
    auto r = rig.ep->export_external("temps-restricted", "partner-x",
                                     "benchmarking", "US", kT0 + 12'000);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrorCode::ResidencyViolation);
  }
  SUBCASE("missing purpose is refused") {
    auto r = rig.ep->export_external("temps", "partner-x", "", "EU", kT0 + 12'000);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrorCode::MissingPurpose);
  }
  SUBCASE("internal aggregate with a purpose exports, PII masked, logged") {
    auto r = rig.ep->export_external("temps", "partner-x", "benchmarking", "US",
                                     kT0 + 12'000);
    REQUIRE(r.ok());
    CHECK(r->records.size() == 10);
    for (const auto& record : r->records) {
      CHECK(record["asset_id"].get<std::string>().substr(0, 4) == "tok_");
    }
    auto log = rig.ep->audit_log().records();
    bool exported = false;
    for (const auto& rec : log) {
      if (rec.action == "export" && rec.outcome == "Allow") exported = true;
    }
    CHECK(exported);
  }
}
