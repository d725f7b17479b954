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

#include "iotgov/boundary.hpp"

#include <algorithm>
#include <set>

namespace iotgov::boundary {

namespace {

constexpr char kGatewayActor[] = "ingest-gateway";

Severity severity_for(const std::string& kind) {
  // Fixed mapping: structural and referential defects block; value-level
  // deviations surface but do not block.
  if (kind == "missing-required" || kind == "type-mismatch" ||
      kind == "unknown-field" || kind == "referential-integrity" ||
      kind == "unmapped-signal" || kind == "no-enforced-contract" ||
      kind == "timestamp-unparseable" || kind == "policy-deny" ||
      kind == "device-admission" || kind == "internal-fault" ||
      kind == "unknown-jurisdiction") {
    return Severity::Critical;
  }
  if (kind == "deprecation" || kind == "sla-approach") return Severity::Informational;
  return Severity::Warning;  // range-exceedance, null-optional, ordering, drift<=2x
}

std::string summarize(const std::vector<Violation>& violations) {
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "; ";
    out += std::string(severity_name(v.severity)) + " " + v.kind;
    if (!v.field.empty()) out += " on " + v.field;
  }
  return out.empty() ? "ok" : out;
}

bool predicate_mentions_residency(const policy::Expr& expr) {
  if (const auto* cmp = std::get_if<policy::CmpPred>(&expr.node)) {
    if (cmp->path.root == "env" && cmp->path.key() == "residency_target") return true;
    if (const auto* rhs = std::get_if<policy::Path>(&cmp->rhs))
      return rhs->root == "env" && rhs->key() == "residency_target";
    return false;
  }
  if (const auto* in = std::get_if<policy::InPred>(&expr.node))
    return in->path.root == "env" && in->path.key() == "residency_target";
  if (const auto* neg = std::get_if<policy::NotPred>(&expr.node))
    return predicate_mentions_residency(*neg->inner);
  if (const auto* conj = std::get_if<policy::AndExpr>(&expr.node)) {
    for (const auto& t : conj->terms)
      if (predicate_mentions_residency(*t)) return true;
    return false;
  }
  if (const auto* disj = std::get_if<policy::OrExpr>(&expr.node)) {
    for (const auto& t : disj->terms)
      if (predicate_mentions_residency(*t)) return true;
  }
  return false;
}

}  // namespace

std::string_view severity_name(Severity severity) {
  switch (severity) {
    case Severity::Critical: return "Critical";
    case Severity::Warning: return "Warning";
    case Severity::Informational: return "Informational";
  }
  return "Warning";
}

std::string_view disposition_name(Disposition disposition) {
  switch (disposition) {
    case Disposition::Accept: return "Accept";
    case Disposition::AcceptWithWarnings: return "AcceptWithWarnings";
    case Disposition::Quarantine: return "Quarantine";
    case Disposition::Rejected: return "Rejected";
  }
  return "Accept";
}

nlohmann::json TelemetryMessage::to_json() const {
  return {{"device_id", device_id}, {"credential", credential},
          {"signal", signal},       {"payload", payload},
          {"event_time", event_time}, {"sequence", sequence}};
}

TelemetryMessage TelemetryMessage::from_json(const nlohmann::json& j) {
  TelemetryMessage m;
  m.device_id = j.value("device_id", std::string{});
  m.credential = j.value("credential", std::string{});
  m.signal = j.value("signal", std::string{});
  if (j.contains("payload")) m.payload = j.at("payload");
  m.event_time = j.value("event_time", TimeMs{0});
  m.sequence = j.value("sequence", std::uint64_t{0});
  return m;
}

bool ValidationReport::has_severity(Severity severity) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.severity == severity; });
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json vs = nlohmann::json::array();
  for (const Violation& v : violations) {
    vs.push_back({{"field", v.field},
                  {"kind", v.kind},
                  {"severity", std::string(severity_name(v.severity))}});
  }
  return {{"contract_id", contract_id},
          {"contract_version", contract_version.str()},
          {"violations", vs},
          {"disposition", std::string(disposition_name(disposition))}};
}

nlohmann::json ProductDefinition::to_json() const {
  nlohmann::json stewards = nlohmann::json::array();
  for (const auto& s : ownership.stewards)
    stewards.push_back({{"name", s.name}, {"role", s.role}});
  nlohmann::json sla{{"completeness", this->sla.completeness},
                     {"accuracy_max_deviation", this->sla.accuracy_max_deviation},
                     {"freshness_max_age_s", this->sla.freshness_max_age_ms / 1000},
                     {"consistency", this->sla.consistency}};
  if (this->sla.accuracy_min) sla["accuracy"] = *this->sla.accuracy_min;
  if (this->sla.freshness_min) sla["freshness"] = *this->sla.freshness_min;
  if (this->sla.validity_min) sla["validity"] = *this->sla.validity_min;
  return {{"product_id", product_id},
          {"version", version.str()},
          {"source_contracts", source_contract_ids},
          {"schema", product_schema.to_json()},
          {"sla", sla},
          {"ownership",
           {{"domain", ownership.domain},
            {"producer", ownership.producer},
            {"stewards", stewards}}},
          {"pii_fields", pii_fields},
          {"classification", classification}};
}

nlohmann::json QuarantineItem::to_json() const {
  nlohmann::json j{{"id", id},
                   {"message", message.to_json()},
                   {"report", report.to_json()},
                   {"quarantined_at", quarantined_at},
                   {"status", status},
                   {"note", note}};
  if (resolved_at) j["resolved_at"] = *resolved_at;
  return j;
}

QuarantineItem QuarantineItem::from_json(const nlohmann::json& j) {
  QuarantineItem item;
  item.id = j.value("id", std::uint64_t{0});
  if (j.contains("message"))
    item.message = TelemetryMessage::from_json(j.at("message"));
  if (j.contains("report")) {
    const auto& jr = j.at("report");
    item.report.contract_id = jr.value("contract_id", std::string{});
    if (auto v = SemVer::parse(jr.value("contract_version", "0.0.0")); v)
      item.report.contract_version = *v;
    item.report.disposition = Disposition::Quarantine;
    if (jr.contains("violations")) {
      for (const auto& jv : jr.at("violations")) {
        Violation violation;
        violation.field = jv.value("field", std::string{});
        violation.kind = jv.value("kind", std::string{});
        std::string sev = jv.value("severity", "Warning");
        violation.severity = sev == "Critical" ? Severity::Critical
                             : sev == "Informational" ? Severity::Informational
                                                      : Severity::Warning;
        item.report.violations.push_back(violation);
      }
    }
  }
  item.quarantined_at = j.value("quarantined_at", TimeMs{0});
  item.status = j.value("status", "open");
  item.note = j.value("note", std::string{});
  if (j.contains("resolved_at")) item.resolved_at = j.at("resolved_at").get<TimeMs>();
  return item;
}

Result<ProductDefinition> ProductDefinition::from_json(const nlohmann::json& j) {
  ProductDefinition d;
  if (!j.contains("product_id") || !j.contains("version"))
    return Error{ErrorCode::BadSpec, "product requires product_id and version"};
  d.product_id = j.at("product_id").get<std::string>();
  auto version = SemVer::parse(j.at("version").get<std::string>());
  if (!version) return Error{ErrorCode::BadSpec, "bad product version"};
  d.version = *version;
  if (j.contains("source_contracts"))
    d.source_contract_ids = j.at("source_contracts").get<std::vector<std::string>>();
  if (j.contains("schema")) {
    auto schema = schema::StructSchema::from_json(j.at("schema"));
    if (!schema.ok()) return schema.error();
    d.product_schema = std::move(schema).take();
  }
  if (j.contains("sla")) {
    const auto& js = j.at("sla");
    d.sla.completeness = js.value("completeness", 0.0);
    d.sla.accuracy_max_deviation = js.value("accuracy_max_deviation", 0.0);
    d.sla.freshness_max_age_ms =
        static_cast<TimeMs>(js.value("freshness_max_age_s", 0.0) * 1000.0);
    d.sla.consistency = js.value("consistency", 0.0);
    if (js.contains("accuracy")) d.sla.accuracy_min = js.at("accuracy").get<double>();
    if (js.contains("freshness")) d.sla.freshness_min = js.at("freshness").get<double>();
    if (js.contains("validity")) d.sla.validity_min = js.at("validity").get<double>();
  }
  if (j.contains("ownership")) {
    const auto& jo = j.at("ownership");
    d.ownership.domain = jo.value("domain", std::string{});
    d.ownership.producer = jo.value("producer", std::string{});
    if (jo.contains("stewards")) {
      for (const auto& js : jo.at("stewards"))
        d.ownership.stewards.push_back(
            {js.value("name", std::string{}), js.value("role", std::string{})});
    }
  }
  if (j.contains("pii_fields"))
    d.pii_fields = j.at("pii_fields").get<std::vector<std::string>>();
  d.classification = j.value("classification", "Internal");
  return d;
}

GuardVerdict evaluate_guards(const policy::EffectivePolicy& effective,
                             const policy::AttributeRequest& request) {
  GuardVerdict verdict;
  for (const policy::PolicyAst& p : effective.policies) {
    for (const policy::Rule& rule : p.rules) {
      if (rule.effect != policy::Effect::Forbid) continue;
      policy::Tri value = policy::eval_predicate(*rule.predicate, request, nullptr);
      if (value == policy::Tri::True) {
        verdict.denied = true;
        verdict.reasons.push_back(rule.id);
      } else if (value == policy::Tri::Unknown) {
        verdict.denied = true;  // fail closed on undecidable forbids
        verdict.reasons.push_back(rule.id + ":undecidable");
      }
    }
  }
  return verdict;
}

EnforcementPoint::EnforcementPoint(asset::AssetRegistry& assets,
                                   contract::ContractRegistry& contracts,
                                   canonical::MappingSet mappings,
                                   policy::EffectivePolicy effective,
                                   privacy::TokenVault& vault)
    : assets_(assets),
      contracts_(contracts),
      mappings_(std::move(mappings)),
      effective_(std::move(effective)),
      vault_(vault) {}

void EnforcementPoint::bind_stream(const std::string& signal,
                                   const std::string& contract_id) {
  stream_bindings_[signal] = contract_id;
}

void EnforcementPoint::notify_steward(const contract::DataContract* contract,
                                      TimeMs at, const std::string& subject,
                                      const std::string& detail) {
  std::string steward = "unassigned";
  if (contract) {
    if (auto responsible = contract->ownership.responsible()) steward = *responsible;
  }
  notifications_.push_back({at, steward, subject, detail});
}

EnforcementPoint::ValidationOutcome EnforcementPoint::validate(
    const TelemetryMessage& message, const contract::DataContract& contract,
    TimeMs now) {
  ValidationOutcome out;

  // Steps 3-4: structure, types, required fields, ranges.
  for (const schema::MessageViolation& v :
       schema::validate_message(contract.schema, message.payload)) {
    out.violations.push_back({v.field, v.kind, severity_for(v.kind)});
    if (v.kind == "range-exceedance") out.range_ok = false;
  }

  // Step 5: referential integrity against the asset registry.
  auto device = assets_.find_device(message.device_id);
  std::string asset_id = device ? device->asset_ref : "";
  if (!device || !assets_.find_node(asset_id)) {
    out.violations.push_back(
        {"device_id", "referential-integrity", Severity::Critical});
    out.referential_ok = false;
  }
  if (auto it = message.payload.find("asset_id");
      it != message.payload.end() && it->is_string()) {
    if (!assets_.find_node(it->get<std::string>())) {
      out.violations.push_back({"asset_id", "referential-integrity", Severity::Critical});
      out.referential_ok = false;
    }
  }

  const canonical::MappingSpec* mapping = mappings_.find(message.signal);
  if (!mapping) {
    out.violations.push_back({message.signal, "unmapped-signal", Severity::Critical});
    out.referential_ok = false;
  }

  // Temporal checks: drift against the contract bound, ordering per device.
  TimeMs event_time = message.event_time;
  if (mapping) {
    auto ts_it = message.payload.find(mapping->timestamp_field);
    if (ts_it == message.payload.end()) {
      out.violations.push_back(
          {mapping->timestamp_field, "timestamp-unparseable", Severity::Critical});
    } else {
      auto normalized = canonical::normalize_timestamp(
          *ts_it, 0, contract.temporal.max_timestamp_drift_ms, now);
      if (!normalized.ok()) {
        out.violations.push_back(
            {mapping->timestamp_field, "timestamp-unparseable", Severity::Critical});
      } else {
        event_time = normalized->event_time;
        if (normalized->violation) {
          // Within twice the declared bound reads as clock skew; beyond it the
          // stamp is unusable.
          Severity sev =
              normalized->drift_ms <= 2 * contract.temporal.max_timestamp_drift_ms
                  ? Severity::Warning
                  : Severity::Critical;
          out.violations.push_back({mapping->timestamp_field, "timestamp-drift", sev});
        }
      }
    }
  }
  if (contract.temporal.ordering == contract::OrderingGuarantee::PerDevice) {
    if (!order_tracker_.observe(message.device_id, event_time)) {
      out.violations.push_back({"event_time", "out-of-order", Severity::Warning});
      out.ordering_ok = false;
    }
  }

  // Step 6: policy guards over the asset's effective attributes. The gateway
  // is the acting subject, and ingestion stores data in its home region, so
  // residency guards evaluate against the asset's own jurisdiction.
  policy::AttributeRequest request;
  request.action = "ingest";
  request.subject["role"] = Value("gateway");
  request.subject["affiliation"] = Value("internal");
  request.env["timestamp"] = Value(static_cast<std::int64_t>(now));
  request.env["purpose"] = Value("ingest");
  request.resource["stream"] = Value(stream_bindings_.count(message.signal)
                                         ? stream_bindings_.at(message.signal)
                                         : message.signal);
  if (!asset_id.empty()) {
    if (auto attrs = assets_.resolve_effective_attributes(asset_id); attrs.ok()) {
      request.asset = attrs->attrs;
      if (auto cls = attrs->attrs.find("classification"); cls != attrs->attrs.end())
        request.resource["classification"] = cls->second;
      if (auto jur = attrs->attrs.find("jurisdiction"); jur != attrs->attrs.end())
        request.env["residency_target"] = jur->second;
    }
  }
  GuardVerdict guard = evaluate_guards(effective_, request);
  if (guard.denied) {
    std::string detail;
    for (const auto& r : guard.reasons) detail += (detail.empty() ? "" : ",") + r;
    out.violations.push_back({detail, "policy-deny", Severity::Critical});
  }

  // Boundary 2: canonical transformation, once nothing blocking remains.
  bool critical = std::any_of(out.violations.begin(), out.violations.end(),
                              [](const Violation& v) {
                                return v.severity == Severity::Critical;
                              });
  if (!critical && mapping) {
    canonical::RawSignal raw{message.signal, message.payload, now, asset_id};
    auto measurement = canonical::apply_mapping(mappings_, raw);
    if (measurement.ok()) {
      out.measurement = std::move(measurement).take();
    } else {
      out.violations.push_back(
          {message.signal, "internal-fault", Severity::Critical});
    }
  }
  return out;
}

void EnforcementPoint::record_observation(const TelemetryMessage& message,
                                          const ValidationOutcome& outcome,
                                          const std::string& stream_id,
                                          Disposition disposition, TimeMs now) {
  quality::MessageObservation obs;
  obs.stream_id = stream_id;
  obs.ingestion_time = now;
  obs.event_time =
      outcome.measurement ? outcome.measurement->event_time : message.event_time;
  if (outcome.measurement) obs.canonical_value = outcome.measurement->value;
  obs.true_value = truth_hint_;
  obs.range_ok = outcome.range_ok;
  obs.referential_ok = outcome.referential_ok;
  obs.ordering_ok = outcome.ordering_ok;
  obs.valid = outcome.violations.empty();
  (void)disposition;
  observations_.push_back(std::move(obs));
}

IngestResult EnforcementPoint::ingest(const TelemetryMessage& message, TimeMs now) {
  ++counters_.produced;
  IngestResult result;

  // Step 1 before anything else: only Active devices with matching
  // credentials get their bytes looked at.
  auto admitted = assets_.check_device_admission(message.device_id, message.credential);
  if (!admitted.ok() || !admitted.value()) {
    result.disposition = Disposition::Rejected;
    result.report.disposition = Disposition::Rejected;
    std::string why = admitted.ok()
                          ? "device not in Active state"
                          : admitted.error().str();
    result.report.violations.push_back(
        {"device_id", "device-admission", Severity::Critical});
    result.nack_summary = "device-admission: " + why;
    ++counters_.rejected;
    audit_.append(now, kGatewayActor, "ingest", message.signal, "Rejected", why);
    for (const Violation& v : result.report.violations)
      ++severity_counts_[std::string(severity_name(v.severity))];
    return result;
  }

  // Step 2: current contract version for this stream.
  auto binding = stream_bindings_.find(message.signal);
  const contract::DataContract* contract = nullptr;
  contract::DataContract resolved;
  if (binding != stream_bindings_.end()) {
    auto r = contracts_.resolve(binding->second, std::nullopt, now);
    if (r.ok()) {
      resolved = std::move(r).take();
      contract = &resolved;
    }
  }
  if (!contract) {
    ValidationReport report;
    report.disposition = Disposition::Quarantine;
    report.violations.push_back(
        {message.signal, "no-enforced-contract", Severity::Critical});
    return finalize(message, std::move(report), std::nullopt, nullptr, now);
  }

  ValidationOutcome outcome = validate(message, *contract, now);
  ValidationReport report;
  report.contract_id = contract->contract_id;
  report.contract_version = contract->version;
  report.violations = outcome.violations;
  bool critical = report.has_severity(Severity::Critical);
  bool warning = report.has_severity(Severity::Warning);
  report.disposition = critical ? Disposition::Quarantine
                       : warning ? Disposition::AcceptWithWarnings
                                 : Disposition::Accept;

  record_observation(message, outcome, contract->contract_id, report.disposition, now);
  return finalize(message, std::move(report), outcome.measurement, &outcome, now);
}

IngestResult EnforcementPoint::finalize(
    const TelemetryMessage& message, ValidationReport report,
    std::optional<canonical::CanonicalMeasurement> measurement,
    const ValidationOutcome* outcome, TimeMs now) {
  (void)outcome;
  IngestResult result;

  const contract::DataContract* contract_for_notify = nullptr;
  contract::DataContract resolved_contract;
  if (!report.contract_id.empty()) {
    auto r = contracts_.resolve(report.contract_id, report.contract_version, now);
    if (r.ok()) {
      resolved_contract = std::move(r).take();
      contract_for_notify = &resolved_contract;
    }
  }

  if (report.disposition != Disposition::Quarantine) {
    // Success path: enrich, store canonically in the right partition, ack.
    bool stored = false;
    if (measurement) {
      AttrMap asset_attrs;
      if (auto attrs = assets_.resolve_effective_attributes(measurement->asset_id);
          attrs.ok()) {
        asset_attrs = attrs->attrs;
      }
      auto region = privacy::route_partition(store_, *measurement, asset_attrs);
      if (region.ok()) {
        store_.catalog.back()["stream"] = report.contract_id;
        stored = true;
        result.stored = *measurement;
      } else {
        // Fail closed: an unroutable payload must not land anywhere.
        report.violations.push_back(
            {"jurisdiction", "unknown-jurisdiction", Severity::Critical});
        report.disposition = Disposition::Quarantine;
      }
    } else {
      report.violations.push_back({"", "internal-fault", Severity::Critical});
      report.disposition = Disposition::Quarantine;
    }
    (void)stored;
  }

  for (const Violation& v : report.violations)
    ++severity_counts_[std::string(severity_name(v.severity))];

  if (report.disposition == Disposition::Quarantine) {
    QuarantineItem item;
    item.id = next_quarantine_id_++;
    item.message = message;
    item.report = report;
    item.quarantined_at = now;
    item.status = "open";
    quarantine_.push_back(item);
    ++counters_.quarantined;
    result.disposition = Disposition::Quarantine;
    result.nack_summary = summarize(report.violations);
    audit_.append(now, kGatewayActor, "ingest", message.signal, "Quarantine",
                  result.nack_summary);
    notify_steward(contract_for_notify, now, "quarantine",
                   message.signal + ": " + result.nack_summary);
  } else if (report.disposition == Disposition::AcceptWithWarnings) {
    ++counters_.warned;
    result.acked = true;
    result.disposition = Disposition::AcceptWithWarnings;
    audit_.append(now, kGatewayActor, "ingest", message.signal,
                  "AcceptWithWarnings", summarize(report.violations));
  } else {
    ++counters_.accepted;
    result.acked = true;
    result.disposition = Disposition::Accept;
    audit_.append(now, kGatewayActor, "ingest", message.signal, "Accept", "ok");
  }
  result.report = std::move(report);
  return result;
}

Result<PublicationResult> EnforcementPoint::publish_product(
    const ProductDefinition& definition, TimeMs now) {
  if (!definition.ownership.responsible())
    return Error{ErrorCode::UsageError,
                 "publication requires a Responsible domain steward"};
  for (const std::string& source : definition.source_contract_ids) {
    auto c = contracts_.resolve(source, std::nullopt, now);
    if (!c.ok())
      return Error{ErrorCode::UnknownSourceContract,
                   "source contract " + source + " is not enforceable: " +
                       c.error().message};
  }

  // Step 2: compatibility gate against the previously published version.
  const ProductDefinition* prev = nullptr;
  for (const ProductDefinition& p : catalog_) {
    if (p.product_id != definition.product_id) continue;
    if (!prev || prev->version < p.version) prev = &p;
  }
  if (prev) {
    if (definition.version <= prev->version)
      return Error{ErrorCode::IncompatibleContract,
                   "product version must exceed " + prev->version.str()};
    VersionBump required =
        schema::classify_schema_change(prev->product_schema, definition.product_schema);
    if (!bump_satisfied(prev->version, definition.version, required))
      return Error{ErrorCode::IncompatibleContract,
                   "schema change requires a " + std::string(bump_name(required)) +
                       " bump over " + prev->version.str()};
    auto compat = schema::check_compatibility(prev->product_schema,
                                              definition.product_schema,
                                              schema::CompatibilityMode::Backward);
    if (!compat.compatible && definition.version.major <= prev->version.major) {
      return Error{ErrorCode::IncompatibleContract,
                   "backward-incompatible change without a major bump"};
    }
  }

  // Steps 3-4: build the canonical->product sample and score it.
  std::vector<quality::MessageObservation> sample;
  for (const quality::MessageObservation& obs : observations_) {
    for (const std::string& source : definition.source_contract_ids) {
      if (obs.stream_id == source) sample.push_back(obs);
    }
  }
  TimeMs window_start = now, window_end = now;
  for (const auto& obs : sample) {
    window_start = std::min(window_start, obs.event_time);
    window_end = std::max(window_end, obs.event_time + 1);
  }

  contract::DataContract probe;  // carries the SLA/temporal bounds for scoring
  probe.contract_id = definition.product_id;
  probe.quality_sla = definition.sla;
  probe.ownership = definition.ownership;
  if (!definition.source_contract_ids.empty()) {
    auto c = contracts_.resolve(definition.source_contract_ids.front(), std::nullopt, now);
    if (c.ok()) probe.temporal = c->temporal;
  }

  PublicationResult result;
  if (!sample.empty()) {
    auto dims = quality::compute_dimension_scores(sample, probe, window_start,
                                                  window_end, 1.0, 0);
    if (dims.ok()) {
      quality::QualityScore score;
      score.stream_id = definition.product_id;
      score.window_start = window_start;
      score.window_end = window_end;
      score.dims = dims.value();
      auto composite = quality::composite_score(dims.value(), quality::Weights{});
      score.composite = composite.ok() ? composite.value() : 0.0;
      result.sampled_score = score;
      auto breaches = quality::evaluate_sla(definition.product_id, score, probe);
      if (breaches.ok()) result.breaches = breaches.value();
    }
  } else {
    // No canonical data to sample: completeness is unmet by construction.
    quality::SlaBreach breach;
    breach.product_id = definition.product_id;
    breach.dimension = "completeness";
    breach.threshold = definition.sla.completeness;
    breach.observed = 0.0;
    breach.detected_at = now;
    if (auto r = definition.ownership.responsible()) breach.routed_to = *r;
    if (definition.sla.completeness > 0.0) result.breaches.push_back(breach);
  }

  if (!result.breaches.empty()) {
    // Step 6: block and alert.
    std::string detail;
    for (const auto& b : result.breaches) {
      detail += (detail.empty() ? "" : "; ") + b.dimension + " " +
                std::to_string(b.observed) + " < " + std::to_string(b.threshold);
    }
    notifications_.push_back({now, result.breaches.front().routed_to,
                              "publication-blocked",
                              definition.product_id + ": " + detail});
    audit_.append(now, "publication-service", "publish", definition.product_id,
                  "Deny", detail);
    return Error{ErrorCode::SlaFailure,
                 definition.product_id + " blocked: " + detail};
  }

  catalog_.push_back(definition);
  result.registered = true;
  audit_.append(now, "publication-service", "publish", definition.product_id,
                "Allow", "registered " + definition.version.str());
  return result;
}

AccessResult EnforcementPoint::authorize_access(
    const policy::AttributeRequest& request, const nlohmann::json& records,
    TimeMs now) {
  AccessResult result;
  result.decision = policy::evaluate_request(effective_, request);

  std::string actor = "anonymous";
  if (auto it = request.subject.find("name"); it != request.subject.end())
    actor = it->second.str();
  else if (auto role = request.subject.find("role"); role != request.subject.end())
    actor = role->second.str();
  std::string resource = "records";
  if (auto it = request.resource.find("stream"); it != request.resource.end())
    resource = it->second.str();

  std::string reasons;
  for (const auto& r : result.decision.reasons)
    reasons += (reasons.empty() ? "" : ",") + r;

  if (result.decision.outcome == policy::Outcome::Allow) {
    nlohmann::json payload = records;
    for (const policy::Obligation& ob : result.decision.obligations) {
      if (const auto* mask = std::get_if<policy::MaskObligation>(&ob)) {
        std::string field = mask->path.segments.back();
        vault_.create_scope(field);
        for (auto& record : payload) {
          if (!record.contains(field)) continue;
          std::string raw = record[field].is_string()
                                ? record[field].get<std::string>()
                                : record[field].dump();
          auto token = vault_.tokenize(raw, field);
          if (token.ok()) record[field] = token.value();
        }
      } else if (const auto* agg = std::get_if<policy::AggregateObligation>(&ob)) {
        std::vector<privacy::AggregateRecord> rows;
        for (const auto& record : payload) {
          privacy::AggregateRecord row;
          row.sensor_id = record.value("asset_id", std::string{});
          row.value = record.value("value", 0.0);
          if (record.contains("lineage") && record["lineage"].is_array())
            row.lineage = record["lineage"].get<std::vector<std::string>>();
          rows.push_back(std::move(row));
        }
        auto groups = privacy::aggregate_records(rows, agg->level);
        nlohmann::json aggregated = nlohmann::json::array();
        if (groups.ok()) {
          for (const auto& g : groups.value()) {
            aggregated.push_back({{"group", g.group_id},
                                  {"count", g.count},
                                  {"mean", g.mean},
                                  {"min", g.min},
                                  {"max", g.max}});
          }
        }
        payload = aggregated;
      }
    }
    result.payload = payload;
    audit_.append(now, actor, "access", resource, "Allow", reasons);
  } else if (result.decision.outcome == policy::Outcome::Escalate) {
    notifications_.push_back({now, "steward", "access-escalation",
                              actor + " on " + resource + " (" + reasons + ")"});
    audit_.append(now, actor, "access", resource, "Escalate", reasons);
  } else {
    audit_.append(now, actor, "access", resource, "Deny", reasons);
  }
  return result;
}

Result<ExportResult> EnforcementPoint::export_external(
    const std::string& product_id, const std::string& party,
    const std::string& purpose, const std::string& destination_region, TimeMs now) {
  if (purpose.empty()) {
    audit_.append(now, party, "export", product_id, "Deny", "missing purpose");
    return Error{ErrorCode::MissingPurpose,
                 "export requires an explicit purpose declaration"};
  }
  const ProductDefinition* product = nullptr;
  for (const ProductDefinition& p : catalog_) {
    if (p.product_id == product_id && (!product || product->version < p.version))
      product = &p;
  }
  if (!product) {
    audit_.append(now, party, "export", product_id, "Deny", "unknown product");
    return Error{ErrorCode::UnknownSourceContract,
                 "product " + product_id + " is not in the catalog"};
  }

  // Collect the jurisdictions whose data feeds this product; each must clear
  // the compliance guards for this destination.
  std::set<std::string> source_regions;
  for (const auto& entry : store_.catalog) {
    std::string stream = entry.value("stream", std::string{});
    for (const std::string& source : product->source_contract_ids) {
      if (stream == source) source_regions.insert(entry.value("region", std::string{}));
    }
  }
  if (source_regions.empty()) source_regions.insert(destination_region);

  for (const std::string& region : source_regions) {
    policy::AttributeRequest request;
    request.action = "export";
    request.subject["affiliation"] = Value(party);
    request.subject["role"] = Value("external");
    request.env["timestamp"] = Value(static_cast<std::int64_t>(now));
    request.env["purpose"] = Value(purpose);
    request.env["residency_target"] = Value(destination_region);
    request.resource["product"] = Value(product_id);
    request.resource["classification"] = Value(product->classification);
    request.asset["jurisdiction"] = Value(region);

    GuardVerdict verdict = evaluate_guards(effective_, request);
    if (!verdict.denied) continue;

    std::string reasons;
    bool residency = false;
    for (const std::string& reason : verdict.reasons) {
      reasons += (reasons.empty() ? "" : ",") + reason;
      std::string rule_id = reason.substr(0, reason.find(':'));
      for (const policy::PolicyAst& p : effective_.policies) {
        for (const policy::Rule& rule : p.rules) {
          if (rule.id == rule_id && predicate_mentions_residency(*rule.predicate))
            residency = true;
        }
      }
    }
    audit_.append(now, party, "export", product_id, "Deny",
                  reasons + " (region " + region + " -> " + destination_region + ")");
    if (residency)
      return Error{ErrorCode::ResidencyViolation,
                   "export of " + region + " data to " + destination_region +
                       " denied: " + reasons};
    return Error{ErrorCode::AccessDenied, "export denied: " + reasons};
  }

  // Obligations: tokenize declared PII fields before anything leaves.
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [region, measurements] : store_.payload_by_region) {
    (void)region;
    for (const canonical::CanonicalMeasurement& m : measurements) {
      nlohmann::json record = m.to_json();
      bool relevant = false;
      for (const auto& entry : store_.catalog) {
        if (entry.value("asset_id", std::string{}) == m.asset_id) {
          std::string stream = entry.value("stream", std::string{});
          for (const std::string& source : product->source_contract_ids)
            if (stream == source) relevant = true;
          break;
        }
      }
      if (!relevant) continue;
      for (const std::string& field : product->pii_fields) {
        if (!record.contains(field)) continue;
        vault_.create_scope(field);
        std::string raw = record[field].is_string()
                              ? record[field].get<std::string>()
                              : record[field].dump();
        auto token = vault_.tokenize(raw, field);
        if (token.ok()) record[field] = token.value();
      }
      records.push_back(record);
    }
  }

  audit_.append(now, party, "export", product_id, "Allow",
                "purpose=" + purpose + " destination=" + destination_region);
  ExportResult result;
  result.destination_region = destination_region;
  result.records = records;
  return result;
}

std::vector<QuarantineItem> EnforcementPoint::quarantine_list() const {
  return quarantine_;
}

Result<IngestResult> EnforcementPoint::quarantine_requeue(std::uint64_t id,
                                                          TimeMs now) {
  for (QuarantineItem& item : quarantine_) {
    if (item.id != id) continue;
    item.status = "requeued";
    return ingest(item.message, now);
  }
  return Error{ErrorCode::UnknownQuarantineId,
               "no quarantine item " + std::to_string(id)};
}

Result<QuarantineItem> EnforcementPoint::quarantine_resolve(std::uint64_t id,
                                                            const std::string& note,
                                                            TimeMs now) {
  for (QuarantineItem& item : quarantine_) {
    if (item.id != id) continue;
    item.status = "resolved";
    item.note = note;
    item.resolved_at = now;
    audit_.append(now, "steward", "quarantine-resolve", item.message.signal,
                  "Resolved", note);
    return item;
  }
  return Error{ErrorCode::UnknownQuarantineId,
               "no quarantine item " + std::to_string(id)};
}

std::map<std::string, std::size_t> EnforcementPoint::validation_severity_counts()
    const {
  return severity_counts_;
}

void EnforcementPoint::subscribe_product(const std::string& consumer,
                                         const std::string& product_id) {
  product_subscriptions_.emplace_back(consumer, product_id);
}

void EnforcementPoint::restore_quarantine(std::vector<QuarantineItem> items) {
  quarantine_ = std::move(items);
  next_quarantine_id_ = 1;
  for (const QuarantineItem& item : quarantine_)
    next_quarantine_id_ = std::max(next_quarantine_id_, item.id + 1);
}

}  // namespace iotgov::boundary
