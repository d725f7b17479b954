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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/asset_registry.hpp"
#include "iotgov/audit.hpp"
#include "iotgov/canonical.hpp"
#include "iotgov/contract.hpp"
#include "iotgov/policy_engine.hpp"
#include "iotgov/privacy.hpp"
#include "iotgov/quality.hpp"

namespace iotgov::boundary {

struct TelemetryMessage {
  std::string device_id;
  std::string credential;  // presented at the gateway, checked by digest
  std::string signal;
  nlohmann::json payload;
  TimeMs event_time = 0;  // producer transport stamp; payload carries the
                          // dialect-specific event time used for validation
  std::uint64_t sequence = 0;

  nlohmann::json to_json() const;
  static TelemetryMessage from_json(const nlohmann::json& j);
};

enum class Severity { Critical, Warning, Informational };

std::string_view severity_name(Severity severity);

struct Violation {
  std::string field;
  std::string kind;
  Severity severity = Severity::Warning;
};

enum class Disposition { Accept, AcceptWithWarnings, Quarantine, Rejected };

std::string_view disposition_name(Disposition disposition);

struct ValidationReport {
  std::string contract_id;
  SemVer contract_version;
  std::vector<Violation> violations;
  Disposition disposition = Disposition::Accept;

  bool has_severity(Severity severity) const;
  nlohmann::json to_json() const;
};

struct IngestResult {
  Disposition disposition = Disposition::Accept;
  ValidationReport report;
  bool acked = false;
  std::string nack_summary;  // violation summary; never echoes the payload
  std::optional<canonical::CanonicalMeasurement> stored;
};

struct Notification {
  TimeMs at = 0;
  std::string steward;
  std::string subject;
  std::string detail;
};

struct QuarantineItem {
  std::uint64_t id = 0;
  TelemetryMessage message;
  ValidationReport report;
  TimeMs quarantined_at = 0;
  std::string status;  // open | requeued | resolved
  std::string note;
  std::optional<TimeMs> resolved_at;

  nlohmann::json to_json() const;
  static QuarantineItem from_json(const nlohmann::json& j);
};

// --- Data products -----------------------------------------------------------

struct ProductDefinition {
  std::string product_id;
  SemVer version;
  std::vector<std::string> source_contract_ids;
  schema::StructSchema product_schema;
  contract::QualitySla sla;
  contract::Ownership ownership;
  std::vector<std::string> pii_fields;  // tokenized on export
  std::string classification = "Internal";

  nlohmann::json to_json() const;
  static Result<ProductDefinition> from_json(const nlohmann::json& j);
};

struct PublicationResult {
  bool registered = false;
  std::vector<quality::SlaBreach> breaches;
  quality::QualityScore sampled_score;
};

struct AccessResult {
  policy::Decision decision;
  nlohmann::json payload;  // present on Allow, after obligations
};

struct ExportResult {
  std::string destination_region;
  nlohmann::json records;  // PII-masked
};

// Counters for the conservation check: produced = accepted + warned +
// quarantined + rejected.
struct BoundaryCounters {
  std::uint64_t produced = 0;
  std::uint64_t accepted = 0;
  std::uint64_t warned = 0;
  std::uint64_t quarantined = 0;
  std::uint64_t rejected = 0;
};

// One enforcement point wiring the registries, composed policy, mapping set,
// canonical/partition stores, quarantine, notifications, and the audit log.
class EnforcementPoint {
 public:
  EnforcementPoint(asset::AssetRegistry& assets, contract::ContractRegistry& contracts,
                   canonical::MappingSet mappings, policy::EffectivePolicy effective,
                   privacy::TokenVault& vault);

  // signal -> contract_id; which contract governs each stream.
  void bind_stream(const std::string& signal, const std::string& contract_id);

  // The ingestion boundary: admission, contract fetch, schema validation,
  // range validation, referential integrity, policy guards, canonical
  // transformation, partition routing. Exactly one ValidationReport and at
  // least one audit record per message; internal faults quarantine.
  IngestResult ingest(const TelemetryMessage& message, TimeMs now);

  Result<PublicationResult> publish_product(const ProductDefinition& definition,
                                            TimeMs now);

  AccessResult authorize_access(const policy::AttributeRequest& request,
                                const nlohmann::json& records, TimeMs now);

  Result<ExportResult> export_external(const std::string& product_id,
                                       const std::string& party,
                                       const std::string& purpose,
                                       const std::string& destination_region,
                                       TimeMs now);

  std::vector<QuarantineItem> quarantine_list() const;
  Result<IngestResult> quarantine_requeue(std::uint64_t id, TimeMs now);
  Result<QuarantineItem> quarantine_resolve(std::uint64_t id, const std::string& note,
                                            TimeMs now);

  const BoundaryCounters& counters() const { return counters_; }
  audit::AuditLog& audit_log() { return audit_; }
  const privacy::PartitionedStore& canonical_store() const { return store_; }
  const std::vector<Notification>& notifications() const { return notifications_; }
  const std::vector<quality::MessageObservation>& observations() const {
    return observations_;
  }
  std::map<std::string, std::size_t> validation_severity_counts() const;
  const std::vector<ProductDefinition>& catalog() const { return catalog_; }
  const policy::EffectivePolicy& effective_policy() const { return effective_; }

  void subscribe_product(const std::string& consumer, const std::string& product_id);
  const std::vector<std::pair<std::string, std::string>>& product_subscriptions()
      const {
    return product_subscriptions_;
  }

  // Ground truth injected by the simulator for accuracy scoring.
  void set_truth_hint(double true_canonical_value) { truth_hint_ = true_canonical_value; }
  void clear_truth_hint() { truth_hint_.reset(); }

  // State restoration for workspace-backed CLI sessions.
  void restore_quarantine(std::vector<QuarantineItem> items);
  void restore_notifications(std::vector<Notification> notifications) {
    notifications_ = std::move(notifications);
  }
  void restore_store(privacy::PartitionedStore store) { store_ = std::move(store); }
  void restore_catalog(std::vector<ProductDefinition> products) {
    catalog_ = std::move(products);
  }
  void restore_observations(std::vector<quality::MessageObservation> observations) {
    observations_ = std::move(observations);
  }

 private:
  struct ValidationOutcome {
    std::vector<Violation> violations;
    std::optional<canonical::CanonicalMeasurement> measurement;
    bool range_ok = true;
    bool referential_ok = true;
    bool ordering_ok = true;
  };

  ValidationOutcome validate(const TelemetryMessage& message,
                             const contract::DataContract& contract, TimeMs now);
  IngestResult finalize(const TelemetryMessage& message, ValidationReport report,
                        std::optional<canonical::CanonicalMeasurement> measurement,
                        const ValidationOutcome* outcome, TimeMs now);
  void notify_steward(const contract::DataContract* contract, TimeMs at,
                      const std::string& subject, const std::string& detail);
  void record_observation(const TelemetryMessage& message,
                          const ValidationOutcome& outcome,
                          const std::string& stream_id, Disposition disposition,
                          TimeMs now);

  asset::AssetRegistry& assets_;
  contract::ContractRegistry& contracts_;
  canonical::MappingSet mappings_;
  policy::EffectivePolicy effective_;
  privacy::TokenVault& vault_;

  std::map<std::string, std::string> stream_bindings_;
  canonical::OrderTracker order_tracker_;
  privacy::PartitionedStore store_;
  audit::AuditLog audit_;
  std::vector<QuarantineItem> quarantine_;
  std::vector<Notification> notifications_;
  std::vector<quality::MessageObservation> observations_;
  std::map<std::string, std::size_t> severity_counts_;
  std::vector<ProductDefinition> catalog_;
  std::vector<std::pair<std::string, std::string>> product_subscriptions_;
  BoundaryCounters counters_;
  std::optional<double> truth_hint_;
  std::uint64_t next_quarantine_id_ = 1;
};

// Restriction-only policy pass used at machine boundaries (ingest/export):
// denies on a matched or undecidable Forbid, abstains otherwise. Producer
// flows carry no interactive subject, so requiring ABAC permits here would
// deny every message by default.
struct GuardVerdict {
  bool denied = false;
  std::vector<std::string> reasons;
};
GuardVerdict evaluate_guards(const policy::EffectivePolicy& effective,
                             const policy::AttributeRequest& request);

}  // namespace iotgov::boundary
