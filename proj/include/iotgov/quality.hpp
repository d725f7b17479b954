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

#include "iotgov/audit.hpp"
#include "iotgov/contract.hpp"
#include "iotgov/errors.hpp"
#include "iotgov/simtime.hpp"

namespace iotgov::quality {

// One message as seen by the monitor, independent of whether it was stored.
struct MessageObservation {
  std::string stream_id;
  TimeMs event_time = 0;
  TimeMs ingestion_time = 0;
  std::optional<double> canonical_value;
  std::optional<double> true_value;  // simulator ground truth, when available
  bool range_ok = true;              // declared-range check from validation
  bool referential_ok = true;
  bool ordering_ok = true;
  bool valid = true;  // no contract violations of any severity

  nlohmann::json to_json() const;
  static MessageObservation from_json(const nlohmann::json& j);
};

struct DimensionScores {
  double completeness = 0.0;
  double accuracy = 0.0;
  double freshness = 0.0;
  double consistency = 0.0;
  double validity = 0.0;
  // Accuracy against simulator ground truth when available, against declared
  // ranges otherwise; reports must say which was used.
  bool accuracy_from_ground_truth = false;
};

struct QualityScore {
  std::string stream_id;
  TimeMs window_start = 0;
  TimeMs window_end = 0;
  DimensionScores dims;
  double composite = 0.0;
  double sample_fraction = 1.0;
};

struct Weights {
  double completeness = 0.30;
  double accuracy = 0.20;
  double freshness = 0.20;
  double consistency = 0.15;
  double validity = 0.15;
};

struct SlaBreach {
  std::string product_id;
  std::string dimension;
  double threshold = 0.0;
  double observed = 0.0;
  TimeMs detected_at = 0;
  std::string routed_to;                        // Responsible steward
  std::map<std::string, std::string> raci_recorded;  // name -> role letters
  std::optional<TimeMs> resolved_at;
};

// Per-dimension scores over one window.
//   completeness: distinct expected sample slots filled / expected slots
//   accuracy: fraction within the ground-truth deviation bound, or in range
//   freshness: fraction no older than the SLA max age at ingestion
//   consistency: fraction passing referential and ordering checks
//   validity: fraction with a clean validation report
// `sample_fraction` < 1 scores a seeded subsample of slots and messages.
Result<DimensionScores> compute_dimension_scores(
    const std::vector<MessageObservation>& window_messages,
    const contract::DataContract& contract, TimeMs window_start, TimeMs window_end,
    double sample_fraction = 1.0, std::uint64_t sample_seed = 0);

Result<double> composite_score(const DimensionScores& dims, const Weights& weights);

// Compares scores to the contract SLA (score >= threshold passes; a breach is
// strictly below) and routes each breach to the contract's Responsible steward.
Result<std::vector<SlaBreach>> evaluate_sla(const std::string& product_id,
                                            const QualityScore& score,
                                            const contract::DataContract& contract);

// --- Remediation -----------------------------------------------------------------

enum class IssueClass { Automated, SemiAutomated, Manual };

std::optional<IssueClass> issue_class_from_name(const std::string& name);

struct RemediationRequest {
  std::string issue_id;
  IssueClass klass = IssueClass::Manual;
  std::string description;
  // Inputs for automated gap interpolation.
  std::optional<double> prev_value;
  std::optional<double> next_value;
};

struct RemediationOutcome {
  std::string issue_id;
  std::string action;  // interpolated | routed-to-steward | workflow-opened
  std::optional<double> derived_value;
  std::vector<std::string> lineage_notes;
  std::string status;      // applied | pending-steward | open
  std::string root_cause;  // workflow field, filled by stewards later
};

Result<RemediationOutcome> remediate(const RemediationRequest& request);

// --- Reporting -------------------------------------------------------------------

struct DetectionSample {
  TimeMs occurred_at = 0;
  TimeMs detected_at = 0;
};

struct ReportInputs {
  std::vector<DetectionSample> detections;
  std::vector<SlaBreach> breaches;
  std::vector<audit::AuditRecord> audit_records;
  std::map<std::string, std::size_t> validation_by_severity;
  std::size_t windows_evaluated = 0;
  std::size_t windows_with_breach = 0;
  std::size_t streams_total = 0;
  std::size_t streams_governed = 0;
};

struct GovernanceReport {
  std::optional<double> mttd_ms;
  std::optional<double> mttr_ms;
  std::map<std::string, std::size_t> decision_counts;  // Allow/Deny/Escalate
  std::map<std::string, std::size_t> validation_by_severity;
  double sla_adherence = 1.0;
  double contract_coverage = 1.0;

  nlohmann::json to_json() const;
  std::string text() const;
};

GovernanceReport governance_report(const ReportInputs& inputs);

}  // namespace iotgov::quality
