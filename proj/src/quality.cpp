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

#include "iotgov/quality.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "iotgov/rng.hpp"

namespace iotgov::quality {

namespace {

double safe_fraction(std::size_t hits, std::size_t total) {
  return total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
}

bool sla_declared(const contract::QualitySla& sla) {
  return sla.completeness > 0.0 || sla.consistency > 0.0 ||
         sla.accuracy_max_deviation > 0.0 || sla.freshness_max_age_ms > 0 ||
         sla.accuracy_min || sla.freshness_min || sla.validity_min;
}

}  // namespace

nlohmann::json MessageObservation::to_json() const {
  nlohmann::json j{{"stream_id", stream_id},
                   {"event_time", event_time},
                   {"ingestion_time", ingestion_time},
                   {"range_ok", range_ok},
                   {"referential_ok", referential_ok},
                   {"ordering_ok", ordering_ok},
                   {"valid", valid}};
  if (canonical_value) j["canonical_value"] = *canonical_value;
  if (true_value) j["true_value"] = *true_value;
  return j;
}

MessageObservation MessageObservation::from_json(const nlohmann::json& j) {
  MessageObservation m;
  m.stream_id = j.value("stream_id", std::string{});
  m.event_time = j.value("event_time", TimeMs{0});
  m.ingestion_time = j.value("ingestion_time", TimeMs{0});
  if (j.contains("canonical_value"))
    m.canonical_value = j.at("canonical_value").get<double>();
  if (j.contains("true_value")) m.true_value = j.at("true_value").get<double>();
  m.range_ok = j.value("range_ok", true);
  m.referential_ok = j.value("referential_ok", true);
  m.ordering_ok = j.value("ordering_ok", true);
  m.valid = j.value("valid", true);
  return m;
}

Result<DimensionScores> compute_dimension_scores(
    const std::vector<MessageObservation>& window_messages,
    const contract::DataContract& contract, TimeMs window_start, TimeMs window_end,
    double sample_fraction, std::uint64_t sample_seed) {
  if (window_end <= window_start)
    return Error{ErrorCode::EmptyWindow, "window end must exceed start"};
  if (sample_fraction <= 0.0 || sample_fraction > 1.0)
    return Error{ErrorCode::EmptyWindow, "sample fraction must lie in (0,1]"};

  const double rate = contract.temporal.expected_sample_rate_hz;
  const double duration_s =
      static_cast<double>(window_end - window_start) / 1000.0;
  const auto expected_slots =
      static_cast<std::size_t>(std::llround(rate * duration_s));
  if (expected_slots == 0)
    return Error{ErrorCode::EmptyWindow, "no samples expected in window"};

  Rng rng(Rng::derive_seed(sample_seed, "quality-sampling"));
  const bool sampled = sample_fraction < 1.0;

  // Completeness counts distinct filled slots; duplicates land in an already
  // filled slot and must not inflate the score.
  std::set<std::size_t> filled;
  for (const MessageObservation& m : window_messages) {
    if (m.event_time < window_start || m.event_time >= window_end) continue;
    auto slot = static_cast<std::size_t>(
        static_cast<double>(m.event_time - window_start) / 1000.0 * rate);
    if (slot < expected_slots) filled.insert(slot);
  }
  std::size_t slots_considered = 0;
  std::size_t slots_filled = 0;
  for (std::size_t slot = 0; slot < expected_slots; ++slot) {
    if (sampled && !rng.bernoulli(sample_fraction)) continue;
    ++slots_considered;
    if (filled.contains(slot)) ++slots_filled;
  }
  if (slots_considered == 0) {
    // Degenerate subsample; fall back to the full slot range.
    slots_considered = expected_slots;
    slots_filled = filled.size();
  }

  DimensionScores dims;
  dims.completeness = safe_fraction(slots_filled, slots_considered);

  std::size_t n = 0, accuracy_ok = 0, fresh_ok = 0, consistent_ok = 0, valid_ok = 0;
  bool any_truth = std::any_of(window_messages.begin(), window_messages.end(),
                               [](const MessageObservation& m) {
                                 return m.true_value.has_value();
                               });
  for (const MessageObservation& m : window_messages) {
    if (sampled && !rng.bernoulli(sample_fraction)) continue;
    ++n;
    if (any_truth && m.true_value && m.canonical_value) {
      double deviation = std::fabs(*m.canonical_value - *m.true_value);
      if (deviation <= contract.quality_sla.accuracy_max_deviation) ++accuracy_ok;
    } else if (m.range_ok) {
      ++accuracy_ok;
    }
    TimeMs age = std::max<TimeMs>(0, m.ingestion_time - m.event_time);
    if (contract.quality_sla.freshness_max_age_ms <= 0 ||
        age <= contract.quality_sla.freshness_max_age_ms)
      ++fresh_ok;
    if (m.referential_ok && m.ordering_ok) ++consistent_ok;
    if (m.valid) ++valid_ok;
  }
  dims.accuracy = safe_fraction(accuracy_ok, n);
  dims.freshness = safe_fraction(fresh_ok, n);
  dims.consistency = safe_fraction(consistent_ok, n);
  dims.validity = safe_fraction(valid_ok, n);
  dims.accuracy_from_ground_truth = any_truth;
  return dims;
}

Result<double> composite_score(const DimensionScores& dims, const Weights& weights) {
  const double parts[] = {weights.completeness, weights.accuracy,
                          weights.freshness, weights.consistency, weights.validity};
  double sum = 0.0;
  for (double w : parts) {
    if (w < 0.0)
      return Error{ErrorCode::BadWeights, "negative dimension weight"};
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    return Error{ErrorCode::BadWeights,
                 "weights sum to " + std::to_string(sum) + ", expected 1"};
  return weights.completeness * dims.completeness + weights.accuracy * dims.accuracy +
         weights.freshness * dims.freshness +
         weights.consistency * dims.consistency + weights.validity * dims.validity;
}

Result<std::vector<SlaBreach>> evaluate_sla(const std::string& product_id,
                                            const QualityScore& score,
                                            const contract::DataContract& contract) {
  const auto& sla = contract.quality_sla;
  if (!sla_declared(sla))
    return Error{ErrorCode::MissingSla,
                 "contract " + contract.contract_id + " declares no quality SLA"};

  std::map<std::string, std::string> raci;
  std::string responsible;
  for (const auto& steward : contract.ownership.stewards) {
    raci[steward.name] = steward.role;
    if (steward.role == "R" && responsible.empty()) responsible = steward.name;
  }

  std::vector<SlaBreach> breaches;
  auto check = [&](const char* dimension, double observed, double threshold) {
    if (threshold <= 0.0) return;
    if (observed >= threshold) return;  // meeting the threshold exactly passes
    SlaBreach b;
    b.product_id = product_id;
    b.dimension = dimension;
    b.threshold = threshold;
    b.observed = observed;
    b.detected_at = score.window_end;
    b.routed_to = responsible;
    b.raci_recorded = raci;
    breaches.push_back(std::move(b));
  };
  check("completeness", score.dims.completeness, sla.completeness);
  check("consistency", score.dims.consistency, sla.consistency);
  if (sla.accuracy_min) check("accuracy", score.dims.accuracy, *sla.accuracy_min);
  if (sla.freshness_min) check("freshness", score.dims.freshness, *sla.freshness_min);
  if (sla.validity_min) check("validity", score.dims.validity, *sla.validity_min);
  return breaches;
}

std::optional<IssueClass> issue_class_from_name(const std::string& name) {
  if (name == "Automated" || name == "automated") return IssueClass::Automated;
  if (name == "SemiAutomated" || name == "semi-automated")
    return IssueClass::SemiAutomated;
  if (name == "Manual" || name == "manual") return IssueClass::Manual;
  return std::nullopt;
}

Result<RemediationOutcome> remediate(const RemediationRequest& request) {
  RemediationOutcome out;
  out.issue_id = request.issue_id;
  switch (request.klass) {
    case IssueClass::Automated: {
      if (!request.prev_value || !request.next_value)
        return Error{ErrorCode::UnknownIssueClass,
                     "automated interpolation needs both neighbor values"};
      out.action = "interpolated";
      out.derived_value = (*request.prev_value + *request.next_value) / 2.0;
      out.lineage_notes.push_back("remediation:interpolated");
      out.status = "applied";
      return out;
    }
    case IssueClass::SemiAutomated:
      out.action = "routed-to-steward";
      out.status = "pending-steward";
      out.lineage_notes.push_back("remediation:diagnostics-suggested");
      return out;
    case IssueClass::Manual:
      out.action = "workflow-opened";
      out.status = "open";
      return out;
  }
  return Error{ErrorCode::UnknownIssueClass, "unclassified issue"};
}

GovernanceReport governance_report(const ReportInputs& inputs) {
  GovernanceReport report;
  if (!inputs.detections.empty()) {
    double sum = 0.0;
    for (const DetectionSample& d : inputs.detections)
      sum += static_cast<double>(d.detected_at - d.occurred_at);
    report.mttd_ms = sum / static_cast<double>(inputs.detections.size());
  }
  std::size_t resolved = 0;
  double resolve_sum = 0.0;
  for (const SlaBreach& b : inputs.breaches) {
    if (!b.resolved_at) continue;
    ++resolved;
    resolve_sum += static_cast<double>(*b.resolved_at - b.detected_at);
  }
  if (resolved > 0) report.mttr_ms = resolve_sum / static_cast<double>(resolved);

  for (const audit::AuditRecord& r : inputs.audit_records) {
    if (r.outcome == "Allow" || r.outcome == "Deny" || r.outcome == "Escalate")
      ++report.decision_counts[r.outcome];
  }
  report.validation_by_severity = inputs.validation_by_severity;
  report.sla_adherence =
      inputs.windows_evaluated == 0
          ? 1.0
          : 1.0 - static_cast<double>(inputs.windows_with_breach) /
                      static_cast<double>(inputs.windows_evaluated);
  report.contract_coverage =
      inputs.streams_total == 0
          ? 1.0
          : static_cast<double>(inputs.streams_governed) /
                static_cast<double>(inputs.streams_total);
  return report;
}

nlohmann::json GovernanceReport::to_json() const {
  nlohmann::json j{{"sla_adherence", sla_adherence},
                   {"contract_coverage", contract_coverage},
                   {"decision_counts", decision_counts},
                   {"validation_by_severity", validation_by_severity}};
  if (mttd_ms) j["mttd_ms"] = *mttd_ms;
  if (mttr_ms) j["mttr_ms"] = *mttr_ms;
  return j;
}

std::string GovernanceReport::text() const {
  std::ostringstream out;
  out << "governance report\n";
  if (mttd_ms) out << "  MTTD: " << *mttd_ms / 1000.0 << " s\n";
  if (mttr_ms) out << "  MTTR: " << *mttr_ms / 1000.0 << " s\n";
  out << "  decisions:";
  for (const auto& [outcome, count] : decision_counts)
    out << " " << outcome << "=" << count;
  out << "\n  validation failures:";
  for (const auto& [severity, count] : validation_by_severity)
    out << " " << severity << "=" << count;
  out << "\n  SLA adherence: " << sla_adherence
      << "\n  contract coverage: " << contract_coverage << "\n";
  return out.str();
}

}  // namespace iotgov::quality
