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

#include <cmath>

#include "iotgov/quality.hpp"
#include "iotgov/rng.hpp"

using namespace iotgov;
using namespace iotgov::quality;

namespace {

const TimeMs kT0 = 1'767'225'600'000;

contract::DataContract contract_1hz() {
  contract::DataContract c;
  c.contract_id = "ct";
  c.version = {1, 0, 0};
  c.temporal.expected_sample_rate_hz = 1.0;
  c.quality_sla.completeness = 0.95;
  c.quality_sla.accuracy_max_deviation = 0.5;
  c.quality_sla.freshness_max_age_ms = 60'000;
  c.quality_sla.consistency = 0.9;
  c.ownership.stewards = {{"ada", "R"}, {"grace", "A"}, {"lin", "C"}, {"mia", "I"}};
  return c;
}

MessageObservation obs(TimeMs event, TimeMs ingest, double value = 1.0,
                       double truth = 1.0) {
  MessageObservation m;
  m.stream_id = "ct";
  m.event_time = event;
  m.ingestion_time = ingest;
  m.canonical_value = value;
  m.true_value = truth;
  return m;
}

}  // namespace

TEST_CASE("completeness: 90 of 100 expected slots") {
  std::vector<MessageObservation> window;
  for (int i = 0; i < 90; ++i) window.push_back(obs(kT0 + i * 1000, kT0 + i * 1000));
  auto dims = compute_dimension_scores(window, contract_1hz(), kT0, kT0 + 100'000);
  REQUIRE(dims.ok());
  CHECK(dims->completeness == doctest::Approx(0.90));
}

TEST_CASE("completeness: duplicates fill a slot only once") {
  std::vector<MessageObservation> window;
  for (int i = 0; i < 95; ++i) window.push_back(obs(kT0 + i * 1000, kT0 + i * 1000));
  for (int i = 0; i < 5; ++i) window.push_back(obs(kT0 + i * 1000, kT0 + i * 1000));
  REQUIRE(window.size() == 100);
  auto dims = compute_dimension_scores(window, contract_1hz(), kT0, kT0 + 100'000);
  REQUIRE(dims.ok());
  CHECK(dims->completeness == doctest::Approx(0.95));
}

TEST_CASE("accuracy: ground truth when available, ranges otherwise") {
  std::vector<MessageObservation> window;
  for (int i = 0; i < 10; ++i) {
    MessageObservation m = obs(kT0 + i * 1000, kT0 + i * 1000, 1.0, 1.0);
    if (i == 0) m.canonical_value = 3.0;  // deviation 2.0 > 0.5
    window.push_back(m);
  }
  auto dims = compute_dimension_scores(window, contract_1hz(), kT0, kT0 + 10'000);
  REQUIRE(dims.ok());
  CHECK(dims->accuracy == doctest::Approx(0.9));
  CHECK(dims->accuracy_from_ground_truth);

  // Without truth, accuracy falls back to the declared-range outcome.
  for (auto& m : window) {
    m.true_value.reset();
    m.range_ok = true;
  }
  window[0].range_ok = false;
  window[1].range_ok = false;
  auto ranged = compute_dimension_scores(window, contract_1hz(), kT0, kT0 + 10'000);
  REQUIRE(ranged.ok());
  CHECK(ranged->accuracy == doctest::Approx(0.8));
  CHECK_FALSE(ranged->accuracy_from_ground_truth);
}

TEST_CASE("freshness: fraction within the max age") {
  std::vector<MessageObservation> window;
  for (int i = 0; i < 10; ++i) {
    TimeMs event = kT0 + i * 1000;
    TimeMs ingest = event + (i == 0 ? 90'000 : 1000);  // one stale message
    window.push_back(obs(event, ingest));
  }
  auto dims = compute_dimension_scores(window, contract_1hz(), kT0, kT0 + 10'000);
  REQUIRE(dims.ok());
  CHECK(dims->freshness == doctest::Approx(0.9));
  CHECK(dims->accuracy == doctest::Approx(1.0));
}

TEST_CASE("consistency and validity fractions") {
  std::vector<MessageObservation> window;
  for (int i = 0; i < 10; ++i) {
    MessageObservation m = obs(kT0 + i * 1000, kT0 + i * 1000);
    if (i < 2) m.referential_ok = false;
    if (i == 3) m.ordering_ok = false;
    if (i < 4) m.valid = false;
    window.push_back(m);
  }
  auto dims = compute_dimension_scores(window, contract_1hz(), kT0, kT0 + 10'000);
  REQUIRE(dims.ok());
  CHECK(dims->consistency == doctest::Approx(0.7));
  CHECK(dims->validity == doctest::Approx(0.6));
}

TEST_CASE("empty and degenerate windows are errors") {
  auto bad = compute_dimension_scores({}, contract_1hz(), kT0, kT0);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.code() == ErrorCode::EmptyWindow);
  auto bad_fraction =
      compute_dimension_scores({}, contract_1hz(), kT0, kT0 + 1000, 0.0);
  REQUIRE_FALSE(bad_fraction.ok());
}

TEST_CASE("composite: weighted sum with validated weights") {
  DimensionScores dims;
  dims.completeness = dims.accuracy = dims.freshness = dims.consistency = 1.0;
  dims.validity = 1.0;
  Weights equal{0.2, 0.2, 0.2, 0.2, 0.2};
  auto all_ones = composite_score(dims, equal);
  REQUIRE(all_ones.ok());
  CHECK(all_ones.value() == doctest::Approx(1.0));

  dims.validity = 0.0;
  auto partial = composite_score(dims, equal);
  REQUIRE(partial.ok());
  CHECK(partial.value() == doctest::Approx(0.8));

  Weights off{0.2, 0.2, 0.2, 0.2, 0.1};  // sums to 0.9
  auto bad = composite_score(dims, off);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.code() == ErrorCode::BadWeights);

  // Defaults: completeness .3, accuracy .2, freshness .2, consistency .15,
  // validity .15.
  DimensionScores mixed{1.0, 1.0, 1.0, 1.0, 0.0, false};
  auto defaulted = composite_score(mixed, Weights{});
  REQUIRE(defaulted.ok());
  CHECK(defaulted.value() == doctest::Approx(0.85));
}

TEST_CASE("sla: breach routes to the Responsible steward with RACI recorded") {
  QualityScore score;
  score.stream_id = "ct";
  score.window_start = kT0;
  score.window_end = kT0 + 60'000;
  score.dims = {0.90, 1.0, 1.0, 1.0, 1.0, true};
  auto breaches = evaluate_sla("product-1", score, contract_1hz());
  REQUIRE(breaches.ok());
  REQUIRE(breaches->size() == 1);
  const SlaBreach& b = (*breaches)[0];
  CHECK(b.dimension == "completeness");
  CHECK(b.threshold == doctest::Approx(0.95));
  CHECK(b.observed == doctest::Approx(0.90));
  CHECK(b.routed_to == "ada");
  CHECK(b.detected_at == kT0 + 60'000);
  REQUIRE(b.raci_recorded.size() == 4);
  CHECK(b.raci_recorded.at("grace") == "A");
}

TEST_CASE("sla: meeting the threshold exactly is not a breach") {
  QualityScore score;
  score.dims = {0.95, 1.0, 1.0, 0.9, 1.0, true};
  auto breaches = evaluate_sla("p", score, contract_1hz());
  REQUIRE(breaches.ok());
  CHECK(breaches->empty());
}

TEST_CASE("sla: a contract without any SLA is an error") {
  contract::DataContract bare;
  bare.contract_id = "no-sla";
  QualityScore score;
  auto r = evaluate_sla("p", score, bare);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::MissingSla);
}

TEST_CASE("remediation: the three workflow classes") {
  SUBCASE("missing sample interpolates with lineage") {
    RemediationRequest req;
    req.issue_id = "gap-1";
    req.klass = IssueClass::Automated;
    req.prev_value = 10.0;
    req.next_value = 12.0;
    auto r = remediate(req);
    REQUIRE(r.ok());
    CHECK(r->action == "interpolated");
    CHECK(*r->derived_value == doctest::Approx(11.0));
    REQUIRE(r->lineage_notes.size() == 1);
    CHECK(r->lineage_notes[0] == "remediation:interpolated");
    CHECK(r->status == "applied");
  }
  SUBCASE("sustained degradation routes to a steward") {
    RemediationRequest req;
    req.issue_id = "slow-leak";
    req.klass = IssueClass::SemiAutomated;
    auto r = remediate(req);
    REQUIRE(r.ok());
    CHECK(r->action == "routed-to-steward");
    CHECK(r->status == "pending-steward");
  }
  SUBCASE("cross-domain breaks open a manual workflow item") {
    RemediationRequest req;
    req.issue_id = "xdomain-7";
    req.klass = IssueClass::Manual;
    auto r = remediate(req);
    REQUIRE(r.ok());
    CHECK(r->action == "workflow-opened");
    CHECK(r->status == "open");
    CHECK(r->root_cause.empty());  // filled by stewards later
  }
  SUBCASE("automated without neighbor values cannot run") {
    RemediationRequest req;
    req.klass = IssueClass::Automated;
    CHECK_FALSE(remediate(req).ok());
  }
}

TEST_CASE("governance report aggregates MTTD, MTTR, and distributions") {
  ReportInputs inputs;
  inputs.detections = {{kT0, kT0 + 30'000}};
  SlaBreach resolved;
  resolved.detected_at = kT0 + 30'000;
  resolved.resolved_at = kT0 + 90'000;
  inputs.breaches = {resolved};
  audit::AuditLog log;
  for (int i = 0; i < 8; ++i) log.append(kT0, "u", "access", "r", "Allow", "");
  for (int i = 0; i < 2; ++i) log.append(kT0, "u", "access", "r", "Deny", "x");
  inputs.audit_records = log.records();
  inputs.validation_by_severity = {{"Critical", 3}, {"Warning", 7}};
  inputs.windows_evaluated = 10;
  inputs.windows_with_breach = 2;
  inputs.streams_total = 4;
  inputs.streams_governed = 4;

  GovernanceReport report = governance_report(inputs);
  REQUIRE(report.mttd_ms.has_value());
  CHECK(*report.mttd_ms == doctest::Approx(30'000.0));
  REQUIRE(report.mttr_ms.has_value());
  CHECK(*report.mttr_ms == doctest::Approx(60'000.0));
  CHECK(report.decision_counts.at("Allow") == 8);
  CHECK(report.decision_counts.at("Deny") == 2);
  CHECK(report.sla_adherence == doctest::Approx(0.8));
  CHECK(report.contract_coverage == doctest::Approx(1.0));
}

TEST_CASE("governance report: no breaches means full adherence") {
  ReportInputs inputs;
  inputs.windows_evaluated = 5;
  GovernanceReport report = governance_report(inputs);
  CHECK(report.sla_adherence == doctest::Approx(1.0));
  CHECK_FALSE(report.mttd_ms.has_value());
  CHECK_FALSE(report.mttr_ms.has_value());
}

TEST_CASE("scores stay in [0,1] under random observation mixes") {
  Rng rng(77);
  contract::DataContract c = contract_1hz();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MessageObservation> window;
    int n = 1 + static_cast<int>(rng.uniform_index(120));
    for (int i = 0; i < n; ++i) {
      MessageObservation m = obs(kT0 + static_cast<TimeMs>(rng.uniform_index(100)) * 1000,
                                 kT0 + static_cast<TimeMs>(rng.uniform_index(100)) * 1000,
                                 rng.uniform01() * 10, rng.uniform01() * 10);
      m.range_ok = rng.bernoulli(0.8);
      m.referential_ok = rng.bernoulli(0.9);
      m.ordering_ok = rng.bernoulli(0.9);
      m.valid = rng.bernoulli(0.7);
      window.push_back(m);
    }
    auto dims = compute_dimension_scores(window, c, kT0, kT0 + 100'000);
    REQUIRE(dims.ok());
    for (double d : {dims->completeness, dims->accuracy, dims->freshness,
                     dims->consistency, dims->validity}) {
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
    }
    auto composite = composite_score(dims.value(), Weights{});
    REQUIRE(composite.ok());
    CHECK(composite.value() >= 0.0);
    CHECK(composite.value() <= 1.0);
  }
}

TEST_CASE("sampling: fraction 1 is exact, fraction 0.2 tracks within 0.03") {
  contract::DataContract c = contract_1hz();
  Rng drop_rng(4242);
  std::vector<MessageObservation> window;
  const int slots = 2500;
  for (int i = 0; i < slots; ++i) {
    if (drop_rng.bernoulli(0.1)) continue;  // 10% dropout
    window.push_back(obs(kT0 + i * 1000LL, kT0 + i * 1000LL));
  }
  auto exact = compute_dimension_scores(window, c, kT0, kT0 + slots * 1000LL, 1.0, 9);
  REQUIRE(exact.ok());

  int within = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    auto sampled = compute_dimension_scores(window, c, kT0, kT0 + slots * 1000LL,
                                            0.2, 1000 + t);
    REQUIRE(sampled.ok());
    if (std::fabs(sampled->completeness - exact->completeness) <= 0.03) ++within;
  }
  CHECK(within >= 95);
}
