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

#include "iotgov/contract.hpp"

using namespace iotgov;
using namespace iotgov::contract;

namespace {

const TimeMs kT0 = 1'767'225'600'000;  // 2026-01-01T00:00:00Z

DataContract temp_contract(SemVer version = {1, 0, 0}) {
  DataContract c;
  c.contract_id = "plant1-temp";
  c.version = version;
  schema::FieldDef tag{"tag", schema::FieldType::String, true, {}, {}, {}};
  schema::FieldDef value{"temp_celsius", schema::FieldType::Float, true, 0.0,
                         150.0, {}};
  schema::FieldDef ts{"ts", schema::FieldType::Timestamp, true, {}, {}, {}};
  c.schema.fields = {tag, value, ts};
  c.semantics["temp_celsius"] = {"degC", 0.1, "Measurement.Temperature"};
  c.temporal.expected_sample_rate_hz = 1.0;
  c.temporal.max_timestamp_drift_ms = 60'000;
  c.ownership.domain = "manufacturing";
  c.ownership.producer = "plant1";
  c.ownership.stewards = {{"ada", "R"}, {"grace", "A"}};
  c.quality_sla.completeness = 0.95;
  c.quality_sla.accuracy_max_deviation = 0.5;
  c.quality_sla.freshness_max_age_ms = 120'000;
  c.quality_sla.consistency = 0.9;
  c.compatibility = schema::CompatibilityMode::Backward;
  return c;
}

void to_enforcement(ContractRegistry& reg, const std::string& id, SemVer v,
                    TimeMs now = kT0) {
  REQUIRE(reg.transition_state(id, v, ContractState::Review, now).ok());
  REQUIRE(reg.transition_state(id, v, ContractState::Deployment, now).ok());
  REQUIRE(reg.transition_state(id, v, ContractState::Enforcement, now).ok());
}

}  // namespace

TEST_CASE("register stores a well-formed contract in Definition state") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  auto r = reg.register_contract(temp_contract(), baseline);
  REQUIRE(r.ok());
  auto stored = reg.latest("plant1-temp");
  REQUIRE(stored.ok());
  CHECK(stored->state == ContractState::Definition);
  CHECK(stored->version == SemVer{1, 0, 0});
}

TEST_CASE("register rejects non-monotonic versions") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract({1, 0, 0}), baseline).ok());
  REQUIRE(reg.register_contract(temp_contract({1, 1, 0}), baseline).ok());
  auto r = reg.register_contract(temp_contract({1, 0, 0}), baseline);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::NonMonotonicVersion);
}

TEST_CASE("register rejects unknown canonical concepts") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  DataContract c = temp_contract();
  c.semantics["temp_celsius"].canonical_concept = "Measurement.Frobnication";
  auto r = reg.register_contract(c, baseline);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::UnknownCanonicalConcept);
}

TEST_CASE("register rejects malformed contracts") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();

  DataContract ghost_semantics = temp_contract();
  ghost_semantics.semantics["no_such_field"] = {"degC", 0.1, ""};
  CHECK(reg.register_contract(ghost_semantics, baseline).code() ==
        ErrorCode::MalformedContract);

  DataContract bad_sla = temp_contract();
  bad_sla.quality_sla.completeness = 1.5;
  CHECK(reg.register_contract(bad_sla, baseline).code() ==
        ErrorCode::MalformedContract);

  DataContract bad_rate = temp_contract();
  bad_rate.temporal.expected_sample_rate_hz = 0.0;
  CHECK(reg.register_contract(bad_rate, baseline).code() ==
        ErrorCode::MalformedContract);
}

TEST_CASE("compatibility must be declared explicitly in contract documents") {
  auto doc = temp_contract().to_json();
  doc.erase("compatibility");
  auto r = DataContract::from_json(doc);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::MalformedContract);
}

TEST_CASE("lifecycle: the happy path and the evolution loop") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract(), baseline).ok());
  SemVer v{1, 0, 0};

  to_enforcement(reg, "plant1-temp", v);
  REQUIRE(reg.transition_state("plant1-temp", v, ContractState::Evolution, kT0).ok());
  REQUIRE(reg.transition_state("plant1-temp", v, ContractState::Review, kT0).ok());
}

TEST_CASE("lifecycle: Definition cannot jump to Enforcement") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract(), baseline).ok());
  auto r = reg.transition_state("plant1-temp", {1, 0, 0},
                                ContractState::Enforcement, kT0);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrorCode::IllegalTransition);
}

TEST_CASE("retirement: still enforceable during grace, disabled after") {
  ContractRegistry reg(/*retirement_grace_ms=*/30 * kMsPerDay);
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract(), baseline).ok());
  SemVer v{1, 0, 0};
  to_enforcement(reg, "plant1-temp", v);
  REQUIRE(reg.transition_state("plant1-temp", v, ContractState::Retirement, kT0).ok());

  auto in_grace = reg.resolve("plant1-temp", std::nullopt, kT0 + 10 * kMsPerDay);
  REQUIRE(in_grace.ok());
  CHECK(in_grace->state == ContractState::Retirement);
  CHECK(in_grace->end_of_life == kT0);

  auto expired = reg.resolve("plant1-temp", std::nullopt, kT0 + 31 * kMsPerDay);
  REQUIRE_FALSE(expired.ok());
  CHECK(expired.code() == ErrorCode::NoEnforcedVersion);
}

TEST_CASE("resolve picks the latest enforced version") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract({1, 0, 0}), baseline).ok());
  REQUIRE(reg.register_contract(temp_contract({1, 1, 0}), baseline).ok());
  to_enforcement(reg, "plant1-temp", {1, 0, 0});
  to_enforcement(reg, "plant1-temp", {1, 1, 0});
  REQUIRE(reg.transition_state("plant1-temp", {1, 0, 0},
                               ContractState::Retirement, kT0)
              .ok());

  // 1.0.0 retired, 1.1.0 enforced: latest resolves to 1.1.0.
  auto latest = reg.resolve("plant1-temp", std::nullopt, kT0 + 60 * kMsPerDay);
  REQUIRE(latest.ok());
  CHECK(latest->version == SemVer{1, 1, 0});

  // Explicit version returns it regardless of state.
  auto pinned = reg.resolve("plant1-temp", SemVer{1, 0, 0}, kT0 + 60 * kMsPerDay);
  REQUIRE(pinned.ok());
  CHECK(pinned->state == ContractState::Retirement);

  auto unknown = reg.resolve("ghost", std::nullopt, kT0);
  REQUIRE_FALSE(unknown.ok());
  CHECK(unknown.code() == ErrorCode::UnknownContract);
}

TEST_CASE("impact analysis lists subscribers with deprecation flags") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract({1, 0, 0}), baseline).ok());
  REQUIRE(reg.register_contract(temp_contract({1, 1, 0}), baseline).ok());
  to_enforcement(reg, "plant1-temp", {1, 0, 0});
  to_enforcement(reg, "plant1-temp", {1, 1, 0});

  auto empty = reg.impact_analysis("plant1-temp");
  REQUIRE(empty.ok());
  CHECK(empty->empty());

  REQUIRE(reg.subscribe("dashboards", "plant1-temp", {1, 0, 0}).ok());
  REQUIRE(reg.subscribe("ml-features", "plant1-temp", {1, 1, 0}).ok());
  REQUIRE(reg.transition_state("plant1-temp", {1, 0, 0},
                               ContractState::Retirement, kT0)
              .ok());

  auto impact = reg.impact_analysis("plant1-temp");
  REQUIRE(impact.ok());
  REQUIRE(impact->size() == 2);
  CHECK((*impact)[0].consumer == "dashboards");
  CHECK((*impact)[0].deprecated);
  CHECK((*impact)[1].consumer == "ml-features");
  CHECK_FALSE((*impact)[1].deprecated);

  CHECK(reg.impact_analysis("ghost").code() == ErrorCode::UnknownContract);
}

TEST_CASE("version history is append-only and strictly increasing") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  for (int minor = 0; minor < 5; ++minor) {
    REQUIRE(reg.register_contract(temp_contract({1, minor, 0}), baseline).ok());
  }
  auto versions = reg.versions("plant1-temp");
  REQUIRE(versions.size() == 5);
  for (std::size_t i = 1; i < versions.size(); ++i)
    CHECK(versions[i - 1] < versions[i]);
}

TEST_CASE("enforce_semver gates breaking changes on the major component") {
  DataContract v1 = temp_contract({1, 0, 0});
  DataContract v2_breaking = temp_contract({1, 1, 0});
  v2_breaking.schema.fields.erase(v2_breaking.schema.fields.begin() + 1);
  v2_breaking.semantics.clear();
  auto denied = ContractRegistry::enforce_semver(v1, v2_breaking);
  REQUIRE_FALSE(denied.ok());
  CHECK(denied.code() == ErrorCode::IncompatibleContract);

  v2_breaking.version = {2, 0, 0};
  CHECK(ContractRegistry::enforce_semver(v1, v2_breaking).ok());

  DataContract v11_additive = temp_contract({1, 1, 0});
  schema::FieldDef humidity{"humidity", schema::FieldType::Float, false, 0.0,
                            100.0, {}};
  v11_additive.schema.fields.push_back(humidity);
  CHECK(ContractRegistry::enforce_semver(v1, v11_additive).ok());

  DataContract v101_additive = temp_contract({1, 0, 1});
  v101_additive.schema.fields.push_back(humidity);
  CHECK_FALSE(ContractRegistry::enforce_semver(v1, v101_additive).ok());
}

TEST_CASE("registry serializes and reloads") {
  ContractRegistry reg;
  auto baseline = canonical::CanonicalBaseline::standard();
  REQUIRE(reg.register_contract(temp_contract({1, 0, 0}), baseline).ok());
  to_enforcement(reg, "plant1-temp", {1, 0, 0});
  REQUIRE(reg.subscribe("dashboards", "plant1-temp", {1, 0, 0}).ok());

  ContractRegistry reloaded;
  REQUIRE(reloaded.load(reg.to_json(), baseline).ok());
  auto resolved = reloaded.resolve("plant1-temp", std::nullopt, kT0);
  REQUIRE(resolved.ok());
  CHECK(resolved->state == ContractState::Enforcement);
  CHECK(reloaded.to_json() == reg.to_json());
}
