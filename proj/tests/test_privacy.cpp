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

#include "iotgov/privacy.hpp"

using namespace iotgov;
using namespace iotgov::privacy;

namespace {

const TimeMs kT0 = 1'767'225'600'000;

policy::EffectivePolicy steward_policy() {
  auto ast = policy::parse_policy(
      "policy vault layer enterprise category security version 1.0.0\n"
      "permit when subject.role == \"Steward\" and subject.mfa == true\n");
  REQUIRE(ast.ok());
  auto effective = policy::compose_all({ast.value()}, kT0);
  REQUIRE(effective.ok());
  return effective.value();
}

policy::AttributeRequest requester(const std::string& role, bool mfa = true) {
  policy::AttributeRequest r;
  r.subject = {{"role", Value(role)}, {"mfa", Value(mfa)}};
  r.env = {{"timestamp", Value(static_cast<std::int64_t>(kT0))}};
  return r;
}

}  // namespace

TEST_CASE("tokenize: deterministic within a scope, distinct across scopes") {
  TokenVault vault;
  vault.create_scope("serial");
  vault.create_scope("operator");
  auto t1 = vault.tokenize("SN-1001", "serial");
  auto t2 = vault.tokenize("SN-1001", "serial");
  REQUIRE(t1.ok());
  REQUIRE(t2.ok());
  CHECK(t1.value() == t2.value());
  auto other_scope = vault.tokenize("SN-1001", "operator");
  REQUIRE(other_scope.ok());
  CHECK(other_scope.value() != t1.value());
  CHECK(vault.tokenize("x", "no-such-scope").code() == ErrorCode::UnknownScope);
}

TEST_CASE("detokenize: policy-gated round trip") {
  TokenVault vault;
  vault.create_scope("serial");
  auto token = vault.tokenize("SN-1001", "serial");
  REQUIRE(token.ok());
  auto effective = steward_policy();

  auto allowed = vault.detokenize(token.value(), "serial", effective,
                                  requester("Steward"));
  REQUIRE(allowed.ok());
  CHECK(allowed.value() == "SN-1001");

  auto denied = vault.detokenize(token.value(), "serial", effective,
                                 requester("Intern"));
  REQUIRE_FALSE(denied.ok());
  CHECK(denied.code() == ErrorCode::AccessDenied);
}

TEST_CASE("vault stays bijective under many inserts") {
  TokenVault vault;
  vault.create_scope("serial");
  for (int i = 0; i < 500; ++i) {
    REQUIRE(vault.tokenize("SN-" + std::to_string(i), "serial").ok());
  }
  CHECK(vault.bijective());
}

TEST_CASE("aggregate: grouping by hierarchy level with k-suppression") {
  std::vector<AggregateRecord> records;
  // Lineage [ent, site, line, asset, comp, sensor]; ten sensors on one line.
  for (int i = 0; i < 10; ++i) {
    AggregateRecord r;
    r.sensor_id = "s" + std::to_string(i);
    r.lineage = {"ent", "site1", "line1", "asset" + std::to_string(i % 2),
                 "comp", r.sensor_id};
    r.value = static_cast<double>(i);
    records.push_back(r);
  }

  SUBCASE("line level: one group of ten") {
    auto groups = aggregate_records(records, "line");
    REQUIRE(groups.ok());
    REQUIRE(groups->size() == 1);
    CHECK((*groups)[0].group_id == "line1");
    CHECK((*groups)[0].count == 10);
    CHECK((*groups)[0].mean == doctest::Approx(4.5));
    CHECK((*groups)[0].min == 0.0);
    CHECK((*groups)[0].max == 9.0);
  }
  SUBCASE("asset level: two groups of five survive k=5") {
    auto groups = aggregate_records(records, "asset");
    REQUIRE(groups.ok());
    CHECK(groups->size() == 2);
  }
  SUBCASE("sensor level: all singleton groups suppressed at k=5") {
    auto groups = aggregate_records(records, "sensor");
    REQUIRE(groups.ok());
    CHECK(groups->empty());
  }
  SUBCASE("site level: grand aggregate") {
    auto groups = aggregate_records(records, "site");
    REQUIRE(groups.ok());
    REQUIRE(groups->size() == 1);
    CHECK((*groups)[0].count == 10);
  }
  SUBCASE("a group of three is suppressed at the default k") {
    std::vector<AggregateRecord> three(records.begin(), records.begin() + 3);
    auto groups = aggregate_records(three, "line");
    REQUIRE(groups.ok());
    CHECK(groups->empty());
  }
  SUBCASE("empty input is an error") {
    auto r = aggregate_records({}, "line");
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("dp_query: budget accounting is exact and denies on exhaustion") {
  PrivacyBudget budget;
  budget.product_id = "p1";
  budget.epsilon_total = 1.0;
  Rng rng(99);

  auto q1 = dp_query(100.0, 1.0, 0.4, budget, rng, "q1");
  REQUIRE(q1.ok());
  CHECK(budget.epsilon_spent == doctest::Approx(0.4));
  auto q2 = dp_query(100.0, 1.0, 0.4, budget, rng, "q2");
  REQUIRE(q2.ok());
  CHECK(budget.epsilon_spent == doctest::Approx(0.8));

  auto q3 = dp_query(100.0, 1.0, 0.4, budget, rng, "q3");
  REQUIRE_FALSE(q3.ok());
  CHECK(q3.code() == ErrorCode::BudgetExhausted);
  CHECK(budget.epsilon_spent == doctest::Approx(0.8));  // denied, not charged
  REQUIRE(budget.ledger.size() == 2);

  double ledger_sum = 0.0;
  for (const auto& e : budget.ledger) ledger_sum += e.epsilon;
  CHECK(ledger_sum == doctest::Approx(budget.epsilon_spent));

  auto bad_eps = dp_query(1.0, 1.0, 0.0, budget, rng);
  REQUIRE_FALSE(bad_eps.ok());
  auto bad_eps2 = dp_query(1.0, 1.0, -0.5, budget, rng);
  REQUIRE_FALSE(bad_eps2.ok());
}

TEST_CASE("dp_query noise has Laplace moments") {
  PrivacyBudget budget;
  budget.product_id = "p";
  budget.epsilon_total = 1e9;
  Rng rng(7);
  const double sensitivity = 2.0;
  const double epsilon = 0.5;
  const double scale = sensitivity / epsilon;  // 4
  const int n = 10'000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    auto r = dp_query(0.0, sensitivity, epsilon, budget, rng);
    REQUIRE(r.ok());
    sum += r->value;
    sumsq += r->value * r->value;
  }
  double mean = sum / n;
  double variance = sumsq / n - mean * mean;
  double expected_var = 2.0 * scale * scale;  // 32
  double sigma_mean = std::sqrt(expected_var / n);
  CHECK(std::fabs(mean) <= 3.0 * sigma_mean);
  CHECK(variance == doctest::Approx(expected_var).epsilon(0.10));
  CHECK(budget.epsilon_spent == doctest::Approx(n * epsilon));
}

TEST_CASE("dp_query is deterministic under a fixed seed") {
  PrivacyBudget b1{"p", 10.0, 0.0, {}};
  PrivacyBudget b2{"p", 10.0, 0.0, {}};
  Rng r1(5), r2(5);
  auto a = dp_query(42.0, 1.0, 0.5, b1, r1);
  auto b = dp_query(42.0, 1.0, 0.5, b2, r2);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a->value == b->value);
}

TEST_CASE("route_partition: payloads stay in-region, metadata replicates") {
  PartitionedStore store;
  canonical::CanonicalMeasurement m;
  m.asset_id = "tt-1";
  m.concept_name = "Measurement.Temperature";
  m.value = 75.0;
  m.event_time = kT0;
  m.lineage = {"map:x@1"};

  AttrMap eu_attrs{{"jurisdiction", Value("EU")}};
  auto region = route_partition(store, m, eu_attrs);
  REQUIRE(region.ok());
  CHECK(region.value() == "EU");
  REQUIRE(store.payload_by_region.contains("EU"));
  CHECK_FALSE(store.payload_by_region.contains("US"));

  // Catalog entry is visible globally but carries no measurement value.
  REQUIRE(store.catalog.size() == 1);
  CHECK(store.catalog[0]["asset_id"] == "tt-1");
  CHECK(store.catalog[0]["region"] == "EU");
  CHECK_FALSE(store.catalog[0].contains("value"));

  AttrMap no_jurisdiction;
  auto rejected = route_partition(store, m, no_jurisdiction);
  REQUIRE_FALSE(rejected.ok());
  CHECK(rejected.code() == ErrorCode::UnknownJurisdiction);
  CHECK(store.total_payloads() == 1);  // nothing landed anywhere
}
