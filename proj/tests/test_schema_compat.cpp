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

#include "iotgov/schema.hpp"
#include <set>

#include "schema_oracle.hpp"

using namespace iotgov;
using namespace iotgov::schema;

namespace {

FieldDef field(const std::string& name, FieldType type, bool required = true,
               std::optional<double> lo = {}, std::optional<double> hi = {}) {
  FieldDef f;
  f.name = name;
  f.type = type;
  f.required = required;
  f.range_min = lo;
  f.range_max = hi;
  return f;
}

StructSchema temp_schema() {
  StructSchema s;
  s.fields = {field("tag", FieldType::String),
              field("temp_celsius", FieldType::Float, true, 0.0, 150.0),
              field("ts", FieldType::Timestamp)};
  return s;
}

}  // namespace

TEST_CASE("message validation enforces strict field sets") {
  StructSchema s = temp_schema();
  nlohmann::json ok{{"tag", "TT1"}, {"temp_celsius", 21.5},
                    {"ts", "2026-01-01T00:00:00Z"}};
  CHECK(message_valid(s, ok));

  nlohmann::json missing{{"tag", "TT1"}, {"ts", "2026-01-01T00:00:00Z"}};
  auto v1 = validate_message(s, missing);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].kind == "missing-required");
  CHECK(v1[0].field == "temp_celsius");

  nlohmann::json unknown = ok;
  unknown["extra"] = 1;
  auto v2 = validate_message(s, unknown);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].kind == "unknown-field");

  nlohmann::json out_of_range = ok;
  out_of_range["temp_celsius"] = 200.0;
  auto v3 = validate_message(s, out_of_range);
  REQUIRE(v3.size() == 1);
  CHECK(v3[0].kind == "range-exceedance");

  nlohmann::json wrong_type = ok;
  wrong_type["temp_celsius"] = "hot";
  auto v4 = validate_message(s, wrong_type);
  REQUIRE(v4.size() == 1);
  CHECK(v4[0].kind == "type-mismatch");

  nlohmann::json bad_ts = ok;
  bad_ts["ts"] = "yesterday-ish";
  auto v5 = validate_message(s, bad_ts);
  REQUIRE(v5.size() == 1);
  CHECK(v5[0].kind == "type-mismatch");
}

TEST_CASE("nested record validation") {
  StructSchema inner;
  inner.fields = {field("lat", FieldType::Float, true, -90.0, 90.0),
                  field("lon", FieldType::Float, true, -180.0, 180.0)};
  StructSchema outer;
  FieldDef geo = field("geo", FieldType::Record);
  geo.nested = std::make_shared<StructSchema>(inner);
  outer.fields = {field("id", FieldType::String), geo};
  REQUIRE(outer.validate().ok());

  nlohmann::json ok{{"id", "a"}, {"geo", {{"lat", 1.0}, {"lon", 2.0}}}};
  CHECK(message_valid(outer, ok));

  nlohmann::json bad{{"id", "a"}, {"geo", {{"lat", 1.0}}}};
  auto v = validate_message(outer, bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "geo.lon");
  CHECK(v[0].kind == "missing-required");
}

TEST_CASE("schema shape validation") {
  StructSchema dup;
  dup.fields = {field("a", FieldType::String), field("a", FieldType::Integer)};
  CHECK_FALSE(dup.validate().ok());

  StructSchema bad_range;
  bad_range.fields = {field("s", FieldType::String, true, 0.0, 1.0)};
  CHECK_FALSE(bad_range.validate().ok());

  StructSchema record_missing_nested;
  record_missing_nested.fields = {field("r", FieldType::Record)};
  CHECK_FALSE(record_missing_nested.validate().ok());
}

TEST_CASE("classify: add optional field is minor") {
  StructSchema old_schema = temp_schema();
  StructSchema new_schema = old_schema;
  new_schema.fields.push_back(field("humidity", FieldType::Float, false, 0.0, 100.0));
  CHECK(classify_schema_change(old_schema, new_schema) == VersionBump::Minor);
}

TEST_CASE("classify: removing a field is major") {
  StructSchema old_schema = temp_schema();
  StructSchema new_schema;
  new_schema.fields = {old_schema.fields[0], old_schema.fields[2]};
  CHECK(classify_schema_change(old_schema, new_schema) == VersionBump::Major);
}

TEST_CASE("classify: identical schemas are patch, reorder included") {
  StructSchema s = temp_schema();
  CHECK(classify_schema_change(s, s) == VersionBump::Patch);
  StructSchema reordered;
  reordered.fields = {s.fields[2], s.fields[0], s.fields[1]};
  CHECK(classify_schema_change(s, reordered) == VersionBump::Patch);
}

TEST_CASE("classify: type change is major") {
  StructSchema old_schema = temp_schema();
  StructSchema new_schema = old_schema;
  new_schema.fields[1] = field("temp_celsius", FieldType::String);
  CHECK(classify_schema_change(old_schema, new_schema) == VersionBump::Major);
}

TEST_CASE("classify: requiredness changes") {
  StructSchema old_schema = temp_schema();
  StructSchema relaxed = old_schema;
  relaxed.fields[1].required = false;
  CHECK(classify_schema_change(old_schema, relaxed) == VersionBump::Minor);
  // optional -> required breaks old producers
  CHECK(classify_schema_change(relaxed, old_schema) == VersionBump::Major);
}

TEST_CASE("classify identity is patch over a generated corpus") {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    StructSchema s = schema_oracle::random_schema(rng);
    CHECK(classify_schema_change(s, s) == VersionBump::Patch);
  }
}

TEST_CASE("compatibility: additive optional field") {
  StructSchema old_schema;
  old_schema.fields = {field("temp", FieldType::Float, true, 0.0, 2.0)};
  StructSchema new_schema = old_schema;
  new_schema.fields.push_back(field("humidity", FieldType::Float, false, 0.0, 2.0));

  auto backward = check_compatibility(old_schema, new_schema, CompatibilityMode::Backward);
  CHECK(backward.compatible);

  // With strict field sets, a new message carrying humidity is invalid under
  // the old schema, so the same pair is not forward compatible.
  auto forward = check_compatibility(old_schema, new_schema, CompatibilityMode::Forward);
  CHECK_FALSE(forward.compatible);
  REQUIRE_FALSE(forward.violations.empty());
  CHECK(forward.violations[0].field == "humidity");

  auto none = check_compatibility(old_schema, new_schema, CompatibilityMode::None);
  CHECK(none.compatible);

  CHECK_FALSE(
      check_compatibility(old_schema, new_schema, CompatibilityMode::Full).compatible);
}

TEST_CASE("compatibility: violations name the offending fields") {
  StructSchema old_schema;
  old_schema.fields = {field("a", FieldType::Integer, true, 0.0, 2.0),
                       field("b", FieldType::String, false)};
  StructSchema new_schema;
  new_schema.fields = {field("a", FieldType::Integer, true, 0.0, 1.0),
                       field("c", FieldType::String, true)};
  auto report = check_compatibility(old_schema, new_schema, CompatibilityMode::Backward);
  REQUIRE_FALSE(report.compatible);
  std::set<std::string> kinds;
  for (const auto& v : report.violations) kinds.insert(v.kind);
  CHECK(kinds.contains("range-narrowed"));
  CHECK(kinds.contains("removed-field"));
  CHECK(kinds.contains("new-required-field"));
}

TEST_CASE("minor classification implies backward compatibility") {
  Rng rng(4242);
  int minors = 0;
  for (int i = 0; i < 600; ++i) {
    StructSchema old_schema = schema_oracle::random_schema(rng);
    StructSchema new_schema = schema_oracle::mutate_schema(old_schema, rng);
    if (classify_schema_change(old_schema, new_schema) != VersionBump::Minor)
      continue;
    ++minors;
    CHECK(check_compatibility(old_schema, new_schema, CompatibilityMode::Backward)
              .compatible);
  }
  CHECK(minors > 10);  // the corpus actually exercised the property
}

TEST_CASE("checker agrees with the brute-force oracle on a sampled corpus") {
  Rng rng(2026);
  int disagreements = 0;
  for (int i = 0; i < 150; ++i) {
    StructSchema old_schema = schema_oracle::random_schema(rng);
    StructSchema new_schema = schema_oracle::mutate_schema(old_schema, rng);
    for (CompatibilityMode mode :
         {CompatibilityMode::Backward, CompatibilityMode::Forward,
          CompatibilityMode::Full, CompatibilityMode::None}) {
      bool checker = check_compatibility(old_schema, new_schema, mode).compatible;
      bool oracle = schema_oracle::compatible_bruteforce(old_schema, new_schema, mode);
      if (checker != oracle) {
        ++disagreements;
        CAPTURE(old_schema.to_json().dump());
        CAPTURE(new_schema.to_json().dump());
        CAPTURE(static_cast<int>(mode));
        CHECK(checker == oracle);
      }
    }
  }
  CHECK(disagreements == 0);
}
