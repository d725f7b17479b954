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

#include "iotgov/canonical.hpp"

using namespace iotgov;
using namespace iotgov::canonical;

namespace {

const TimeMs kT0 = 1'767'225'600'000;  // 2026-01-01T00:00:00Z

nlohmann::json fahrenheit_mapping() {
  return {{"version", "3"},
          {"mappings",
           {{{"signal", "PLC7.TT101"},
             {"concept", "Measurement.Temperature"},
             {"source_unit", "degF"},
             {"transform", {{"type", "affine"}, {"a", 1.0}, {"b", 0.0}}},
             {"value_field", "value"},
             {"timestamp_field", "ts"},
             {"clock_skew_bound_ms", 0}}}}};
}

}  // namespace

TEST_CASE("load: fahrenheit tag maps onto the temperature concept") {
  auto baseline = CanonicalBaseline::standard();
  auto set = load_mapping_set(fahrenheit_mapping(), baseline);
  REQUIRE(set.ok());
  const MappingSpec* m = set->find("PLC7.TT101");
  REQUIRE(m != nullptr);
  CHECK(m->target_unit == "degC");
}

TEST_CASE("load: unknown concept rejected") {
  auto baseline = CanonicalBaseline::standard();
  auto doc = fahrenheit_mapping();
  doc["mappings"][0]["concept"] = "Measurement.Unknown";
  auto set = load_mapping_set(doc, baseline);
  REQUIRE_FALSE(set.ok());
  CHECK(set.code() == ErrorCode::UnknownConcept);
}

TEST_CASE("load: zero-scale affine transform is not invertible") {
  auto baseline = CanonicalBaseline::standard();
  auto doc = fahrenheit_mapping();
  doc["mappings"][0]["transform"]["a"] = 0.0;
  auto set = load_mapping_set(doc, baseline);
  REQUIRE_FALSE(set.ok());
  CHECK(set.code() == ErrorCode::NonInvertibleTransform);
}

TEST_CASE("baseline extensions add but never shadow") {
  auto baseline = CanonicalBaseline::standard();
  REQUIRE(baseline.extend("Measurement.Vibration", "").ok());
  CHECK(baseline.has_concept("Measurement.Vibration"));
  auto shadow = baseline.extend("Measurement.Temperature", "degF");
  REQUIRE_FALSE(shadow.ok());
  CHECK(*baseline.canonical_unit("Measurement.Temperature") == "degC");
}

TEST_CASE("apply: 212 degF becomes 100 degC with lineage") {
  auto baseline = CanonicalBaseline::standard();
  auto set = load_mapping_set(fahrenheit_mapping(), baseline);
  REQUIRE(set.ok());
  RawSignal raw{"PLC7.TT101",
                {{"tag", "PLC7.TT101"},
                 {"value", 212.0},
                 {"ts", "2026-01-01T00:00:00Z"}},
                kT0,
                "sensor-1"};
  auto m = apply_mapping(set.value(), raw);
  REQUIRE(m.ok());
  CHECK(m->value == doctest::Approx(100.0));
  CHECK(m->unit == "degC");
  CHECK(m->event_time == kT0);
  REQUIRE(m->lineage.size() == 1);
  CHECK(m->lineage[0] == "map:PLC7.TT101@3");
}

TEST_CASE("apply twice is the identity on canonical measurements") {
  auto baseline = CanonicalBaseline::standard();
  auto set = load_mapping_set(fahrenheit_mapping(), baseline);
  REQUIRE(set.ok());
  RawSignal raw{"PLC7.TT101",
                {{"tag", "PLC7.TT101"},
                 {"value", 212.0},
                 {"ts", "2026-01-01T00:00:00Z"}},
                kT0,
                "sensor-1"};
  auto once = apply_mapping(set.value(), raw);
  REQUIRE(once.ok());
  auto twice = apply_mapping(set.value(), once.value());
  REQUIRE(twice.ok());
  CHECK(twice->value == once->value);
  CHECK(twice->lineage == once->lineage);
  CHECK(twice->event_time == once->event_time);
}

TEST_CASE("apply: unmapped signal is rejected for quarantine routing") {
  auto baseline = CanonicalBaseline::standard();
  auto set = load_mapping_set(fahrenheit_mapping(), baseline);
  REQUIRE(set.ok());
  RawSignal raw{"S7.DB9.W99", {{"val", 1.0}}, kT0, "sensor-2"};
  auto m = apply_mapping(set.value(), raw);
  REQUIRE_FALSE(m.ok());
  CHECK(m.code() == ErrorCode::UnmappedSignal);
}

TEST_CASE("apply: table transforms map discrete states") {
  auto baseline = CanonicalBaseline::standard();
  nlohmann::json doc{
      {"version", "1"},
      {"mappings",
       {{{"signal", "PLC1.STATE"},
         {"concept", "Measurement.State"},
         {"source_unit", ""},
         {"transform",
          {{"type", "table"},
           {"entries", {{"RUNNING", 1.0}, {"STOPPED", 0.0}, {"FAULT", -1.0}}}}},
         {"value_field", "value"},
         {"timestamp_field", "ts"}}}}};
  auto set = load_mapping_set(doc, baseline);
  REQUIRE(set.ok());
  RawSignal raw{"PLC1.STATE",
                {{"value", "RUNNING"}, {"ts", "2026-01-01T00:00:00Z"}},
                kT0,
                "sensor-3"};
  auto m = apply_mapping(set.value(), raw);
  REQUIRE(m.ok());
  CHECK(m->value == 1.0);

  RawSignal unknown_state{"PLC1.STATE",
                          {{"value", "EXPLODED"}, {"ts", "2026-01-01T00:00:00Z"}},
                          kT0,
                          "sensor-3"};
  CHECK_FALSE(apply_mapping(set.value(), unknown_state).ok());
}

TEST_CASE("convert_unit: exact fixed points") {
  auto f = convert_unit(0.0, "degC", "degF");
  REQUIRE(f.ok());
  CHECK(f.value() == doctest::Approx(32.0));

  // Published factor: 1 psi = 6.894757 kPa.
  auto psi = convert_unit(100.0, "kPa", "psi");
  REQUIRE(psi.ok());
  CHECK(psi.value() == doctest::Approx(100.0 / 6.894757).epsilon(1e-9));

  auto cross = convert_unit(1.0, "degC", "psi");
  REQUIRE_FALSE(cross.ok());
  CHECK(cross.code() == ErrorCode::UnsupportedConversion);

  auto unknown = convert_unit(1.0, "cubits", "m");
  REQUIRE_FALSE(unknown.ok());
}

TEST_CASE("convert_unit round-trips within 1e-9 relative error") {
  const char* units[][4] = {{"degC", "degF", "K", nullptr},
                            {"kPa", "psi", "bar", "Pa"},
                            {"s", "ms", "min", nullptr},
                            {"pct", "fraction", nullptr, nullptr},
                            {"m", "mm", nullptr, nullptr},
                            {"kg", "g", nullptr, nullptr}};
  const double samples[] = {-40.0, -1.0, 0.5, 1.0, 37.5, 212.0, 1013.25};
  for (const auto& family : units) {
    for (const char* from : family) {
      if (!from) continue;
      for (const char* to : family) {
        if (!to) continue;
        for (double x : samples) {
          auto there = convert_unit(x, from, to);
          REQUIRE(there.ok());
          auto back = convert_unit(there.value(), to, from);
          REQUIRE(back.ok());
          double scale = std::max(std::fabs(x), 1.0);
          CHECK(std::fabs(back.value() - x) / scale <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("normalize_timestamp: zone offsets shift to UTC") {
  // Local stamp with +02:00 lands two hours earlier in UTC.
  auto r = normalize_timestamp(nlohmann::json("2026-01-01T02:00:00+02:00"), 0,
                               60'000, kT0);
  REQUIRE(r.ok());
  CHECK(r->event_time == kT0);
  CHECK_FALSE(r->violation);
}

TEST_CASE("normalize_timestamp: drift beyond the bound is a violation") {
  auto r = normalize_timestamp(nlohmann::json(kT0 + 5 * kMsPerMinute), 0,
                               1 * kMsPerMinute, kT0);
  REQUIRE(r.ok());
  CHECK(r->violation);
  CHECK(r->drift_ms == 5 * kMsPerMinute);

  auto equal = normalize_timestamp(nlohmann::json(kT0), 0, kMsPerMinute, kT0);
  REQUIRE(equal.ok());
  CHECK_FALSE(equal->violation);
  CHECK(equal->drift_ms == 0);
}

TEST_CASE("normalize_timestamp: zoneless stamps use the source offset") {
  auto r = normalize_timestamp(nlohmann::json("2026-01-01T02:00:00"),
                               2 * kMsPerHour, 0, kT0);
  REQUIRE(r.ok());
  CHECK(r->event_time == kT0);

  auto bad = normalize_timestamp(nlohmann::json("one o'clock"), 0, 0, kT0);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.code() == ErrorCode::UnparseableTimestamp);
}

TEST_CASE("order tracker tolerates reordering inside the window only") {
  OrderTracker tracker(10 * kMsPerSecond);
  CHECK(tracker.observe("dev", kT0));
  CHECK(tracker.observe("dev", kT0 + 1000));
  // 5 s behind the watermark: inside the window.
  CHECK(tracker.observe("dev", kT0 - 4000));
  // 15 s behind: violation.
  CHECK_FALSE(tracker.observe("dev", kT0 - 14'000));
  // Watermarks are per device.
  CHECK(tracker.observe("dev2", kT0 - kMsPerHour));
}
