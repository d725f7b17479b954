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
#include <variant>
#include <vector>

#include "json.hpp"

#include "iotgov/errors.hpp"
#include "iotgov/simtime.hpp"

namespace iotgov::canonical {

// Shared baseline ontology. Domains extend it with new concepts; extensions
// can never shadow an existing name.
class CanonicalBaseline {
 public:
  static CanonicalBaseline standard();

  Status extend(const std::string& concept_name, const std::string& canonical_unit);
  bool has_concept(const std::string& concept_name) const;
  std::optional<std::string> canonical_unit(const std::string& concept_name) const;
  std::vector<std::string> concepts() const;

 private:
  // concept name -> canonical unit ("" for structural concepts like Asset)
  std::map<std::string, std::string> concepts_;
};

// --- Units ------------------------------------------------------------------

// Fixed engineering-unit table. Conversions are affine into a per-dimension
// canonical unit; cross-dimension requests are rejected.
Result<double> convert_unit(double value, const std::string& from,
                            const std::string& to);
bool unit_known(const std::string& unit);
std::optional<std::string> unit_dimension(const std::string& unit);

// --- Mappings -----------------------------------------------------------------

struct AffineTransform {
  double scale = 1.0;
  double offset = 0.0;
};

struct TableTransform {
  std::map<std::string, double> entries;
};

struct MappingSpec {
  std::string signal;   // vendor tag name, e.g. "PLC7.TT101"
  std::string concept_name;  // target canonical concept
  std::string source_unit;
  std::string target_unit;  // resolved from the baseline at load time
  std::variant<AffineTransform, TableTransform> transform;
  std::string value_field;      // payload field carrying the raw value
  std::string timestamp_field;  // payload field carrying the event time
  TimeMs clock_skew_bound_ms = 0;
};

struct MappingSet {
  std::string version;
  std::map<std::string, MappingSpec> by_signal;

  const MappingSpec* find(const std::string& signal) const {
    auto it = by_signal.find(signal);
    return it == by_signal.end() ? nullptr : &it->second;
  }

  nlohmann::json to_json() const;
};

Result<MappingSet> load_mapping_set(const nlohmann::json& document,
                                    const CanonicalBaseline& baseline);

// --- Canonical measurements ---------------------------------------------------

struct CanonicalMeasurement {
  std::string asset_id;  // producing sensor
  std::string concept_name;
  double value = 0.0;  // expressed in the canonical unit of the concept
  std::string unit;
  TimeMs event_time = 0;
  TimeMs ingestion_time = 0;
  // Applied transform ids with versions, e.g. "map:PLC7.TT101@3". Never empty
  // for a stored measurement; remediation appends to it.
  std::vector<std::string> lineage;

  nlohmann::json to_json() const;
  static CanonicalMeasurement from_json(const nlohmann::json& j);
};

struct RawSignal {
  std::string signal;
  nlohmann::json payload;
  TimeMs ingestion_time = 0;
  std::string asset_id;
};

std::string mapping_lineage_tag(const MappingSet& set, const std::string& signal);

Result<CanonicalMeasurement> apply_mapping(const MappingSet& set,
                                           const RawSignal& raw);

// Idempotent re-application: a measurement whose lineage already records this
// mapping set's tag passes through unchanged.
Result<CanonicalMeasurement> apply_mapping(const MappingSet& set,
                                           const CanonicalMeasurement& measurement);

// --- Timestamps ----------------------------------------------------------------

struct NormalizedTimestamp {
  TimeMs event_time = 0;  // UTC
  TimeMs drift_ms = 0;    // |event - ingestion|
  bool violation = false;
};

// Accepts ISO-8601 strings (zone-aware) or integer epoch milliseconds. A
// zoneless string is local time at `source_offset_ms` east of UTC.
Result<NormalizedTimestamp> normalize_timestamp(const nlohmann::json& raw,
                                                TimeMs source_offset_ms,
                                                TimeMs max_drift_ms,
                                                TimeMs ingestion_time);

// Per-device bounded reorder tolerance: an event older than the device's
// watermark minus the window is an ordering violation.
class OrderTracker {
 public:
  explicit OrderTracker(TimeMs window_ms = 10 * kMsPerSecond)
      : window_ms_(window_ms) {}

  bool observe(const std::string& device_id, TimeMs event_time);

 private:
  TimeMs window_ms_;
  std::map<std::string, TimeMs> watermark_;
};

}  // namespace iotgov::canonical
