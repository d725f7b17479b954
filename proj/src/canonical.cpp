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

#include "iotgov/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace iotgov::canonical {

namespace {

struct UnitEntry {
  const char* unit;
  const char* dimension;
  // canonical = scale * value + offset
  double scale;
  double offset;
};

// Canonical units per dimension: degC, kPa, s, pct, m, kg.
constexpr UnitEntry kUnits[] = {
    {"degC", "temperature", 1.0, 0.0},
    {"degF", "temperature", 5.0 / 9.0, -160.0 / 9.0},
    {"K", "temperature", 1.0, -273.15},
    {"kPa", "pressure", 1.0, 0.0},
    {"psi", "pressure", 6.894757, 0.0},
    {"bar", "pressure", 100.0, 0.0},
    {"Pa", "pressure", 0.001, 0.0},
    {"s", "time", 1.0, 0.0},
    {"ms", "time", 0.001, 0.0},
    {"min", "time", 60.0, 0.0},
    {"pct", "ratio", 1.0, 0.0},
    {"fraction", "ratio", 100.0, 0.0},
    {"m", "length", 1.0, 0.0},
    {"mm", "length", 0.001, 0.0},
    {"kg", "mass", 1.0, 0.0},
    {"g", "mass", 0.001, 0.0},
};

const UnitEntry* find_unit(const std::string& unit) {
  for (const UnitEntry& e : kUnits) {
    if (unit == e.unit) return &e;
  }
  return nullptr;
}

}  // namespace

CanonicalBaseline CanonicalBaseline::standard() {
  CanonicalBaseline b;
  b.concepts_ = {
      {"Asset", ""},
      {"Location", ""},
      {"Event", ""},
      {"Measurement", ""},
      {"Measurement.Temperature", "degC"},
      {"Measurement.Pressure", "kPa"},
      {"Measurement.Humidity", "pct"},
      {"Measurement.Level", "pct"},
      {"Measurement.Duration", "s"},
      {"Measurement.Distance", "m"},
      {"Measurement.Mass", "kg"},
      {"Measurement.State", ""},
  };
  return b;
}

Status CanonicalBaseline::extend(const std::string& concept_name,
                                 const std::string& canonical_unit) {
  if (concepts_.contains(concept_name))
    return Error{ErrorCode::UnknownConcept,
                 "extension may not shadow baseline concept " + concept_name};
  concepts_.emplace(concept_name, canonical_unit);
  return {};
}

bool CanonicalBaseline::has_concept(const std::string& concept_name) const {
  return concepts_.contains(concept_name);
}

std::optional<std::string> CanonicalBaseline::canonical_unit(
    const std::string& concept_name) const {
  auto it = concepts_.find(concept_name);
  if (it == concepts_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> CanonicalBaseline::concepts() const {
  std::vector<std::string> out;
  out.reserve(concepts_.size());
  for (const auto& [name, _] : concepts_) out.push_back(name);
  return out;
}

bool unit_known(const std::string& unit) { return find_unit(unit) != nullptr; }

std::optional<std::string> unit_dimension(const std::string& unit) {
  const UnitEntry* e = find_unit(unit);
  if (!e) return std::nullopt;
  return std::string(e->dimension);
}

Result<double> convert_unit(double value, const std::string& from,
                            const std::string& to) {
  const UnitEntry* f = find_unit(from);
  const UnitEntry* t = find_unit(to);
  if (!f || !t)
    return Error{ErrorCode::UnsupportedConversion,
                 "unknown unit: " + (f ? to : from)};
  if (std::string_view(f->dimension) != t->dimension)
    return Error{ErrorCode::UnsupportedConversion,
                 from + " and " + to + " measure different dimensions"};
  double canonical = f->scale * value + f->offset;
  return (canonical - t->offset) / t->scale;
}

nlohmann::json MappingSet::to_json() const {
  nlohmann::json mappings = nlohmann::json::array();
  for (const auto& [_, m] : by_signal) {
    nlohmann::json jm{{"signal", m.signal},
                      {"concept", m.concept_name},
                      {"source_unit", m.source_unit},
                      {"value_field", m.value_field},
                      {"timestamp_field", m.timestamp_field},
                      {"clock_skew_bound_ms", m.clock_skew_bound_ms}};
    if (const auto* affine = std::get_if<AffineTransform>(&m.transform)) {
      jm["transform"] = {{"type", "affine"}, {"a", affine->scale}, {"b", affine->offset}};
    } else {
      const auto& table = std::get<TableTransform>(m.transform);
      jm["transform"] = {{"type", "table"}, {"entries", table.entries}};
    }
    mappings.push_back(jm);
  }
  return {{"version", version}, {"mappings", mappings}};
}

Result<MappingSet> load_mapping_set(const nlohmann::json& document,
                                    const CanonicalBaseline& baseline) {
  MappingSet set;
  set.version = document.value("version", "1");
  if (!document.contains("mappings") || !document.at("mappings").is_array())
    return Error{ErrorCode::BadSpec, "mapping set requires a mappings array"};
  for (const auto& jm : document.at("mappings")) {
    MappingSpec m;
    m.signal = jm.value("signal", std::string{});
    m.concept_name = jm.value("concept", std::string{});
    m.source_unit = jm.value("source_unit", std::string{});
    m.value_field = jm.value("value_field", "value");
    m.timestamp_field = jm.value("timestamp_field", "timestamp");
    m.clock_skew_bound_ms = jm.value("clock_skew_bound_ms", TimeMs{0});
    if (m.signal.empty())
      return Error{ErrorCode::BadSpec, "mapping without signal id"};
    if (!baseline.has_concept(m.concept_name))
      return Error{ErrorCode::UnknownConcept,
                   "mapping " + m.signal + " targets unknown concept " + m.concept_name};
    if (jm.contains("transform")) {
      const auto& jt = jm.at("transform");
      std::string type = jt.value("type", "affine");
      if (type == "affine") {
        AffineTransform affine{jt.value("a", 1.0), jt.value("b", 0.0)};
        if (affine.scale == 0.0)
          return Error{ErrorCode::NonInvertibleTransform,
                       "affine transform with zero scale on " + m.signal};
        m.transform = affine;
      } else if (type == "table") {
        TableTransform table;
        for (auto it = jt.at("entries").begin(); it != jt.at("entries").end(); ++it)
          table.entries[it.key()] = it.value().get<double>();
        m.transform = table;
      } else {
        return Error{ErrorCode::BadSpec, "unknown transform type " + type};
      }
    }
    // A mapped unit must be convertible into the concept_name's canonical unit
    // unless the concept_name is unitless (table lookups onto states).
    auto target_unit = baseline.canonical_unit(m.concept_name);
    if (target_unit && !target_unit->empty()) {
      if (!unit_known(m.source_unit) ||
          unit_dimension(m.source_unit) != unit_dimension(*target_unit))
        return Error{ErrorCode::UnitMismatch,
                     "mapping " + m.signal + ": cannot convert " + m.source_unit +
                         " to " + *target_unit};
      m.target_unit = *target_unit;
    }
    set.by_signal[m.signal] = std::move(m);
  }
  return set;
}

nlohmann::json CanonicalMeasurement::to_json() const {
  return {{"asset_id", asset_id},
          {"concept", concept_name},
          {"value", value},
          {"unit", unit},
          {"event_time", event_time},
          {"ingestion_time", ingestion_time},
          {"lineage", lineage}};
}

CanonicalMeasurement CanonicalMeasurement::from_json(const nlohmann::json& j) {
  CanonicalMeasurement m;
  m.asset_id = j.value("asset_id", std::string{});
  m.concept_name = j.value("concept", std::string{});
  m.value = j.value("value", 0.0);
  m.unit = j.value("unit", std::string{});
  m.event_time = j.value("event_time", TimeMs{0});
  m.ingestion_time = j.value("ingestion_time", TimeMs{0});
  if (j.contains("lineage"))
    m.lineage = j.at("lineage").get<std::vector<std::string>>();
  return m;
}

std::string mapping_lineage_tag(const MappingSet& set, const std::string& signal) {
  return "map:" + signal + "@" + set.version;
}

Result<CanonicalMeasurement> apply_mapping(const MappingSet& set,
                                           const RawSignal& raw) {
  const MappingSpec* m = set.find(raw.signal);
  if (!m)
    return Error{ErrorCode::UnmappedSignal, "no mapping for signal " + raw.signal};

  CanonicalMeasurement out;
  out.asset_id = raw.asset_id;
  out.concept_name = m->concept_name;
  out.ingestion_time = raw.ingestion_time;

  auto vit = raw.payload.find(m->value_field);
  if (vit == raw.payload.end())
    return Error{ErrorCode::UnitMismatch,
                 "payload missing value field " + m->value_field};

  if (const auto* affine = std::get_if<AffineTransform>(&m->transform)) {
    if (!vit->is_number())
      return Error{ErrorCode::UnitMismatch,
                   "value field " + m->value_field + " is not numeric"};
    double scaled = affine->scale * vit->get<double>() + affine->offset;
    out.unit = m->source_unit;
    out.value = scaled;
  } else {
    const auto& table = std::get<TableTransform>(m->transform);
    std::string key = vit->is_string() ? vit->get<std::string>() : vit->dump();
    auto e = table.entries.find(key);
    if (e == table.entries.end())
      return Error{ErrorCode::UnitMismatch,
                   "value " + key + " absent from lookup table for " + raw.signal};
    out.unit = m->source_unit;
    out.value = e->second;
  }

  if (!m->target_unit.empty()) {
    auto converted = convert_unit(out.value, m->source_unit, m->target_unit);
    if (!converted.ok()) return converted.error();
    out.value = converted.value();
    out.unit = m->target_unit;
  }

  auto et = raw.payload.find(m->timestamp_field);
  if (et == raw.payload.end())
    return Error{ErrorCode::UnparseableTimestamp,
                 "payload missing timestamp field " + m->timestamp_field};
  auto normalized =
      normalize_timestamp(*et, 0, /*max_drift_ms=*/0, raw.ingestion_time);
  if (!normalized.ok()) return normalized.error();
  out.event_time = normalized->event_time;

  out.lineage.push_back(mapping_lineage_tag(set, raw.signal));
  return out;
}

Result<CanonicalMeasurement> apply_mapping(const MappingSet& set,
                                           const CanonicalMeasurement& measurement) {
  for (const auto& [signal, _] : set.by_signal) {
    std::string tag = mapping_lineage_tag(set, signal);
    if (std::find(measurement.lineage.begin(), measurement.lineage.end(), tag) !=
        measurement.lineage.end()) {
      return measurement;  // already canonical under this mapping set
    }
  }
  return Error{ErrorCode::UnmappedSignal,
               "measurement does not carry a lineage tag from this mapping set"};
}

Result<NormalizedTimestamp> normalize_timestamp(const nlohmann::json& raw,
                                                TimeMs source_offset_ms,
                                                TimeMs max_drift_ms,
                                                TimeMs ingestion_time) {
  NormalizedTimestamp out;
  if (raw.is_number_integer()) {
    out.event_time = raw.get<TimeMs>();
  } else if (raw.is_string()) {
    const std::string text = raw.get<std::string>();
    bool has_zone = false;
    auto parsed = parse_iso8601(text, &has_zone);
    if (!parsed)
      return Error{ErrorCode::UnparseableTimestamp, "cannot parse '" + text + "'"};
    out.event_time = *parsed;
    if (!has_zone) out.event_time -= source_offset_ms;
  } else {
    return Error{ErrorCode::UnparseableTimestamp, "timestamp is neither string nor integer"};
  }
  out.drift_ms = std::llabs(out.event_time - ingestion_time);
  out.violation = max_drift_ms > 0 && out.drift_ms > max_drift_ms;
  return out;
}

bool OrderTracker::observe(const std::string& device_id, TimeMs event_time) {
  auto [it, inserted] = watermark_.emplace(device_id, event_time);
  if (inserted) return true;
  bool in_order = event_time >= it->second - window_ms_;
  it->second = std::max(it->second, event_time);
  return in_order;
}

}  // namespace iotgov::canonical
