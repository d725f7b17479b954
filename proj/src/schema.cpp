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

#include "iotgov/schema.hpp"

#include <algorithm>
#include <set>

#include "iotgov/simtime.hpp"

namespace iotgov::schema {

namespace {

constexpr std::string_view kTypeNames[] = {"boolean",   "integer", "float",
                                           "string",    "timestamp", "record"};

bool is_numeric(FieldType t) {
  return t == FieldType::Integer || t == FieldType::Float;
}

bool value_matches_type(FieldType type, const nlohmann::json& v) {
  switch (type) {
    case FieldType::Boolean:
      return v.is_boolean();
    case FieldType::Integer:
      return v.is_number_integer();
    case FieldType::Float:
      return v.is_number();
    case FieldType::String:
      return v.is_string();
    case FieldType::Timestamp:
      return v.is_string() && parse_iso8601(v.get<std::string>()).has_value();
    case FieldType::Record:
      return v.is_object();
  }
  return false;
}

// Every value accepted as `from` is also accepted as `to`.
bool type_space_contained(FieldType from, FieldType to) {
  if (from == to) return true;
  if (from == FieldType::Integer && to == FieldType::Float) return true;
  if (from == FieldType::Timestamp && to == FieldType::String) return true;
  return false;
}

void validate_into(const StructSchema& schema, const nlohmann::json& payload,
                   const std::string& prefix,
                   std::vector<MessageViolation>& out) {
  for (const FieldDef& field : schema.fields) {
    std::string path = prefix.empty() ? field.name : prefix + "." + field.name;
    auto it = payload.find(field.name);
    if (it == payload.end() || it->is_null()) {
      if (field.required) {
        out.push_back({path, "missing-required"});
      } else if (it != payload.end()) {
        out.push_back({path, "null-optional"});
      }
      continue;
    }
    if (!value_matches_type(field.type, *it)) {
      out.push_back({path, "type-mismatch"});
      continue;
    }
    if (field.type == FieldType::Record && field.nested) {
      validate_into(*field.nested, *it, path, out);
      continue;
    }
    if (is_numeric(field.type)) {
      double v = it->get<double>();
      if ((field.range_min && v < *field.range_min) ||
          (field.range_max && v > *field.range_max)) {
        out.push_back({path, "range-exceedance"});
      }
    }
  }
  for (auto it = payload.begin(); it != payload.end(); ++it) {
    if (!schema.find(it.key())) {
      std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
      out.push_back({path, "unknown-field"});
    }
  }
}

bool field_equal(const FieldDef& a, const FieldDef& b) {
  if (a.type != b.type || a.required != b.required) return false;
  if (a.range_min != b.range_min || a.range_max != b.range_max) return false;
  if (a.type == FieldType::Record) {
    if (!a.nested || !b.nested) return a.nested == b.nested;
    return *a.nested == *b.nested;
  }
  return true;
}

VersionBump max_bump(VersionBump a, VersionBump b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

// Interval containment with absent bounds treated as unbounded.
bool range_contained(const std::optional<double>& inner_min,
                     const std::optional<double>& inner_max,
                     const std::optional<double>& outer_min,
                     const std::optional<double>& outer_max) {
  if (outer_min && (!inner_min || *inner_min < *outer_min)) return false;
  if (outer_max && (!inner_max || *inner_max > *outer_max)) return false;
  return true;
}

// Collects reasons why a message valid under `from` could be rejected by `to`.
void one_way_violations(const StructSchema& from, const StructSchema& to,
                        const std::string& prefix, const std::string& direction,
                        std::vector<CompatViolation>& out) {
  for (const FieldDef& f : from.fields) {
    std::string path = prefix.empty() ? f.name : prefix + "." + f.name;
    const FieldDef* t = to.find(f.name);
    if (!t) {
      out.push_back({path, "removed-field", direction});
      continue;
    }
    if (!type_space_contained(f.type, t->type)) {
      out.push_back({path, "type-changed", direction});
      continue;
    }
    if (!f.required && t->required) {
      out.push_back({path, "optional-to-required", direction});
    }
    if (f.type == FieldType::Record && f.nested && t->nested) {
      one_way_violations(*f.nested, *t->nested, path, direction, out);
    }
    if (is_numeric(f.type) &&
        !range_contained(f.range_min, f.range_max, t->range_min, t->range_max)) {
      out.push_back({path, "range-narrowed", direction});
    }
  }
  for (const FieldDef& t : to.fields) {
    if (!from.find(t.name) && t.required) {
      std::string path = prefix.empty() ? t.name : prefix + "." + t.name;
      out.push_back({path, "new-required-field", direction});
    }
  }
}

}  // namespace

std::string_view field_type_name(FieldType type) {
  return kTypeNames[static_cast<int>(type)];
}

std::optional<FieldType> field_type_from_name(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kTypeNames[i]) return static_cast<FieldType>(i);
  }
  return std::nullopt;
}

const FieldDef* StructSchema::find(const std::string& name) const {
  for (const FieldDef& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Status StructSchema::validate() const {
  std::set<std::string> seen;
  for (const FieldDef& f : fields) {
    if (f.name.empty())
      return Error{ErrorCode::MalformedContract, "schema field with empty name"};
    if (!seen.insert(f.name).second)
      return Error{ErrorCode::MalformedContract, "duplicate field: " + f.name};
    if ((f.range_min || f.range_max) && !is_numeric(f.type))
      return Error{ErrorCode::MalformedContract,
                   "range constraint on non-numeric field: " + f.name};
    if (f.range_min && f.range_max && *f.range_min > *f.range_max)
      return Error{ErrorCode::MalformedContract, "empty range on field: " + f.name};
    if (f.type == FieldType::Record) {
      if (!f.nested)
        return Error{ErrorCode::MalformedContract,
                     "record field without nested schema: " + f.name};
      if (auto s = f.nested->validate(); !s.ok()) return s;
    } else if (f.nested) {
      return Error{ErrorCode::MalformedContract,
                   "nested schema on non-record field: " + f.name};
    }
  }
  return {};
}

bool StructSchema::operator==(const StructSchema& other) const {
  if (fields.size() != other.fields.size()) return false;
  for (const FieldDef& f : fields) {
    const FieldDef* o = other.find(f.name);
    if (!o || !field_equal(f, *o)) return false;
  }
  return true;
}

nlohmann::json StructSchema::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const FieldDef& f : fields) {
    nlohmann::json jf{{"name", f.name},
                      {"type", std::string(field_type_name(f.type))},
                      {"required", f.required}};
    if (f.range_min) jf["min"] = *f.range_min;
    if (f.range_max) jf["max"] = *f.range_max;
    if (f.nested) jf["fields"] = f.nested->to_json()["fields"];
    arr.push_back(jf);
  }
  return {{"fields", arr}};
}

Result<StructSchema> StructSchema::from_json(const nlohmann::json& j) {
  StructSchema out;
  if (!j.contains("fields") || !j.at("fields").is_array())
    return Error{ErrorCode::MalformedContract, "schema requires a fields array"};
  for (const auto& jf : j.at("fields")) {
    FieldDef f;
    if (!jf.contains("name") || !jf.contains("type"))
      return Error{ErrorCode::MalformedContract, "field requires name and type"};
    f.name = jf.at("name").get<std::string>();
    auto type = field_type_from_name(jf.at("type").get<std::string>());
    if (!type)
      return Error{ErrorCode::MalformedContract, "unknown type on field " + f.name};
    f.type = *type;
    f.required = jf.value("required", true);
    if (jf.contains("min")) f.range_min = jf.at("min").get<double>();
    if (jf.contains("max")) f.range_max = jf.at("max").get<double>();
    if (jf.contains("fields")) {
      auto nested = StructSchema::from_json(nlohmann::json{{"fields", jf.at("fields")}});
      if (!nested.ok()) return nested.error();
      f.nested = std::make_shared<StructSchema>(std::move(nested).take());
    }
    out.fields.push_back(std::move(f));
  }
  if (auto s = out.validate(); !s.ok()) return s.error();
  return out;
}

std::vector<MessageViolation> validate_message(const StructSchema& schema,
                                               const nlohmann::json& payload) {
  std::vector<MessageViolation> out;
  if (!payload.is_object()) {
    out.push_back({"", "type-mismatch"});
    return out;
  }
  validate_into(schema, payload, "", out);
  return out;
}

VersionBump classify_schema_change(const StructSchema& old_schema,
                                   const StructSchema& new_schema) {
  VersionBump bump = VersionBump::Patch;
  for (const FieldDef& of : old_schema.fields) {
    const FieldDef* nf = new_schema.find(of.name);
    if (!nf) return VersionBump::Major;  // removal
    if (of.type != nf->type) return VersionBump::Major;
    if (of.required != nf->required) {
      if (nf->required) return VersionBump::Major;  // tightening
      bump = max_bump(bump, VersionBump::Minor);    // relaxation
    }
    if (of.range_min != nf->range_min || of.range_max != nf->range_max)
      return VersionBump::Major;
    if (of.type == FieldType::Record && of.nested && nf->nested) {
      bump = max_bump(bump, classify_schema_change(*of.nested, *nf->nested));
      if (bump == VersionBump::Major) return bump;
    }
  }
  for (const FieldDef& nf : new_schema.fields) {
    if (old_schema.find(nf.name)) continue;
    if (nf.required) return VersionBump::Major;  // new required field
    bump = max_bump(bump, VersionBump::Minor);   // additive optional
  }
  return bump;
}

std::string_view compatibility_mode_name(CompatibilityMode mode) {
  switch (mode) {
    case CompatibilityMode::Backward: return "Backward";
    case CompatibilityMode::Forward: return "Forward";
    case CompatibilityMode::Full: return "Full";
    case CompatibilityMode::None: return "None";
  }
  return "None";
}

std::optional<CompatibilityMode> compatibility_mode_from_name(
    const std::string& name) {
  if (name == "Backward" || name == "backward") return CompatibilityMode::Backward;
  if (name == "Forward" || name == "forward") return CompatibilityMode::Forward;
  if (name == "Full" || name == "full") return CompatibilityMode::Full;
  if (name == "None" || name == "none") return CompatibilityMode::None;
  return std::nullopt;
}

CompatibilityReport check_compatibility(const StructSchema& old_schema,
                                        const StructSchema& new_schema,
                                        CompatibilityMode mode) {
  CompatibilityReport report;
  if (mode == CompatibilityMode::None) return report;
  if (mode == CompatibilityMode::Backward || mode == CompatibilityMode::Full) {
    one_way_violations(old_schema, new_schema, "", "backward", report.violations);
  }
  if (mode == CompatibilityMode::Forward || mode == CompatibilityMode::Full) {
    one_way_violations(new_schema, old_schema, "", "forward", report.violations);
  }
  report.compatible = report.violations.empty();
  return report;
}

}  // namespace iotgov::schema
