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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/errors.hpp"
#include "iotgov/semver.hpp"

namespace iotgov::schema {

enum class FieldType { Boolean, Integer, Float, String, Timestamp, Record };

std::string_view field_type_name(FieldType type);
std::optional<FieldType> field_type_from_name(const std::string& name);

struct StructSchema;

struct FieldDef {
  std::string name;
  FieldType type = FieldType::String;
  bool required = true;
  // Numeric fields only.
  std::optional<double> range_min;
  std::optional<double> range_max;
  // Record fields only.
  std::shared_ptr<StructSchema> nested;
};

// Named-field record schema. Field order carries no meaning: messages are
// keyed maps, so a pure reorder is not a structural change.
struct StructSchema {
  std::vector<FieldDef> fields;

  const FieldDef* find(const std::string& name) const;

  // Unique names per record level, ranges only on numeric types, nested
  // schema present exactly for Record fields.
  Status validate() const;

  nlohmann::json to_json() const;
  static Result<StructSchema> from_json(const nlohmann::json& j);

  bool operator==(const StructSchema& other) const;
};

// One structural defect of a message against a schema.
struct MessageViolation {
  std::string field;  // dotted path for nested fields
  std::string kind;   // missing-required | unknown-field | type-mismatch |
                      // range-exceedance | null-optional
};

// Strict field-set semantics: a field not declared by the schema makes the
// message invalid. Surfacing unexpected fields is the point; masking them
// would hide source-side drift.
std::vector<MessageViolation> validate_message(const StructSchema& schema,
                                               const nlohmann::json& payload);

inline bool message_valid(const StructSchema& schema, const nlohmann::json& payload) {
  return validate_message(schema, payload).empty();
}

// --- Evolution ------------------------------------------------------------

// Required version bump between two schema revisions.
//   patch: structurally identical (reorder of named fields included)
//   minor: purely additive optional fields, or required->optional relaxation
//   major: anything else (removal, type change, optional->required, range change)
VersionBump classify_schema_change(const StructSchema& old_schema,
                                   const StructSchema& new_schema);

enum class CompatibilityMode { Backward, Forward, Full, None };

std::string_view compatibility_mode_name(CompatibilityMode mode);
std::optional<CompatibilityMode> compatibility_mode_from_name(const std::string& name);

struct CompatViolation {
  std::string field;
  std::string kind;       // removed-field | new-required-field | type-changed |
                          // optional-to-required | range-narrowed
  std::string direction;  // backward | forward
};

struct CompatibilityReport {
  bool compatible = true;
  std::vector<CompatViolation> violations;
};

// Backward: every message valid under `old_schema` is valid under `new_schema`.
// Forward is the converse; Full is both; None always passes.
CompatibilityReport check_compatibility(const StructSchema& old_schema,
                                        const StructSchema& new_schema,
                                        CompatibilityMode mode);

}  // namespace iotgov::schema
