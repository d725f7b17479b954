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

#include "iotgov/value.hpp"

#include <sstream>

namespace iotgov {

bool Value::equals(const Value& other) const {
  if (is_number() && other.is_number()) return as_number() == other.as_number();
  if (is_bool() && other.is_bool()) return as_bool() == other.as_bool();
  if (is_string() && other.is_string()) return as_string() == other.as_string();
  return false;
}

bool Value::less(const Value& other) const {
  if (is_number() && other.is_number()) return as_number() < other.as_number();
  if (is_string() && other.is_string()) return as_string() < other.as_string();
  return false;
}

bool Value::operator<(const Value& other) const {
  // Kind rank first so mixed-kind values still form a total order.
  auto rank = [](const Value& v) {
    if (v.is_bool()) return 0;
    if (v.is_number()) return 1;
    return 2;
  };
  int ra = rank(*this), rb = rank(other);
  if (ra != rb) return ra < rb;
  if (is_bool()) return as_bool() < other.as_bool();
  if (is_number()) return as_number() < other.as_number();
  return as_string() < other.as_string();
}

std::string Value::str() const {
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_int()) return std::to_string(std::get<std::int64_t>(v_));
  if (is_double()) {
    std::ostringstream os;
    os << std::get<double>(v_);
    return os.str();
  }
  return as_string();
}

nlohmann::json Value::to_json() const {
  if (is_bool()) return as_bool();
  if (is_int()) return std::get<std::int64_t>(v_);
  if (is_double()) return std::get<double>(v_);
  return as_string();
}

Value Value::from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number()) return Value(j.get<double>());
  return Value(j.get<std::string>());
}

nlohmann::json attr_map_to_json(const AttrMap& attrs) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : attrs) out[k] = v.to_json();
  return out;
}

AttrMap attr_map_from_json(const nlohmann::json& j) {
  AttrMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace(it.key(), Value::from_json(it.value()));
  }
  return out;
}

}  // namespace iotgov
