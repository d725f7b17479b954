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

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "json.hpp"

namespace iotgov {

// Attribute value as carried by asset nodes, policy literals, and requests.
// Numbers compare numerically regardless of integer/double representation;
// values of unrelated kinds are never equal and never ordered.
class Value {
 public:
  Value() : v_(false) {}
  Value(bool b) : v_(b) {}                         // NOLINT
  Value(std::int64_t i) : v_(i) {}                 // NOLINT
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}  // NOLINT
  Value(double d) : v_(d) {}                       // NOLINT
  Value(std::string s) : v_(std::move(s)) {}       // NOLINT
  Value(const char* s) : v_(std::string(s)) {}     // NOLINT

  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_number() const { return is_int() || is_double(); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  double as_number() const {
    return is_int() ? static_cast<double>(std::get<std::int64_t>(v_))
                    : std::get<double>(v_);
  }
  const std::string& as_string() const { return std::get<std::string>(v_); }

  bool equals(const Value& other) const;
  // Ordered comparison; false when the kinds are not comparable.
  bool less(const Value& other) const;

  bool operator==(const Value& other) const { return equals(other); }
  bool operator<(const Value& other) const;  // total order, for set/map keys

  std::string str() const;

  nlohmann::json to_json() const;
  static Value from_json(const nlohmann::json& j);

 private:
  std::variant<bool, std::int64_t, double, std::string> v_;
};

using AttrMap = std::map<std::string, Value>;

nlohmann::json attr_map_to_json(const AttrMap& attrs);
AttrMap attr_map_from_json(const nlohmann::json& j);

}  // namespace iotgov
