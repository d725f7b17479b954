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

#include "iotgov/asset_registry.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

#include "iotgov/sha256.hpp"

namespace iotgov::asset {

namespace {

constexpr std::string_view kLevelNames[] = {"Enterprise", "Site",      "Line",
                                            "Asset",      "Component", "Sensor"};
constexpr std::string_view kLifecycleNames[] = {"Commissioning", "Operation",
                                                "Maintenance", "Decommissioning"};
constexpr std::string_view kDeviceStateNames[] = {"Provisioned", "Commissioned",
                                                  "Active", "Suspended", "Revoked"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool lifecycle_transition_legal(Lifecycle from, Lifecycle to) {
  if (from == to) return true;  // no-op transition is a success
  switch (from) {
    case Lifecycle::Commissioning:
      return to == Lifecycle::Operation;
    case Lifecycle::Operation:
      return to == Lifecycle::Maintenance || to == Lifecycle::Decommissioning;
    case Lifecycle::Maintenance:
      return to == Lifecycle::Operation;
    case Lifecycle::Decommissioning:
      return false;  // terminal
  }
  return false;
}

bool device_transition_legal(DeviceState from, DeviceState to) {
  if (from == to) return true;
  switch (from) {
    case DeviceState::Provisioned:
      return to == DeviceState::Commissioned;
    case DeviceState::Commissioned:
      return to == DeviceState::Active;
    case DeviceState::Active:
      return to == DeviceState::Suspended;
    case DeviceState::Suspended:
      return to == DeviceState::Active || to == DeviceState::Revoked;
    case DeviceState::Revoked:
      return false;  // terminal
  }
  return false;
}

}  // namespace

std::string_view level_name(Level level) {
  return kLevelNames[static_cast<int>(level)];
}

std::optional<Level> level_from_name(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kLevelNames[i]) return static_cast<Level>(i);
  }
  return std::nullopt;
}

std::string_view lifecycle_name(Lifecycle state) {
  return kLifecycleNames[static_cast<int>(state)];
}

std::optional<Lifecycle> lifecycle_from_name(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kLifecycleNames[i]) return static_cast<Lifecycle>(i);
  }
  return std::nullopt;
}

std::string_view device_state_name(DeviceState state) {
  return kDeviceStateNames[static_cast<int>(state)];
}

std::optional<DeviceState> device_state_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    if (name == kDeviceStateNames[i]) return static_cast<DeviceState>(i);
  }
  return std::nullopt;
}

nlohmann::json AssetNode::to_json() const {
  nlohmann::json j{{"id", id},
                   {"level", std::string(level_name(level))},
                   {"attributes", attr_map_to_json(attributes)},
                   {"lifecycle", std::string(lifecycle_name(lifecycle))}};
  if (parent) j["parent"] = *parent;
  return j;
}

Result<AssetNode> AssetNode::from_json(const nlohmann::json& j) {
  AssetNode node;
  if (!j.contains("id") || !j.contains("level"))
    return Error{ErrorCode::BadSpec, "asset node requires id and level"};
  node.id = j.at("id").get<std::string>();
  auto level = level_from_name(j.at("level").get<std::string>());
  if (!level)
    return Error{ErrorCode::BadSpec, "unknown asset level in node " + node.id};
  node.level = *level;
  if (j.contains("parent") && !j.at("parent").is_null())
    node.parent = j.at("parent").get<std::string>();
  if (j.contains("attributes"))
    node.attributes = attr_map_from_json(j.at("attributes"));
  if (j.contains("lifecycle")) {
    auto lc = lifecycle_from_name(j.at("lifecycle").get<std::string>());
    if (!lc)
      return Error{ErrorCode::BadSpec, "unknown lifecycle in node " + node.id};
    node.lifecycle = *lc;
  }
  return node;
}

nlohmann::json DeviceIdentity::to_json() const {
  return {{"device_id", device_id},
          {"asset_ref", asset_ref},
          {"credential", credential},
          {"state", std::string(device_state_name(state))}};
}

Result<DeviceIdentity> DeviceIdentity::from_json(const nlohmann::json& j) {
  DeviceIdentity d;
  if (!j.contains("device_id") || !j.contains("asset_ref"))
    return Error{ErrorCode::BadSpec, "device requires device_id and asset_ref"};
  d.device_id = j.at("device_id").get<std::string>();
  d.asset_ref = j.at("asset_ref").get<std::string>();
  d.credential = j.value("credential", std::string{});
  if (j.contains("state")) {
    auto st = device_state_from_name(j.at("state").get<std::string>());
    if (!st)
      return Error{ErrorCode::BadSpec, "unknown device state for " + d.device_id};
    d.state = *st;
  }
  return d;
}

Result<std::string> AssetRegistry::register_node(const AssetNode& node) {
  std::unique_lock lock(mutex_);
  return register_node_locked(node);
}

Result<std::string> AssetRegistry::register_node_locked(const AssetNode& node) {
  if (nodes_.contains(node.id))
    return Error{ErrorCode::DuplicateId, "asset id already registered: " + node.id};
  if (node.level == Level::Enterprise) {
    if (node.parent)
      return Error{ErrorCode::LevelMismatch, "Enterprise node cannot have a parent"};
  } else {
    if (!node.parent)
      return Error{ErrorCode::UnknownParent,
                   "non-Enterprise node requires a parent: " + node.id};
    auto it = nodes_.find(*node.parent);
    if (it == nodes_.end())
      return Error{ErrorCode::UnknownParent, "parent not registered: " + *node.parent};
    if (static_cast<int>(it->second.level) + 1 != static_cast<int>(node.level))
      return Error{ErrorCode::LevelMismatch,
                   "parent " + *node.parent + " is " +
                       std::string(level_name(it->second.level)) + ", expected " +
                       std::string(level_name(static_cast<Level>(
                           static_cast<int>(node.level) - 1)))};
  }
  nodes_.emplace(node.id, node);
  return node.id;
}

bool AssetRegistry::is_descendant_locked(const std::string& ancestor,
                                         const std::string& candidate) const {
  std::string cur = candidate;
  while (true) {
    if (cur == ancestor) return true;
    auto it = nodes_.find(cur);
    if (it == nodes_.end() || !it->second.parent) return false;
    cur = *it->second.parent;
  }
}

Result<AssetNode> AssetRegistry::relocate_node(const std::string& id,
                                               const std::string& new_parent) {
  std::unique_lock lock(mutex_);
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    return Error{ErrorCode::UnknownNode, "unknown asset: " + id};
  if (it->second.level == Level::Enterprise)
    return Error{ErrorCode::LevelMismatch, "Enterprise nodes have no parent"};
  // Cycle check first so "relocate under own descendant" reports the real
  // problem rather than the incidental level mismatch.
  if (is_descendant_locked(id, new_parent))
    return Error{ErrorCode::CycleDetected,
                 "new parent " + new_parent + " is a descendant of " + id};
  auto pit = nodes_.find(new_parent);
  if (pit == nodes_.end())
    return Error{ErrorCode::UnknownNode, "unknown parent: " + new_parent};
  if (static_cast<int>(pit->second.level) + 1 != static_cast<int>(it->second.level))
    return Error{ErrorCode::LevelMismatch,
                 "parent level must be one above " + id};
  it->second.parent = new_parent;
  return it->second;
}

Result<AssetNode> AssetRegistry::transition_lifecycle(const std::string& id,
                                                      Lifecycle target) {
  std::unique_lock lock(mutex_);
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    return Error{ErrorCode::UnknownNode, "unknown asset: " + id};
  Lifecycle from = it->second.lifecycle;
  if (!lifecycle_transition_legal(from, target))
    return Error{ErrorCode::IllegalTransition,
                 std::string(lifecycle_name(from)) + " -> " +
                     std::string(lifecycle_name(target)) + " for " + id};
  if (from != target) {
    it->second.lifecycle = target;
    events_.push_back({id, from, target});
  }
  return it->second;
}

Result<EffectiveAttributes> AssetRegistry::resolve_effective_attributes(
    const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    return Error{ErrorCode::UnknownNode, "unknown asset: " + id};

  std::vector<const AssetNode*> path;  // leaf first, reversed below
  const AssetNode* cur = &it->second;
  while (true) {
    path.push_back(cur);
    if (!cur->parent) break;
    auto pit = nodes_.find(*cur->parent);
    if (pit == nodes_.end()) break;  // dangling parent; treat as root
    cur = &pit->second;
  }
  std::reverse(path.begin(), path.end());

  EffectiveAttributes out;
  out.lifecycle = it->second.lifecycle;
  for (const AssetNode* node : path) {
    out.lineage.push_back(node->id);
    std::string prefix = lower(level_name(node->level)) + ".";
    for (const auto& [name, value] : node->attributes) {
      out.attrs[name] = value;  // deeper levels overwrite: child wins
      out.attrs[prefix + name] = value;
    }
  }
  out.attrs["id"] = Value(id);
  out.attrs["level"] = Value(std::string(level_name(it->second.level)));
  out.attrs["lifecycle"] = Value(std::string(lifecycle_name(out.lifecycle)));
  return out;
}

Result<std::string> AssetRegistry::register_device(const DeviceIdentity& device) {
  std::unique_lock lock(mutex_);
  return register_device_locked(device);
}

Result<std::string> AssetRegistry::register_device_locked(
    const DeviceIdentity& device) {
  if (devices_.contains(device.device_id))
    return Error{ErrorCode::DuplicateId,
                 "device already registered: " + device.device_id};
  if (!nodes_.contains(device.asset_ref))
    return Error{ErrorCode::UnknownNode,
                 "device asset_ref not registered: " + device.asset_ref};
  devices_.emplace(device.device_id, device);
  return device.device_id;
}

Result<bool> AssetRegistry::check_device_admission(
    const std::string& device_id, const std::string& presented_credential) const {
  std::shared_lock lock(mutex_);
  auto it = devices_.find(device_id);
  if (it == devices_.end())
    return Error{ErrorCode::UnknownDevice, "unknown device: " + device_id};
  const auto& dev = it->second;
  auto expected = keyed_digest_hex(dev.credential, device_id);
  auto presented = keyed_digest_hex(presented_credential, device_id);
  if (expected != presented)
    return Error{ErrorCode::BadCredential, "credential mismatch for " + device_id};
  return dev.state == DeviceState::Active;
}

Result<DeviceIdentity> AssetRegistry::transition_device_state(
    const std::string& device_id, DeviceState target) {
  std::unique_lock lock(mutex_);
  auto it = devices_.find(device_id);
  if (it == devices_.end())
    return Error{ErrorCode::UnknownDevice, "unknown device: " + device_id};
  if (!device_transition_legal(it->second.state, target))
    return Error{ErrorCode::IllegalTransition,
                 std::string(device_state_name(it->second.state)) + " -> " +
                     std::string(device_state_name(target)) + " for " + device_id};
  it->second.state = target;
  return it->second;
}

Status AssetRegistry::revoke_device(const std::string& device_id) {
  {
    std::shared_lock lock(mutex_);
    auto it = devices_.find(device_id);
    if (it == devices_.end())
      return Error{ErrorCode::UnknownDevice, "unknown device: " + device_id};
    if (it->second.state == DeviceState::Revoked) return {};
  }
  auto dev = find_device(device_id);
  if (dev->state == DeviceState::Active) {
    auto r = transition_device_state(device_id, DeviceState::Suspended);
    if (!r.ok()) return r.error();
  }
  auto r = transition_device_state(device_id, DeviceState::Revoked);
  if (!r.ok()) return r.error();
  return {};
}

Status AssetRegistry::replace_credential(const std::string& device_id,
                                         const std::string& new_credential) {
  std::unique_lock lock(mutex_);
  auto it = devices_.find(device_id);
  if (it == devices_.end())
    return Error{ErrorCode::UnknownDevice, "unknown device: " + device_id};
  it->second.credential = new_credential;
  return {};
}

std::optional<AssetNode> AssetRegistry::find_node(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return std::nullopt;
  return it->second;
}

std::optional<DeviceIdentity> AssetRegistry::find_device(
    const std::string& device_id) const {
  std::shared_lock lock(mutex_);
  auto it = devices_.find(device_id);
  if (it == devices_.end()) return std::nullopt;
  return it->second;
}

std::vector<AssetNode> AssetRegistry::nodes() const {
  std::shared_lock lock(mutex_);
  std::vector<AssetNode> out;
  out.reserve(nodes_.size());
  for (const auto& [_, node] : nodes_) out.push_back(node);
  return out;
}

std::vector<DeviceIdentity> AssetRegistry::devices() const {
  std::shared_lock lock(mutex_);
  std::vector<DeviceIdentity> out;
  out.reserve(devices_.size());
  for (const auto& [_, dev] : devices_) out.push_back(dev);
  return out;
}

std::vector<LifecycleEvent> AssetRegistry::drain_events() {
  std::unique_lock lock(mutex_);
  auto out = std::move(events_);
  events_.clear();
  return out;
}

nlohmann::json AssetRegistry::to_json() const {
  std::shared_lock lock(mutex_);
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& [_, node] : nodes_) nodes.push_back(node.to_json());
  nlohmann::json devices = nlohmann::json::array();
  for (const auto& [_, dev] : devices_) devices.push_back(dev.to_json());
  return {{"nodes", nodes}, {"devices", devices}};
}

Status AssetRegistry::load_fleet(const nlohmann::json& fleet) {
  std::unique_lock lock(mutex_);
  if (fleet.contains("nodes")) {
    // Registration order in the file may be arbitrary; insert parents first.
    std::vector<AssetNode> pending;
    for (const auto& item : fleet.at("nodes")) {
      auto node = AssetNode::from_json(item);
      if (!node.ok()) return node.error();
      pending.push_back(node.value());
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const AssetNode& a, const AssetNode& b) {
                       return static_cast<int>(a.level) < static_cast<int>(b.level);
                     });
    for (const auto& node : pending) {
      auto r = register_node_locked(node);
      if (!r.ok()) return r.error();
    }
  }
  if (fleet.contains("devices")) {
    for (const auto& item : fleet.at("devices")) {
      auto dev = DeviceIdentity::from_json(item);
      if (!dev.ok()) return dev.error();
      auto r = register_device_locked(dev.value());
      if (!r.ok()) return r.error();
    }
  }
  return {};
}

}  // namespace iotgov::asset
