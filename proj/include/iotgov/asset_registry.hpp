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
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/errors.hpp"
#include "iotgov/value.hpp"

namespace iotgov::asset {

// Six-level physical hierarchy. Each node's parent sits exactly one level
// above it; Enterprise nodes are roots.
enum class Level { Enterprise, Site, Line, Asset, Component, Sensor };

enum class Lifecycle { Commissioning, Operation, Maintenance, Decommissioning };

enum class DeviceState { Provisioned, Commissioned, Active, Suspended, Revoked };

std::string_view level_name(Level level);
std::optional<Level> level_from_name(const std::string& name);
std::string_view lifecycle_name(Lifecycle state);
std::optional<Lifecycle> lifecycle_from_name(const std::string& name);
std::string_view device_state_name(DeviceState state);
std::optional<DeviceState> device_state_from_name(const std::string& name);

struct AssetNode {
  std::string id;
  Level level = Level::Sensor;
  std::optional<std::string> parent;  // empty for Enterprise
  AttrMap attributes;
  Lifecycle lifecycle = Lifecycle::Commissioning;

  nlohmann::json to_json() const;
  static Result<AssetNode> from_json(const nlohmann::json& j);
};

struct DeviceIdentity {
  std::string device_id;
  std::string asset_ref;
  // Shared secret; admission compares keyed digests, never the raw secret.
  std::string credential;
  DeviceState state = DeviceState::Provisioned;

  nlohmann::json to_json() const;
  static Result<DeviceIdentity> from_json(const nlohmann::json& j);
};

// Effective attributes of a node: the union of attribute maps along the
// root-to-leaf lineage. On a name collision the deeper (more local) level
// wins. Level-qualified aliases ("site.jurisdiction") are added for every
// level on the path so policies can pin a specific level when they need to.
struct EffectiveAttributes {
  AttrMap attrs;
  std::vector<std::string> lineage;  // root first
  Lifecycle lifecycle = Lifecycle::Commissioning;
};

struct LifecycleEvent {
  std::string asset_id;
  Lifecycle from;
  Lifecycle to;
};

class AssetRegistry {
 public:
  Result<std::string> register_node(const AssetNode& node);
  Result<AssetNode> relocate_node(const std::string& id,
                                  const std::string& new_parent);
  Result<AssetNode> transition_lifecycle(const std::string& id, Lifecycle target);
  Result<EffectiveAttributes> resolve_effective_attributes(
      const std::string& id) const;

  Result<std::string> register_device(const DeviceIdentity& device);
  // Admitted iff the keyed credential digest matches and the device is Active.
  // A matching credential on a non-Active device is "not admitted", not an error.
  Result<bool> check_device_admission(const std::string& device_id,
                                      const std::string& presented_credential) const;
  Result<DeviceIdentity> transition_device_state(const std::string& device_id,
                                                 DeviceState target);
  // Convenience for decommissioning flows: walks Active -> Suspended -> Revoked.
  Status revoke_device(const std::string& device_id);
  // Rotation invalidates the prior secret immediately; no overlap window.
  Status replace_credential(const std::string& device_id,
                            const std::string& new_credential);

  std::optional<AssetNode> find_node(const std::string& id) const;
  std::optional<DeviceIdentity> find_device(const std::string& device_id) const;
  std::vector<AssetNode> nodes() const;
  std::vector<DeviceIdentity> devices() const;

  // Lifecycle change events accumulated since the last drain; consumed by the
  // enforcement layer to trigger policy re-evaluation.
  std::vector<LifecycleEvent> drain_events();

  nlohmann::json to_json() const;  // fleet definition document
  Status load_fleet(const nlohmann::json& fleet);

 private:
  Result<std::string> register_node_locked(const AssetNode& node);
  Result<std::string> register_device_locked(const DeviceIdentity& device);
  bool is_descendant_locked(const std::string& ancestor,
                            const std::string& candidate) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, AssetNode> nodes_;
  std::map<std::string, DeviceIdentity> devices_;
  std::vector<LifecycleEvent> events_;
};

}  // namespace iotgov::asset
