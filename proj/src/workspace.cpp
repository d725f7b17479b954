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

#include "iotgov/workspace.hpp"

#include <fstream>
#include <sstream>

namespace iotgov::workspace {

namespace fs = std::filesystem;

Result<std::string> read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error{ErrorCode::IoError, "cannot open " + path.string()};
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Status write_text_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Error{ErrorCode::IoError, "cannot write " + path.string()};
  out << text;
  return {};
}

Result<nlohmann::json> read_json_file(const fs::path& path) {
  auto text = read_text_file(path);
  if (!text.ok()) return text.error();
  auto j = nlohmann::json::parse(text.value(), nullptr, false);
  if (j.is_discarded())
    return Error{ErrorCode::IoError, "malformed JSON in " + path.string()};
  return j;
}

Status Workspace::load() {
  std::error_code ec;
  fs::create_directories(root_, ec);

  if (fs::exists(root_ / "fleet.json")) {
    auto fleet = read_json_file(root_ / "fleet.json");
    if (!fleet.ok()) return fleet.error();
    if (auto s = assets.load_fleet(fleet.value()); !s.ok()) return s;
  }
  if (fs::exists(root_ / "contracts.json")) {
    auto doc = read_json_file(root_ / "contracts.json");
    if (!doc.ok()) return doc.error();
    if (auto s = contracts.load(doc.value(), baseline); !s.ok()) return s;
  }
  if (fs::exists(root_ / "policies")) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root_ / "policies")) {
      if (entry.path().extension() == ".policy") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      auto text = read_text_file(file);
      if (!text.ok()) return text.error();
      auto ast = policy::parse_policy(text.value());
      if (!ast.ok())
        return Error{ast.error().code, file.string() + ": " + ast.error().message};
      policies.push_back(std::move(ast).take());
    }
  }
  if (fs::exists(root_ / "mappings.json")) {
    auto doc = read_json_file(root_ / "mappings.json");
    if (!doc.ok()) return doc.error();
    auto set = canonical::load_mapping_set(doc.value(), baseline);
    if (!set.ok()) return set.error();
    mappings = std::move(set).take();
  }
  if (fs::exists(root_ / "bindings.json")) {
    auto doc = read_json_file(root_ / "bindings.json");
    if (!doc.ok()) return doc.error();
    for (auto it = doc->begin(); it != doc->end(); ++it)
      bindings[it.key()] = it.value().get<std::string>();
  }
  if (fs::exists(root_ / "products.json")) {
    auto doc = read_json_file(root_ / "products.json");
    if (!doc.ok()) return doc.error();
    for (const auto& jp : doc.value()) {
      auto product = boundary::ProductDefinition::from_json(jp);
      if (!product.ok()) return product.error();
      products.push_back(std::move(product).take());
    }
  }
  if (fs::exists(root_ / "budgets.json")) {
    auto doc = read_json_file(root_ / "budgets.json");
    if (!doc.ok()) return doc.error();
    for (const auto& jb : doc.value()) {
      auto budget = privacy::PrivacyBudget::from_json(jb);
      budgets[budget.product_id] = budget;
    }
  }
  if (fs::exists(root_ / "quarantine.json")) {
    auto doc = read_json_file(root_ / "quarantine.json");
    if (!doc.ok()) return doc.error();
    for (const auto& ji : doc.value())
      quarantine.push_back(boundary::QuarantineItem::from_json(ji));
  }
  if (fs::exists(root_ / "notifications.json")) {
    auto doc = read_json_file(root_ / "notifications.json");
    if (!doc.ok()) return doc.error();
    for (const auto& jn : doc.value()) {
      notifications.push_back({jn.value("at", TimeMs{0}),
                               jn.value("steward", std::string{}),
                               jn.value("subject", std::string{}),
                               jn.value("detail", std::string{})});
    }
  }
  if (fs::exists(root_ / "canonical")) {
    for (const auto& entry : fs::directory_iterator(root_ / "canonical")) {
      if (entry.path().extension() != ".jsonl") continue;
      std::string region = entry.path().stem().string();
      auto text = read_text_file(entry.path());
      if (!text.ok()) return text.error();
      std::istringstream in(text.value());
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        store.payload_by_region[region].push_back(
            canonical::CanonicalMeasurement::from_json(j));
      }
    }
  }
  if (fs::exists(root_ / "catalog.jsonl")) {
    auto text = read_text_file(root_ / "catalog.jsonl");
    if (!text.ok()) return text.error();
    std::istringstream in(text.value());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (!j.is_discarded()) store.catalog.push_back(j);
    }
  }
  if (fs::exists(root_ / "observations.jsonl")) {
    auto text = read_text_file(root_ / "observations.jsonl");
    if (!text.ok()) return text.error();
    std::istringstream in(text.value());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (!j.is_discarded())
        observations.push_back(quality::MessageObservation::from_json(j));
    }
  }
  if (fs::exists(root_ / "audit.jsonl")) {
    auto text = read_text_file(root_ / "audit.jsonl");
    if (!text.ok()) return text.error();
    audit_text = text.value();
  }
  if (fs::exists(root_ / "result.json")) {
    auto doc = read_json_file(root_ / "result.json");
    if (doc.ok()) last_result = doc.value();
  }
  return {};
}

Status Workspace::make_enforcement(TimeMs now) {
  if (!mappings) mappings = canonical::MappingSet{};
  auto effective = policy::compose_all(policies, now);
  if (!effective.ok()) return effective.error();
  enforcement.emplace(assets, contracts, *mappings, std::move(effective).take(),
                      vault);
  for (const auto& [signal, contract_id] : bindings)
    enforcement->bind_stream(signal, contract_id);
  enforcement->restore_quarantine(quarantine);
  enforcement->restore_notifications(notifications);
  enforcement->restore_store(store);
  enforcement->restore_catalog(products);
  enforcement->restore_observations(observations);
  if (!audit_text.empty()) {
    if (auto s = enforcement->audit_log().load(audit_text); !s.ok()) return s;
  }
  return {};
}

Result<std::string> Workspace::compose_policies_check(TimeMs now) const {
  auto effective = policy::compose_all(policies, now);
  if (!effective.ok()) return effective.error();
  return std::string("ok");
}

Status Workspace::save() {
  std::error_code ec;
  fs::create_directories(root_, ec);

  if (auto s = write_text_file(root_ / "fleet.json", assets.to_json().dump(2));
      !s.ok())
    return s;
  if (auto s = write_text_file(root_ / "contracts.json", contracts.to_json().dump(2));
      !s.ok())
    return s;
  if (mappings) {
    if (auto s = write_text_file(root_ / "mappings.json", mappings->to_json().dump(2));
        !s.ok())
      return s;
  }
  nlohmann::json jbindings = nlohmann::json::object();
  for (const auto& [signal, contract_id] : bindings) jbindings[signal] = contract_id;
  if (auto s = write_text_file(root_ / "bindings.json", jbindings.dump(2)); !s.ok())
    return s;

  // Canonical re-print; hand-written comments in policy sources do not
  // survive a save, the semantics do.
  for (const policy::PolicyAst& p : policies) {
    std::string name = p.policy_id + "-" + p.version.str() + ".policy";
    if (auto s = write_text_file(root_ / "policies" / name, print_policy(p));
        !s.ok())
      return s;
  }

  // The enforcement point, when constructed, owns the live copies.
  const auto& live_products = enforcement ? enforcement->catalog() : products;
  nlohmann::json jproducts = nlohmann::json::array();
  for (const auto& p : live_products) jproducts.push_back(p.to_json());
  if (auto s = write_text_file(root_ / "products.json", jproducts.dump(2)); !s.ok())
    return s;

  nlohmann::json jbudgets = nlohmann::json::array();
  for (const auto& [_, b] : budgets) jbudgets.push_back(b.to_json());
  if (auto s = write_text_file(root_ / "budgets.json", jbudgets.dump(2)); !s.ok())
    return s;

  const auto live_quarantine =
      enforcement ? enforcement->quarantine_list() : quarantine;
  nlohmann::json jq = nlohmann::json::array();
  for (const auto& item : live_quarantine) jq.push_back(item.to_json());
  if (auto s = write_text_file(root_ / "quarantine.json", jq.dump(2)); !s.ok())
    return s;

  const auto& live_notifications =
      enforcement ? enforcement->notifications() : notifications;
  nlohmann::json jn = nlohmann::json::array();
  for (const auto& n : live_notifications) {
    jn.push_back({{"at", n.at},
                  {"steward", n.steward},
                  {"subject", n.subject},
                  {"detail", n.detail}});
  }
  if (auto s = write_text_file(root_ / "notifications.json", jn.dump(2)); !s.ok())
    return s;

  const auto& live_store = enforcement ? enforcement->canonical_store() : store;
  for (const auto& [region, measurements] : live_store.payload_by_region) {
    std::ostringstream lines;
    for (const auto& m : measurements) lines << m.to_json().dump() << "\n";
    if (auto s = write_text_file(root_ / "canonical" / (region + ".jsonl"),
                                 lines.str());
        !s.ok())
      return s;
  }
  std::ostringstream catalog_lines;
  for (const auto& entry : live_store.catalog) catalog_lines << entry.dump() << "\n";
  if (auto s = write_text_file(root_ / "catalog.jsonl", catalog_lines.str()); !s.ok())
    return s;

  const auto& live_observations =
      enforcement ? enforcement->observations() : observations;
  std::ostringstream obs_lines;
  for (const auto& obs : live_observations) obs_lines << obs.to_json().dump() << "\n";
  if (auto s = write_text_file(root_ / "observations.jsonl", obs_lines.str());
      !s.ok())
    return s;

  std::string audit = enforcement ? enforcement->audit_log().serialize() : audit_text;
  if (auto s = write_text_file(root_ / "audit.jsonl", audit); !s.ok()) return s;

  if (!last_result.is_null()) {
    if (auto s = write_text_file(root_ / "result.json", last_result.dump(2)); !s.ok())
      return s;
  }
  return {};
}

}  // namespace iotgov::workspace
