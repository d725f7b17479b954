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

#include <filesystem>
#include <memory>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "iotgov/boundary.hpp"
#include "iotgov/policy_engine.hpp"
#include "iotgov/privacy.hpp"
#include "iotgov/quality.hpp"
#include "iotgov/simulator.hpp"
#include "iotgov/workspace.hpp"

namespace {

using namespace iotgov;

constexpr int kOk = 0;
constexpr int kGovernanceRejection = 1;
constexpr int kUsage = 2;

struct Cli {
  std::string workspace_path = "workspace";
  std::string format = "text";
  std::optional<std::uint64_t> seed;

  bool records() const { return format == "records"; }
};

int fail(const Error& error) {
  std::cerr << "error: " << error.str() << "\n";
  switch (error.code) {
    case ErrorCode::UsageError:
    case ErrorCode::IoError:
    case ErrorCode::BadSpec:
      return kUsage;
    default:
      return kGovernanceRejection;
  }
}

TimeMs now_for(const workspace::Workspace& ws) {
  // Simulated epoch plus any elapsed scenario time recorded in the workspace;
  // the engine never reads wall clocks.
  TimeMs t = sim::scenario_epoch();
  if (ws.last_result.contains("clock_end"))
    t = ws.last_result.value("clock_end", t);
  return t;
}

void emit(const Cli& cli, const nlohmann::json& record, const std::string& text) {
  if (cli.records())
    std::cout << record.dump() << "\n";
  else
    std::cout << text;
}

Result<std::unique_ptr<workspace::Workspace>> open_workspace(const Cli& cli) {
  auto ws = std::make_unique<workspace::Workspace>(
      std::filesystem::path(cli.workspace_path));
  if (auto s = ws->load(); !s.ok()) return s.error();
  return ws;
}

// --- asset ------------------------------------------------------------------

int cmd_asset_register(const Cli& cli, const std::string& file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto doc = workspace::read_json_file(file);
  if (!doc.ok()) return fail(doc.error());
  // Accepts either a full fleet document or a single node object.
  if (doc->contains("nodes") || doc->contains("devices")) {
    if (auto s = ws.value()->assets.load_fleet(doc.value()); !s.ok())
      return fail(s.error());
  } else {
    auto node = asset::AssetNode::from_json(doc.value());
    if (!node.ok()) return fail(node.error());
    if (auto r = ws.value()->assets.register_node(node.value()); !r.ok())
      return fail(r.error());
  }
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, {{"registered", true}}, "registered\n");
  return kOk;
}

int cmd_asset_relocate(const Cli& cli, const std::string& id,
                       const std::string& new_parent) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto r = ws.value()->assets.relocate_node(id, new_parent);
  if (!r.ok()) return fail(r.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, r->to_json(), "relocated " + id + " under " + new_parent + "\n");
  return kOk;
}

int cmd_asset_lifecycle(const Cli& cli, const std::string& id, const std::string& to) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto target = asset::lifecycle_from_name(to);
  if (!target) return fail({ErrorCode::UsageError, "unknown lifecycle state " + to});
  auto r = ws.value()->assets.transition_lifecycle(id, *target);
  if (!r.ok()) return fail(r.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, r->to_json(), id + " -> " + to + "\n");
  return kOk;
}

// --- device -----------------------------------------------------------------

int cmd_device_register(const Cli& cli, const std::string& id,
                        const std::string& asset_ref, const std::string& credential) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  asset::DeviceIdentity device{id, asset_ref, credential,
                               asset::DeviceState::Active};
  auto r = ws.value()->assets.register_device(device);
  if (!r.ok()) return fail(r.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, device.to_json(), "registered device " + id + "\n");
  return kOk;
}

int cmd_device_revoke(const Cli& cli, const std::string& id) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  if (auto s = ws.value()->assets.revoke_device(id); !s.ok()) return fail(s.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, {{"device", id}, {"state", "Revoked"}}, "revoked " + id + "\n");
  return kOk;
}

// --- contract ---------------------------------------------------------------

int cmd_contract_register(const Cli& cli, const std::string& file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto doc = workspace::read_json_file(file);
  if (!doc.ok()) return fail(doc.error());
  auto contract = contract::DataContract::from_json(doc.value());
  if (!contract.ok()) return fail(contract.error());
  auto r = ws.value()->contracts.register_contract(contract.value(), ws.value()->baseline);
  if (!r.ok()) return fail(r.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli,
       {{"contract_id", contract->contract_id}, {"version", r.value().str()}},
       "registered " + contract->contract_id + "@" + r.value().str() + "\n");
  return kOk;
}

Result<schema::StructSchema> load_schema_of(const std::string& file) {
  auto doc = workspace::read_json_file(file);
  if (!doc.ok()) return doc.error();
  const nlohmann::json& j = doc->contains("schema") ? doc->at("schema") : doc.value();
  return schema::StructSchema::from_json(j);
}

int cmd_contract_diff(const Cli& cli, const std::string& old_file,
                      const std::string& new_file) {
  auto old_schema = load_schema_of(old_file);
  if (!old_schema.ok()) return fail(old_schema.error());
  auto new_schema = load_schema_of(new_file);
  if (!new_schema.ok()) return fail(new_schema.error());
  VersionBump bump = schema::classify_schema_change(old_schema.value(), new_schema.value());
  emit(cli, {{"required_bump", std::string(bump_name(bump))}},
       "required bump: " + std::string(bump_name(bump)) + "\n");
  return kOk;
}

int cmd_contract_check(const Cli& cli, const std::string& old_file,
                       const std::string& new_file, const std::string& mode_name) {
  auto old_schema = load_schema_of(old_file);
  if (!old_schema.ok()) return fail(old_schema.error());
  auto new_schema = load_schema_of(new_file);
  if (!new_schema.ok()) return fail(new_schema.error());
  auto mode = schema::compatibility_mode_from_name(mode_name);
  if (!mode) return fail({ErrorCode::UsageError, "unknown mode " + mode_name});
  auto report = schema::check_compatibility(old_schema.value(), new_schema.value(), *mode);
  nlohmann::json jv = nlohmann::json::array();
  std::string text = report.compatible ? "compatible\n" : "incompatible\n";
  for (const auto& v : report.violations) {
    jv.push_back({{"field", v.field}, {"kind", v.kind}, {"direction", v.direction}});
    text += "  " + v.direction + ": " + v.kind + " on " + v.field + "\n";
  }
  emit(cli, {{"compatible", report.compatible}, {"violations", jv}}, text);
  return report.compatible ? kOk : kGovernanceRejection;
}

int cmd_contract_state(const Cli& cli, const std::string& id,
                       const std::string& version_text, const std::string& to) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto version = SemVer::parse(version_text);
  if (!version) return fail({ErrorCode::UsageError, "bad version " + version_text});
  auto target = contract::contract_state_from_name(to);
  if (!target) return fail({ErrorCode::UsageError, "unknown state " + to});
  auto r = ws.value()->contracts.transition_state(id, *version, *target,
                                                 now_for(*ws.value()));
  if (!r.ok()) return fail(r.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, {{"contract_id", id}, {"state", to}}, id + " -> " + to + "\n");
  return kOk;
}

int cmd_contract_subscribe(const Cli& cli, const std::string& consumer,
                           const std::string& id, const std::string& version_text) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto version = SemVer::parse(version_text);
  if (!version) return fail({ErrorCode::UsageError, "bad version " + version_text});
  if (auto s = ws.value()->contracts.subscribe(consumer, id, *version); !s.ok())
    return fail(s.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, {{"consumer", consumer}, {"contract_id", id}}, "subscribed\n");
  return kOk;
}

int cmd_contract_impact(const Cli& cli, const std::string& id) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto impact = ws.value()->contracts.impact_analysis(id);
  if (!impact.ok()) return fail(impact.error());
  nlohmann::json ja = nlohmann::json::array();
  std::string text;
  for (const auto& e : impact.value()) {
    ja.push_back({{"consumer", e.consumer},
                  {"version", e.version.str()},
                  {"deprecated", e.deprecated}});
    text += e.consumer + " on " + e.version.str() +
            (e.deprecated ? " (deprecated)" : "") + "\n";
  }
  if (text.empty()) text = "no subscribers\n";
  emit(cli, {{"contract_id", id}, {"consumers", ja}}, text);
  return kOk;
}

// --- policy ------------------------------------------------------------------

int cmd_policy_lint(const Cli& cli, const std::string& file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto text = workspace::read_text_file(file);
  if (!text.ok()) return fail(text.error());
  auto ast = policy::parse_policy(text.value());
  if (!ast.ok()) return fail(ast.error());

  std::vector<policy::PolicyAst> baseline;
  for (const auto& p : ws.value()->policies) {
    if (p.layer == policy::Layer::Enterprise) baseline.push_back(p);
  }
  auto violations = policy::lint_policy(ast.value(), baseline);
  nlohmann::json jv = nlohmann::json::array();
  std::string out;
  for (const auto& v : violations) {
    jv.push_back({{"rule", v.rule_id}, {"kind", v.kind}, {"detail", v.detail}});
    out += v.rule_id + ": " + v.kind + " (" + v.detail + ")\n";
  }
  if (out.empty()) out = "clean\n";
  emit(cli, {{"violations", jv}}, out);
  return violations.empty() ? kOk : kGovernanceRejection;
}

int cmd_policy_eval(const Cli& cli, const std::string& request_file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto doc = workspace::read_json_file(request_file);
  if (!doc.ok()) return fail(doc.error());
  auto request = policy::AttributeRequest::from_json(doc.value());
  auto effective = policy::compose_all(ws.value()->policies, now_for(*ws.value()));
  if (!effective.ok()) return fail(effective.error());
  policy::Decision decision = policy::evaluate_request(effective.value(), request);

  nlohmann::json jr = nlohmann::json::array();
  for (const auto& r : decision.reasons) jr.push_back(r);
  std::string text = std::string(policy::outcome_name(decision.outcome)) + "\n";
  for (const auto& r : decision.reasons) text += "  " + r + "\n";
  emit(cli, {{"outcome", std::string(policy::outcome_name(decision.outcome))},
             {"reasons", jr}},
       text);
  return decision.outcome == policy::Outcome::Allow ? kOk : kGovernanceRejection;
}

int cmd_policy_conflicts(const Cli& cli) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto conflicts = policy::detect_conflicts(ws.value()->policies);
  if (!conflicts.ok()) return fail(conflicts.error());
  nlohmann::json jc = nlohmann::json::array();
  std::string text;
  for (const auto& c : conflicts.value()) {
    jc.push_back({{"permit", c.permit_rule},
                  {"forbid", c.forbid_rule},
                  {"assignment", c.assignment}});
    text += c.permit_rule + " vs " + c.forbid_rule + " at {" + c.assignment + "}\n";
  }
  if (text.empty()) text = "no conflicts\n";
  emit(cli, {{"conflicts", jc}}, text);
  return conflicts->empty() ? kOk : kGovernanceRejection;
}

// --- mapping / ingest ----------------------------------------------------------

int cmd_mapping_load(const Cli& cli, const std::string& file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto doc = workspace::read_json_file(file);
  if (!doc.ok()) return fail(doc.error());
  auto set = canonical::load_mapping_set(doc.value(), ws.value()->baseline);
  if (!set.ok()) return fail(set.error());
  ws.value()->mappings = std::move(set).take();
  // Stream-to-contract bindings ride along in the mapping document; they are
  // version-controlled with the mappings they describe.
  if (doc->contains("bindings")) {
    for (auto it = doc->at("bindings").begin(); it != doc->at("bindings").end(); ++it)
      ws.value()->bindings[it.key()] = it.value().get<std::string>();
  }
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, {{"mappings", ws.value()->mappings->by_signal.size()}},
       "loaded " + std::to_string(ws.value()->mappings->by_signal.size()) +
           " mappings\n");
  return kOk;
}

int cmd_ingest_run(const Cli& cli, const std::string& file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  TimeMs now = now_for(*ws.value());
  if (auto s = ws.value()->make_enforcement(now); !s.ok()) return fail(s.error());
  auto text = workspace::read_text_file(file);
  if (!text.ok()) return fail(text.error());

  std::istringstream in(text.value());
  std::string line;
  std::size_t accepted = 0, total = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) return fail({ErrorCode::IoError, "bad message line"});
    auto msg = boundary::TelemetryMessage::from_json(j);
    auto result = ws.value()->enforcement->ingest(msg, now);
    ++total;
    if (result.acked) ++accepted;
    if (cli.records()) std::cout << result.report.to_json().dump() << "\n";
    now += 1;
  }
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  if (!cli.records())
    std::cout << accepted << "/" << total << " messages accepted\n";
  return kOk;
}

// --- product / access / export ---------------------------------------------------

int cmd_product_publish(const Cli& cli, const std::string& file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  TimeMs now = now_for(*ws.value());
  if (auto s = ws.value()->make_enforcement(now); !s.ok()) return fail(s.error());
  auto doc = workspace::read_json_file(file);
  if (!doc.ok()) return fail(doc.error());
  auto product = boundary::ProductDefinition::from_json(doc.value());
  if (!product.ok()) return fail(product.error());
  auto result = ws.value()->enforcement->publish_product(product.value(), now);
  if (!result.ok()) {
    int code = fail(result.error());
    (void)ws.value()->save();
    return code;
  }
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, {{"registered", true}, {"product", product->product_id}},
       "published " + product->product_id + "@" + product->version.str() + "\n");
  return kOk;
}

int cmd_access_eval(const Cli& cli, const std::string& request_file,
                    const std::string& records_file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  TimeMs now = now_for(*ws.value());
  if (auto s = ws.value()->make_enforcement(now); !s.ok()) return fail(s.error());
  auto doc = workspace::read_json_file(request_file);
  if (!doc.ok()) return fail(doc.error());
  auto request = policy::AttributeRequest::from_json(doc.value());

  nlohmann::json records = nlohmann::json::array();
  if (!records_file.empty()) {
    auto r = workspace::read_json_file(records_file);
    if (!r.ok()) return fail(r.error());
    records = r.value();
  }
  auto result = ws.value()->enforcement->authorize_access(request, records, now);
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  std::string outcome(policy::outcome_name(result.decision.outcome));
  emit(cli, {{"outcome", outcome}, {"payload", result.payload}}, outcome + "\n");
  return result.decision.outcome == policy::Outcome::Allow ? kOk
                                                           : kGovernanceRejection;
}

int cmd_export_run(const Cli& cli, const std::string& product,
                   const std::string& party, const std::string& purpose,
                   const std::string& destination) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  TimeMs now = now_for(*ws.value());
  if (auto s = ws.value()->make_enforcement(now); !s.ok()) return fail(s.error());
  auto result =
      ws.value()->enforcement->export_external(product, party, purpose, destination, now);
  if (!result.ok()) {
    int code = fail(result.error());
    (void)ws.value()->save();
    return code;
  }
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli,
       {{"destination", result->destination_region},
        {"records", result->records.size()}},
       "exported " + std::to_string(result->records.size()) + " records to " +
           result->destination_region + "\n");
  return kOk;
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate_run(const Cli& cli, const std::string& scenario_file) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  auto doc = workspace::read_json_file(scenario_file);
  if (!doc.ok()) return fail(doc.error());
  auto scenario = sim::Scenario::from_json(doc.value());
  if (!scenario.ok()) return fail(scenario.error());
  if (cli.seed) scenario.value().seed = *cli.seed;

  sim::ScenarioContext ctx;
  auto result = sim::run_scenario(scenario.value(), ctx);
  if (!result.ok()) return fail(result.error());

  // Persist the run so reports and quarantine management can see it.
  workspace::Workspace fresh{ws.value()->root()};
  fresh.last_result = result->to_json();
  fresh.last_result["clock_end"] = sim::scenario_epoch() + scenario->duration_ms;
  fresh.bindings = ctx.fleet.bindings;
  const auto policy_texts = scenario->policy_texts.empty()
                                ? sim::default_policy_texts()
                                : scenario->policy_texts;
  for (const std::string& text : policy_texts) {
    auto ast = policy::parse_policy(text);
    if (ast.ok()) fresh.policies.push_back(std::move(ast).take());
  }
  auto mapping_set =
      canonical::load_mapping_set(ctx.fleet.mapping_document, fresh.baseline);
  if (mapping_set.ok()) fresh.mappings = std::move(mapping_set).take();
  if (auto s = fresh.assets.load_fleet(ctx.assets.to_json()); !s.ok())
    return fail(s.error());
  if (auto s = fresh.contracts.load(ctx.contracts.to_json(), fresh.baseline);
      !s.ok())
    return fail(s.error());
  if (ctx.enforcement) {
    fresh.quarantine = ctx.enforcement->quarantine_list();
    fresh.notifications = ctx.enforcement->notifications();
    fresh.store = ctx.enforcement->canonical_store();
    fresh.observations = ctx.enforcement->observations();
    fresh.audit_text = ctx.enforcement->audit_log().serialize();
  }
  if (auto s = fresh.save(); !s.ok()) return fail(s.error());

  emit(cli, result->to_json(), result->summary());
  return kOk;
}

// --- reports ------------------------------------------------------------------

int cmd_quality_report(const Cli& cli) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  const auto& result = ws.value()->last_result;
  if (result.is_null() || !result.contains("window_scores")) {
    std::cerr << "no scenario results in workspace\n";
    return kUsage;
  }
  if (cli.records()) {
    for (const auto& score : result.at("window_scores"))
      std::cout << score.dump() << "\n";
    return kOk;
  }
  std::cout << "quality report (" << result.at("window_scores").size()
            << " windows)\n";
  for (const auto& score : result.at("window_scores")) {
    std::cout << "  " << score.value("stream", std::string{}) << " ["
              << score.value("window_start", 0LL) << ", "
              << score.value("window_end", 0LL) << "): composite "
              << score.value("composite", 0.0) << " (completeness "
              << score.value("completeness", 0.0) << ", accuracy "
              << score.value("accuracy", 0.0) << " ["
              << score.value("accuracy_basis", std::string{}) << "], freshness "
              << score.value("freshness", 0.0) << ", consistency "
              << score.value("consistency", 0.0) << ", validity "
              << score.value("validity", 0.0) << ")\n";
  }
  return kOk;
}

int cmd_governance_report(const Cli& cli) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  const auto& result = ws.value()->last_result;
  if (result.is_null() || !result.contains("report")) {
    std::cerr << "no scenario results in workspace\n";
    return kUsage;
  }
  const auto& report = result.at("report");
  if (cli.records()) {
    std::cout << report.dump() << "\n";
    return kOk;
  }
  std::cout << "governance report\n";
  if (report.contains("mttd_ms"))
    std::cout << "  MTTD: " << report.value("mttd_ms", 0.0) / 1000.0 << " s\n";
  if (report.contains("mttr_ms"))
    std::cout << "  MTTR: " << report.value("mttr_ms", 0.0) / 1000.0 << " s\n";
  std::cout << "  SLA adherence: " << report.value("sla_adherence", 1.0) << "\n";
  std::cout << "  contract coverage: " << report.value("contract_coverage", 1.0)
            << "\n";
  if (report.contains("decision_counts")) {
    std::cout << "  decisions:";
    for (auto it = report.at("decision_counts").begin();
         it != report.at("decision_counts").end(); ++it)
      std::cout << " " << it.key() << "=" << it.value().get<std::size_t>();
    std::cout << "\n";
  }
  if (report.contains("validation_by_severity")) {
    std::cout << "  validation failures:";
    for (auto it = report.at("validation_by_severity").begin();
         it != report.at("validation_by_severity").end(); ++it)
      std::cout << " " << it.key() << "=" << it.value().get<std::size_t>();
    std::cout << "\n";
  }
  return kOk;
}

// --- quarantine / audit ---------------------------------------------------------

int cmd_quarantine_list(const Cli& cli) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  nlohmann::json ja = nlohmann::json::array();
  std::string text;
  for (const auto& item : ws.value()->quarantine) {
    ja.push_back(item.to_json());
    text += std::to_string(item.id) + ": " + item.message.signal + " (" +
            item.status + ")\n";
  }
  if (text.empty()) text = "quarantine empty\n";
  emit(cli, {{"items", ja}}, text);
  return kOk;
}

int cmd_quarantine_requeue(const Cli& cli, std::uint64_t id) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  TimeMs now = now_for(*ws.value());
  if (auto s = ws.value()->make_enforcement(now); !s.ok()) return fail(s.error());
  auto result = ws.value()->enforcement->quarantine_requeue(id, now);
  if (!result.ok()) return fail(result.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  std::string disposition(boundary::disposition_name(result->disposition));
  emit(cli, {{"id", id}, {"disposition", disposition}},
       "requeued " + std::to_string(id) + " -> " + disposition + "\n");
  return result->acked ? kOk : kGovernanceRejection;
}

int cmd_quarantine_resolve(const Cli& cli, std::uint64_t id, const std::string& note) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  TimeMs now = now_for(*ws.value());
  if (auto s = ws.value()->make_enforcement(now); !s.ok()) return fail(s.error());
  auto result = ws.value()->enforcement->quarantine_resolve(id, note, now);
  if (!result.ok()) return fail(result.error());
  if (auto s = ws.value()->save(); !s.ok()) return fail(s.error());
  emit(cli, result->to_json(), "resolved " + std::to_string(id) + "\n");
  return kOk;
}

int cmd_audit_verify(const Cli& cli) {
  auto ws = open_workspace(cli);
  if (!ws.ok()) return fail(ws.error());
  audit::AuditLog log;
  if (!ws.value()->audit_text.empty()) {
    if (auto s = log.load(ws.value()->audit_text); !s.ok()) return fail(s.error());
  }
  auto verification = log.verify();
  if (verification.valid) {
    emit(cli, {{"valid", true}, {"records", log.size()}},
         "audit chain valid (" + std::to_string(log.size()) + " records)\n");
    return kOk;
  }
  emit(cli,
       {{"valid", false}, {"first_bad_index", *verification.first_bad_index}},
       "audit chain BROKEN at record " +
           std::to_string(*verification.first_bad_index) + "\n");
  return kGovernanceRejection;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"federated IoT data-governance engine"};
  app.require_subcommand(1);
  Cli cli;
  app.add_option("--workspace", cli.workspace_path, "workspace directory");
  app.add_option("--format", cli.format, "output format: text|records")
      ->check(CLI::IsMember({"text", "records"}));
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "override scenario seed");

  std::string arg_file, arg_id, arg_parent, arg_to, arg_old, arg_new, arg_mode;
  std::string arg_version, arg_consumer, arg_note, arg_credential, arg_asset;
  std::string arg_request, arg_records, arg_party, arg_purpose, arg_destination;
  std::uint64_t arg_qid = 0;

  auto* asset_cmd = app.add_subcommand("asset", "asset registry operations");
  asset_cmd->require_subcommand(1);
  auto* asset_register = asset_cmd->add_subcommand("register", "register nodes");
  asset_register->add_option("--file", arg_file, "fleet or node JSON")->required();
  auto* asset_relocate = asset_cmd->add_subcommand("relocate", "move a node");
  asset_relocate->add_option("--id", arg_id)->required();
  asset_relocate->add_option("--new-parent", arg_parent)->required();
  auto* asset_lifecycle = asset_cmd->add_subcommand("lifecycle", "transition state");
  asset_lifecycle->add_option("--id", arg_id)->required();
  asset_lifecycle->add_option("--to", arg_to)->required();

  auto* device_cmd = app.add_subcommand("device", "device identity operations");
  device_cmd->require_subcommand(1);
  auto* device_register = device_cmd->add_subcommand("register", "register device");
  device_register->add_option("--id", arg_id)->required();
  device_register->add_option("--asset", arg_asset)->required();
  device_register->add_option("--credential", arg_credential)->required();
  auto* device_revoke = device_cmd->add_subcommand("revoke", "revoke device");
  device_revoke->add_option("--id", arg_id)->required();

  auto* contract_cmd = app.add_subcommand("contract", "contract registry operations");
  contract_cmd->require_subcommand(1);
  auto* contract_register = contract_cmd->add_subcommand("register", "register contract");
  contract_register->add_option("--file", arg_file)->required();
  auto* contract_diff = contract_cmd->add_subcommand("diff", "classify schema change");
  contract_diff->add_option("--old", arg_old)->required();
  contract_diff->add_option("--new", arg_new)->required();
  auto* contract_check = contract_cmd->add_subcommand("check", "compatibility check");
  contract_check->add_option("--old", arg_old)->required();
  contract_check->add_option("--new", arg_new)->required();
  contract_check->add_option("--mode", arg_mode)->required();
  auto* contract_state = contract_cmd->add_subcommand("state", "lifecycle transition");
  contract_state->add_option("--id", arg_id)->required();
  contract_state->add_option("--version", arg_version)->required();
  contract_state->add_option("--to", arg_to)->required();
  auto* contract_subscribe = contract_cmd->add_subcommand("subscribe", "track consumer");
  contract_subscribe->add_option("--consumer", arg_consumer)->required();
  contract_subscribe->add_option("--id", arg_id)->required();
  contract_subscribe->add_option("--version", arg_version)->required();
  auto* contract_impact = contract_cmd->add_subcommand("impact", "consumer impact");
  contract_impact->add_option("--id", arg_id)->required();

  auto* policy_cmd = app.add_subcommand("policy", "policy engine operations");
  policy_cmd->require_subcommand(1);
  auto* policy_lint = policy_cmd->add_subcommand("lint", "lint against baseline");
  policy_lint->add_option("--file", arg_file)->required();
  auto* policy_eval = policy_cmd->add_subcommand("eval", "evaluate a request");
  policy_eval->add_option("--request", arg_request)->required();
  auto* policy_conflicts = policy_cmd->add_subcommand("conflicts", "detect conflicts");

  auto* mapping_cmd = app.add_subcommand("mapping", "canonical mapping operations");
  mapping_cmd->require_subcommand(1);
  auto* mapping_load = mapping_cmd->add_subcommand("load", "load mapping set");
  mapping_load->add_option("--file", arg_file)->required();

  auto* ingest_cmd = app.add_subcommand("ingest", "ingestion boundary");
  ingest_cmd->require_subcommand(1);
  auto* ingest_run = ingest_cmd->add_subcommand("run", "ingest a message file");
  ingest_run->add_option("--file", arg_file)->required();

  auto* product_cmd = app.add_subcommand("product", "data product operations");
  product_cmd->require_subcommand(1);
  auto* product_publish = product_cmd->add_subcommand("publish", "publish product");
  product_publish->add_option("--file", arg_file)->required();

  auto* access_cmd = app.add_subcommand("access", "access boundary");
  access_cmd->require_subcommand(1);
  auto* access_eval = access_cmd->add_subcommand("eval", "authorize a request");
  access_eval->add_option("--request", arg_request)->required();
  access_eval->add_option("--records", arg_records);

  auto* export_cmd = app.add_subcommand("export", "external sharing boundary");
  export_cmd->require_subcommand(1);
  auto* export_run = export_cmd->add_subcommand("run", "export a product");
  export_run->add_option("--product", arg_id)->required();
  export_run->add_option("--party", arg_party)->required();
  export_run->add_option("--purpose", arg_purpose);
  export_run->add_option("--destination", arg_destination)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "scenario execution");
  simulate_cmd->require_subcommand(1);
  auto* simulate_run = simulate_cmd->add_subcommand("run", "run a scenario");
  simulate_run->add_option("scenario", arg_file, "scenario JSON file")->required();

  auto* quality_cmd = app.add_subcommand("quality", "quality monitoring");
  quality_cmd->require_subcommand(1);
  auto* quality_report = quality_cmd->add_subcommand("report", "window scores");

  auto* governance_cmd = app.add_subcommand("governance", "governance reporting");
  governance_cmd->require_subcommand(1);
  auto* governance_report = governance_cmd->add_subcommand("report", "KPI report");

  auto* quarantine_cmd = app.add_subcommand("quarantine", "quarantine management");
  quarantine_cmd->require_subcommand(1);
  auto* quarantine_list = quarantine_cmd->add_subcommand("list", "list items");
  auto* quarantine_requeue = quarantine_cmd->add_subcommand("requeue", "re-run item");
  quarantine_requeue->add_option("--id", arg_qid)->required();
  auto* quarantine_resolve = quarantine_cmd->add_subcommand("resolve", "close item");
  quarantine_resolve->add_option("--id", arg_qid)->required();
  quarantine_resolve->add_option("--note", arg_note)->required();

  auto* audit_cmd = app.add_subcommand("audit", "audit log");
  audit_cmd->require_subcommand(1);
  auto* audit_verify = audit_cmd->add_subcommand("verify", "verify hash chain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (seed_opt->count() > 0) cli.seed = seed_value;

  try {
    if (asset_register->parsed()) return cmd_asset_register(cli, arg_file);
    if (asset_relocate->parsed()) return cmd_asset_relocate(cli, arg_id, arg_parent);
    if (asset_lifecycle->parsed()) return cmd_asset_lifecycle(cli, arg_id, arg_to);
    if (device_register->parsed())
      return cmd_device_register(cli, arg_id, arg_asset, arg_credential);
    if (device_revoke->parsed()) return cmd_device_revoke(cli, arg_id);
    if (contract_register->parsed()) return cmd_contract_register(cli, arg_file);
    if (contract_diff->parsed()) return cmd_contract_diff(cli, arg_old, arg_new);
    if (contract_check->parsed())
      return cmd_contract_check(cli, arg_old, arg_new, arg_mode);
    if (contract_state->parsed())
      return cmd_contract_state(cli, arg_id, arg_version, arg_to);
    if (contract_subscribe->parsed())
      return cmd_contract_subscribe(cli, arg_consumer, arg_id, arg_version);
    if (contract_impact->parsed()) return cmd_contract_impact(cli, arg_id);
    if (policy_lint->parsed()) return cmd_policy_lint(cli, arg_file);
    if (policy_eval->parsed()) return cmd_policy_eval(cli, arg_request);
    if (policy_conflicts->parsed()) return cmd_policy_conflicts(cli);
    if (mapping_load->parsed()) return cmd_mapping_load(cli, arg_file);
    if (ingest_run->parsed()) return cmd_ingest_run(cli, arg_file);
    if (product_publish->parsed()) return cmd_product_publish(cli, arg_file);
    if (access_eval->parsed()) return cmd_access_eval(cli, arg_request, arg_records);
    if (export_run->parsed())
      return cmd_export_run(cli, arg_id, arg_party, arg_purpose, arg_destination);
    if (simulate_run->parsed()) return cmd_simulate_run(cli, arg_file);
    if (quality_report->parsed()) return cmd_quality_report(cli);
    if (governance_report->parsed()) return cmd_governance_report(cli);
    if (quarantine_list->parsed()) return cmd_quarantine_list(cli);
    if (quarantine_requeue->parsed()) return cmd_quarantine_requeue(cli, arg_qid);
    if (quarantine_resolve->parsed())
      return cmd_quarantine_resolve(cli, arg_qid, arg_note);
    if (audit_verify->parsed()) return cmd_audit_verify(cli);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kUsage;
  }
  std::cerr << app.help();
  return kUsage;
}
