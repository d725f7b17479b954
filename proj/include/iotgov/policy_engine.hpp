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
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "iotgov/policy.hpp"

namespace iotgov::policy {

// One access request: four attribute bags plus the requested action. env must
// carry "timestamp" (epoch ms integer or ISO string); asset attributes come
// from the asset registry's effective-attribute resolution.
struct AttributeRequest {
  AttrMap subject;
  AttrMap resource;
  AttrMap env;
  AttrMap asset;
  std::string action;

  const AttrMap* bag(const std::string& root) const;
  std::optional<TimeMs> timestamp() const;

  nlohmann::json to_json() const;
  static AttributeRequest from_json(const nlohmann::json& j);
};

enum class Outcome { Allow, Deny, Escalate };

std::string_view outcome_name(Outcome outcome);

// Tri-state predicate value; Unknown marks evaluation that touched a missing
// attribute and could not be decided without it.
enum class Tri { False, True, Unknown };

struct TraceStep {
  std::string rule_id;
  Layer layer = Layer::Enterprise;
  Category category = Category::Access;
  Effect effect = Effect::Permit;
  Tri value = Tri::False;
};

struct Decision {
  Outcome outcome = Outcome::Deny;
  std::vector<Obligation> obligations;  // on Allow: union over granting permits
  std::vector<std::string> reasons;     // rule ids / missing-attribute notes
  std::vector<TraceStep> trace;
};

// Composed, layer-ordered snapshot. Evaluation over it is pure; swap the
// snapshot atomically to reload policies.
struct EffectivePolicy {
  std::vector<PolicyAst> policies;  // enterprise first, then domain, then plant
};

// Selects the effective version per policy_id (greatest effective_date <= now,
// undated always eligible, version breaks ties) and rejects unresolvable
// same-layer conflicts: a Permit and a Forbid with structurally identical
// predicates in the same layer and category.
Result<EffectivePolicy> compose_layers(const std::vector<PolicyAst>& enterprise,
                                       const std::vector<PolicyAst>& domain,
                                       const std::vector<PolicyAst>& plant,
                                       TimeMs now);
Result<EffectivePolicy> compose_all(const std::vector<PolicyAst>& policies,
                                    TimeMs now);

// Deny-overrides evaluation with Escalate between Deny and Permit:
//   1. any matched Forbid, or a Forbid/Escalate undecidable for missing
//      attributes, denies (fail-closed);
//   2. otherwise a grant requires, within some category, a matched Enterprise
//      Permit and a matched Permit at every layer that defines Permits for
//      that category ("extend, not reduce");
//   3. a grant with any matched Escalate escalates instead of allowing;
//   4. nothing granted denies.
// Never throws on missing attributes; the decision carries the reason.
Decision evaluate_request(const EffectivePolicy& effective,
                          const AttributeRequest& request);

// --- Retention --------------------------------------------------------------

enum class RetentionKind { MustRetain, MayDelete, MustDelete };

struct RetentionDisposition {
  RetentionKind kind = RetentionKind::MayDelete;
  std::optional<TimeMs> delete_by;  // set for MustDelete
  std::vector<std::string> rule_ids;
};

// Applies matched retain rules to resource/asset attributes. The resource bag
// must carry "created_at". Overlapping rules compose conservatively: largest
// minimum, smallest maximum.
RetentionDisposition evaluate_retention(const EffectivePolicy& effective,
                                        const AttributeRequest& request,
                                        TimeMs now);

// --- Finite-domain analysis ---------------------------------------------------

// Finite value domains per attribute path, for lint and conflict detection.
// Inferred domains take every literal mentioned for a path (pooled across
// paths compared to each other) plus an out-of-pool sentinel; numeric paths
// get boundary and midpoint probes so every ordering outcome is exercised.
struct AttributeDomains {
  std::map<std::string, std::vector<Value>> by_path;

  static AttributeDomains infer(const std::vector<PolicyAst>& policies);

  std::size_t assignment_count() const;
};

struct LintViolation {
  std::string rule_id;
  std::string kind;  // permits-forbidden-request | relaxed-obligations
  std::string detail;
};

// Checks a domain/plant policy against the enterprise baseline: a Permit that
// admits a request some enterprise Forbid matches is a violation, as is a rule
// that mirrors an enterprise Permit's predicate with fewer obligations.
std::vector<LintViolation> lint_policy(const PolicyAst& policy,
                                       const std::vector<PolicyAst>& enterprise_baseline,
                                       std::size_t max_assignments = 200000);

struct PolicyConflict {
  Layer layer = Layer::Enterprise;
  Category category = Category::Access;
  std::string permit_rule;
  std::string forbid_rule;
  std::string assignment;  // witness request, rendered
};

// Exhaustive check over declared (or inferred) domains for same-layer
// same-category Permit/Forbid overlap.
Result<std::vector<PolicyConflict>> detect_conflicts(
    const std::vector<PolicyAst>& policies,
    const AttributeDomains* domains = nullptr,
    std::size_t max_assignments = 200000);

// Exposed for oracle-style tests: tri-state predicate evaluation.
Tri eval_predicate(const Expr& expr, const AttributeRequest& request,
                   std::vector<std::string>* missing_paths = nullptr);

}  // namespace iotgov::policy
