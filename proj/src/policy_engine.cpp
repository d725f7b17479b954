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

#include "iotgov/policy_engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace iotgov::policy {

namespace {

Tri tri_not(Tri t) {
  if (t == Tri::True) return Tri::False;
  if (t == Tri::False) return Tri::True;
  return Tri::Unknown;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::False;
}

std::optional<Value> lookup(const AttributeRequest& request, const Path& path,
                            std::vector<std::string>* missing) {
  const AttrMap* bag = request.bag(path.root);
  if (bag) {
    auto it = bag->find(path.key());
    if (it != bag->end()) return it->second;
  }
  if (missing) missing->push_back(path.str());
  return std::nullopt;
}

Tri compare(const Value& lhs, CmpOp op, const Value& rhs) {
  switch (op) {
    case CmpOp::Eq: return lhs.equals(rhs) ? Tri::True : Tri::False;
    case CmpOp::Ne: return lhs.equals(rhs) ? Tri::False : Tri::True;
    case CmpOp::Lt: return lhs.less(rhs) ? Tri::True : Tri::False;
    case CmpOp::Le:
      return (lhs.less(rhs) || lhs.equals(rhs)) ? Tri::True : Tri::False;
    case CmpOp::Gt: return rhs.less(lhs) ? Tri::True : Tri::False;
    case CmpOp::Ge:
      return (rhs.less(lhs) || lhs.equals(rhs)) ? Tri::True : Tri::False;
  }
  return Tri::False;
}

std::optional<TimeMs> value_as_time(const Value& v) {
  if (v.is_int() || v.is_double()) return static_cast<TimeMs>(v.as_number());
  if (v.is_string()) return parse_iso8601(v.as_string());
  return std::nullopt;
}

struct RuleRef {
  const PolicyAst* policy;
  const Rule* rule;
};

std::vector<RuleRef> all_rules(const EffectivePolicy& effective) {
  std::vector<RuleRef> out;
  for (const PolicyAst& p : effective.policies) {
    for (const Rule& r : p.rules) out.push_back({&p, &r});
  }
  return out;
}

// Effective-version selection: newest effective_date <= now wins; an undated
// policy acts as effective since forever; version breaks ties.
std::vector<PolicyAst> select_effective(const std::vector<PolicyAst>& input,
                                        TimeMs now) {
  std::map<std::string, const PolicyAst*> chosen;
  for (const PolicyAst& p : input) {
    if (p.effective_date && *p.effective_date > now) continue;
    auto [it, inserted] = chosen.emplace(p.policy_id, &p);
    if (inserted) continue;
    const PolicyAst* cur = it->second;
    TimeMs cur_date = cur->effective_date.value_or(std::numeric_limits<TimeMs>::min());
    TimeMs new_date = p.effective_date.value_or(std::numeric_limits<TimeMs>::min());
    if (new_date > cur_date ||
        (new_date == cur_date && cur->version < p.version)) {
      it->second = &p;
    }
  }
  std::vector<PolicyAst> out;
  out.reserve(chosen.size());
  for (const auto& [_, p] : chosen) out.push_back(*p);
  return out;
}

Status check_unresolvable(const std::vector<PolicyAst>& layer_policies) {
  // Same layer, same category, structurally identical predicate, Permit vs
  // Forbid: no combining order can honor both authors' intent.
  for (std::size_t i = 0; i < layer_policies.size(); ++i) {
    for (const Rule& a : layer_policies[i].rules) {
      for (std::size_t j = i; j < layer_policies.size(); ++j) {
        if (layer_policies[i].category != layer_policies[j].category) continue;
        for (const Rule& b : layer_policies[j].rules) {
          if (&a == &b) continue;
          bool permit_vs_forbid =
              (a.effect == Effect::Permit && b.effect == Effect::Forbid) ||
              (a.effect == Effect::Forbid && b.effect == Effect::Permit);
          if (!permit_vs_forbid) continue;
          if (is_retention_rule(a) || is_retention_rule(b)) continue;
          if (expr_equal(*a.predicate, *b.predicate)) {
            return Error{ErrorCode::ConflictUnresolvable,
                         a.id + " and " + b.id +
                             " permit/forbid the same predicate"};
          }
        }
      }
    }
  }
  return {};
}

std::string render_assignment(const AttributeRequest& request) {
  std::string out;
  auto add = [&](const char* root, const AttrMap& bag) {
    for (const auto& [k, v] : bag) {
      if (!out.empty()) out += ", ";
      out += std::string(root) + "." + k + "=" + v.str();
    }
  };
  add("subject", request.subject);
  add("resource", request.resource);
  add("env", request.env);
  add("asset", request.asset);
  return out;
}

}  // namespace

const AttrMap* AttributeRequest::bag(const std::string& root) const {
  if (root == "subject") return &subject;
  if (root == "resource") return &resource;
  if (root == "env") return &env;
  if (root == "asset") return &asset;
  return nullptr;
}

std::optional<TimeMs> AttributeRequest::timestamp() const {
  auto it = env.find("timestamp");
  if (it == env.end()) return std::nullopt;
  return value_as_time(it->second);
}

nlohmann::json AttributeRequest::to_json() const {
  return {{"subject", attr_map_to_json(subject)},
          {"resource", attr_map_to_json(resource)},
          {"env", attr_map_to_json(env)},
          {"asset", attr_map_to_json(asset)},
          {"action", action}};
}

AttributeRequest AttributeRequest::from_json(const nlohmann::json& j) {
  AttributeRequest r;
  if (j.contains("subject")) r.subject = attr_map_from_json(j.at("subject"));
  if (j.contains("resource")) r.resource = attr_map_from_json(j.at("resource"));
  if (j.contains("env")) r.env = attr_map_from_json(j.at("env"));
  if (j.contains("asset")) r.asset = attr_map_from_json(j.at("asset"));
  r.action = j.value("action", std::string{});
  return r;
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Allow: return "Allow";
    case Outcome::Deny: return "Deny";
    case Outcome::Escalate: return "Escalate";
  }
  return "Deny";
}

Tri eval_predicate(const Expr& expr, const AttributeRequest& request,
                   std::vector<std::string>* missing) {
  if (const auto* cmp = std::get_if<CmpPred>(&expr.node)) {
    auto lhs = lookup(request, cmp->path, missing);
    if (!lhs) return Tri::Unknown;
    if (const auto* rhs_path = std::get_if<Path>(&cmp->rhs)) {
      auto rhs = lookup(request, *rhs_path, missing);
      if (!rhs) return Tri::Unknown;
      return compare(*lhs, cmp->op, *rhs);
    }
    return compare(*lhs, cmp->op, std::get<Value>(cmp->rhs));
  }
  if (const auto* in = std::get_if<InPred>(&expr.node)) {
    auto lhs = lookup(request, in->path, missing);
    if (!lhs) return Tri::Unknown;
    for (const Value& v : in->values) {
      if (lhs->equals(v)) return Tri::True;
    }
    return Tri::False;
  }
  if (const auto* age = std::get_if<AgePred>(&expr.node)) {
    auto now = request.timestamp();
    auto created_it = request.resource.find("created_at");
    if (!now || created_it == request.resource.end()) {
      if (missing) missing->push_back(now ? "resource.created_at" : "env.timestamp");
      return Tri::Unknown;
    }
    auto created = value_as_time(created_it->second);
    if (!created) {
      if (missing) missing->push_back("resource.created_at");
      return Tri::Unknown;
    }
    TimeMs age_ms = *now - *created;
    return compare(Value(static_cast<std::int64_t>(age_ms)), age->op,
                   Value(static_cast<std::int64_t>(age->duration_ms)));
  }
  if (const auto* neg = std::get_if<NotPred>(&expr.node)) {
    return tri_not(eval_predicate(*neg->inner, request, missing));
  }
  if (const auto* conj = std::get_if<AndExpr>(&expr.node)) {
    Tri acc = Tri::True;
    for (const ExprPtr& term : conj->terms)
      acc = tri_and(acc, eval_predicate(*term, request, missing));
    return acc;
  }
  const auto& disj = std::get<OrExpr>(expr.node);
  Tri acc = Tri::False;
  for (const ExprPtr& term : disj.terms)
    acc = tri_or(acc, eval_predicate(*term, request, missing));
  return acc;
}

Result<EffectivePolicy> compose_layers(const std::vector<PolicyAst>& enterprise,
                                       const std::vector<PolicyAst>& domain,
                                       const std::vector<PolicyAst>& plant,
                                       TimeMs now) {
  EffectivePolicy out;
  for (const auto* input : {&enterprise, &domain, &plant}) {
    auto selected = select_effective(*input, now);
    if (auto s = check_unresolvable(selected); !s.ok()) return s.error();
    out.policies.insert(out.policies.end(), selected.begin(), selected.end());
  }
  return out;
}

Result<EffectivePolicy> compose_all(const std::vector<PolicyAst>& policies,
                                    TimeMs now) {
  std::vector<PolicyAst> enterprise, domain, plant;
  for (const PolicyAst& p : policies) {
    if (p.layer == Layer::Enterprise) enterprise.push_back(p);
    if (p.layer == Layer::Domain) domain.push_back(p);
    if (p.layer == Layer::Plant) plant.push_back(p);
  }
  return compose_layers(enterprise, domain, plant, now);
}

Decision evaluate_request(const EffectivePolicy& effective,
                          const AttributeRequest& request) {
  Decision decision;

  struct CategoryState {
    bool permit_rules_by_layer[3] = {false, false, false};
    bool matched_permit_by_layer[3] = {false, false, false};
    std::vector<const Rule*> matched_permits;
    std::vector<std::string> matched_forbids;
    std::vector<std::string> matched_escalates;
    std::vector<std::string> undecided_blockers;  // Forbid/Escalate at Unknown
  };
  std::map<Category, CategoryState> categories;
  std::set<std::string> missing_set;

  for (const PolicyAst& policy : effective.policies) {
    auto& cat = categories[policy.category];
    int layer_ix = static_cast<int>(policy.layer);
    for (const Rule& rule : policy.rules) {
      std::vector<std::string> missing;
      Tri value = eval_predicate(*rule.predicate, request, &missing);
      decision.trace.push_back(
          {rule.id, policy.layer, policy.category, rule.effect, value});
      if (value == Tri::Unknown)
        missing_set.insert(missing.begin(), missing.end());

      if (rule.effect == Effect::Permit) {
        if (is_retention_rule(rule)) continue;  // disposition, not a grant
        cat.permit_rules_by_layer[layer_ix] = true;
        if (value == Tri::True) {
          cat.matched_permit_by_layer[layer_ix] = true;
          cat.matched_permits.push_back(&rule);
        }
      } else if (rule.effect == Effect::Forbid) {
        if (value == Tri::True) cat.matched_forbids.push_back(rule.id);
        if (value == Tri::Unknown) cat.undecided_blockers.push_back(rule.id);
      } else {
        if (value == Tri::True) cat.matched_escalates.push_back(rule.id);
        if (value == Tri::Unknown) cat.undecided_blockers.push_back(rule.id);
      }
    }
  }

  // 1. Deny overrides: any matched Forbid.
  for (const auto& [_, cat] : categories) {
    for (const std::string& id : cat.matched_forbids)
      decision.reasons.push_back(id);
  }
  if (!decision.reasons.empty()) {
    decision.outcome = Outcome::Deny;
    return decision;
  }

  // 2. Fail closed on blockers that could not be decided.
  bool undecided = false;
  for (const auto& [_, cat] : categories) {
    for (const std::string& id : cat.undecided_blockers) {
      undecided = true;
      decision.reasons.push_back(id);
    }
  }
  if (undecided) {
    for (const std::string& path : missing_set)
      decision.reasons.push_back("missing-attribute:" + path);
    decision.outcome = Outcome::Deny;
    return decision;
  }

  // 3. Grants: a category grants when its Enterprise layer has a matched
  // Permit and every layer that defines Permits for it matched one too.
  bool granted = false;
  bool escalated = false;
  constexpr int kEnterprise = static_cast<int>(Layer::Enterprise);
  for (const auto& [_, cat] : categories) {
    if (!cat.matched_permit_by_layer[kEnterprise]) continue;
    bool all_layers = true;
    for (int layer = 0; layer < 3; ++layer) {
      if (cat.permit_rules_by_layer[layer] && !cat.matched_permit_by_layer[layer])
        all_layers = false;
    }
    if (!all_layers) continue;
    granted = true;
    for (const Rule* permit : cat.matched_permits) {
      decision.reasons.push_back(permit->id);
      decision.obligations.insert(decision.obligations.end(),
                                  permit->obligations.begin(),
                                  permit->obligations.end());
    }
    if (!cat.matched_escalates.empty()) {
      escalated = true;
      for (const std::string& id : cat.matched_escalates)
        decision.reasons.push_back(id);
    }
  }

  if (granted && escalated) {
    decision.outcome = Outcome::Escalate;
  } else if (granted) {
    decision.outcome = Outcome::Allow;
  } else {
    decision.outcome = Outcome::Deny;
    decision.reasons.push_back("no-applicable-permit");
    for (const std::string& path : missing_set)
      decision.reasons.push_back("missing-attribute:" + path);
  }
  return decision;
}

RetentionDisposition evaluate_retention(const EffectivePolicy& effective,
                                        const AttributeRequest& request,
                                        TimeMs now) {
  RetentionDisposition out;
  TimeMs min_ms = 0;
  std::optional<TimeMs> max_ms;

  for (const RuleRef& ref : all_rules(effective)) {
    bool has_retain = std::any_of(
        ref.rule->obligations.begin(), ref.rule->obligations.end(),
        [](const Obligation& ob) { return std::holds_alternative<RetainObligation>(ob); });
    if (!has_retain) continue;
    if (eval_predicate(*ref.rule->predicate, request, nullptr) != Tri::True)
      continue;
    out.rule_ids.push_back(ref.rule->id);
    for (const Obligation& ob : ref.rule->obligations) {
      if (const auto* retain = std::get_if<RetainObligation>(&ob)) {
        min_ms = std::max(min_ms, retain->min_ms);
        if (retain->max_ms)
          max_ms = max_ms ? std::min(*max_ms, *retain->max_ms) : *retain->max_ms;
      }
    }
  }

  auto created_it = request.resource.find("created_at");
  auto created = created_it != request.resource.end()
                     ? value_as_time(created_it->second)
                     : std::nullopt;
  if (!created) {
    // Unknown age: retain, fail-closed.
    out.kind = RetentionKind::MustRetain;
    return out;
  }
  TimeMs age = now - *created;
  if (age < min_ms) {
    out.kind = RetentionKind::MustRetain;
  } else if (max_ms && age >= *max_ms) {
    out.kind = RetentionKind::MustDelete;
    out.delete_by = *created + *max_ms;
  } else {
    out.kind = RetentionKind::MayDelete;
  }
  return out;
}

AttributeDomains AttributeDomains::infer(const std::vector<PolicyAst>& policies) {
  // Union-find over paths joined by path-to-path comparisons so literal pools
  // are shared where equality across bags matters.
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    std::string root = find(it->second);
    parent[x] = root;
    return root;
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    parent.try_emplace(a, a);
    parent.try_emplace(b, b);
    parent[find(a)] = find(b);
  };

  std::map<std::string, std::set<Value>> literals;  // by representative
  std::set<std::string> all_paths;
  bool age_used = false;
  std::set<TimeMs> age_bounds;

  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (const auto* cmp = std::get_if<CmpPred>(&e.node)) {
      all_paths.insert(cmp->path.str());
      parent.try_emplace(cmp->path.str(), cmp->path.str());
      if (const auto* rhs_path = std::get_if<Path>(&cmp->rhs)) {
        all_paths.insert(rhs_path->str());
        unite(cmp->path.str(), rhs_path->str());
      } else {
        literals[cmp->path.str()].insert(std::get<Value>(cmp->rhs));
      }
      return;
    }
    if (const auto* in = std::get_if<InPred>(&e.node)) {
      all_paths.insert(in->path.str());
      parent.try_emplace(in->path.str(), in->path.str());
      for (const Value& v : in->values) literals[in->path.str()].insert(v);
      return;
    }
    if (const auto* age = std::get_if<AgePred>(&e.node)) {
      age_used = true;
      age_bounds.insert(age->duration_ms);
      return;
    }
    if (const auto* neg = std::get_if<NotPred>(&e.node)) {
      walk(*neg->inner);
      return;
    }
    if (const auto* conj = std::get_if<AndExpr>(&e.node)) {
      for (const auto& t : conj->terms) walk(*t);
      return;
    }
    for (const auto& t : std::get<OrExpr>(e.node).terms) walk(*t);
  };

  for (const PolicyAst& p : policies) {
    for (const Rule& r : p.rules) walk(*r.predicate);
  }

  // Pool literals per representative.
  std::map<std::string, std::set<Value>> pooled;
  for (const auto& [path, vals] : literals) {
    auto& pool = pooled[find(path)];
    pool.insert(vals.begin(), vals.end());
  }

  AttributeDomains out;
  for (const std::string& path : all_paths) {
    const auto& pool = pooled[find(path)];
    std::vector<Value> domain;
    bool has_bool = false, has_number = false, has_string = false;
    for (const Value& v : pool) {
      domain.push_back(v);
      has_bool |= v.is_bool();
      has_number |= v.is_number();
      has_string |= v.is_string();
    }
    if (has_bool) {
      for (bool b : {false, true}) {
        Value v(b);
        if (std::none_of(domain.begin(), domain.end(),
                         [&](const Value& d) { return d.is_bool() && d.equals(v); }))
          domain.push_back(v);
      }
    }
    if (has_number) {
      // Probe strictly between and beyond the mentioned numbers so <, <=, >,
      // >= all flip somewhere in the domain.
      std::vector<double> nums;
      for (const Value& v : pool) {
        if (v.is_number()) nums.push_back(v.as_number());
      }
      std::sort(nums.begin(), nums.end());
      std::vector<double> probes;
      probes.push_back(nums.front() - 1.0);
      for (std::size_t i = 0; i + 1 < nums.size(); ++i)
        probes.push_back((nums[i] + nums[i + 1]) / 2.0);
      probes.push_back(nums.back() + 1.0);
      for (double p : probes) {
        Value v(p);
        if (std::none_of(domain.begin(), domain.end(), [&](const Value& d) {
              return d.is_number() && d.equals(v);
            }))
          domain.push_back(v);
      }
    }
    if (has_string || pool.empty()) {
      domain.push_back(Value("__other_" + path + "__"));
    }
    out.by_path[path] = std::move(domain);
  }

  if (age_used) {
    std::vector<Value> ages;
    std::vector<TimeMs> bounds(age_bounds.begin(), age_bounds.end());
    ages.push_back(Value(static_cast<std::int64_t>(
        bounds.empty() ? 0 : std::max<TimeMs>(0, bounds.front() - kMsPerDay))));
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      ages.push_back(Value(static_cast<std::int64_t>(bounds[i])));
      TimeMs next = (i + 1 < bounds.size()) ? bounds[i + 1] : bounds[i] + kMsPerYear;
      ages.push_back(Value(static_cast<std::int64_t>((bounds[i] + next) / 2)));
    }
    out.by_path["__age__"] = std::move(ages);
  }
  return out;
}

std::size_t AttributeDomains::assignment_count() const {
  std::size_t count = 1;
  for (const auto& [_, domain] : by_path) {
    if (domain.empty()) continue;
    if (count > 1000000000 / domain.size()) return 1000000001;  // saturate
    count *= domain.size();
  }
  return count;
}

namespace {

// Iterates every assignment of domain values to paths, materializing an
// AttributeRequest per assignment.
class AssignmentEnumerator {
 public:
  explicit AssignmentEnumerator(const AttributeDomains& domains) {
    for (const auto& [path, values] : domains.by_path) {
      if (values.empty()) continue;
      paths_.push_back(path);
      values_.push_back(&values);
      index_.push_back(0);
    }
  }

  bool done() const { return done_; }

  AttributeRequest request() const {
    AttributeRequest r;
    constexpr TimeMs kNow = 1767225600000;  // fixed evaluation instant
    r.env["timestamp"] = Value(static_cast<std::int64_t>(kNow));
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      const std::string& path = paths_[i];
      const Value& v = (*values_[i])[index_[i]];
      if (path == "__age__") {
        TimeMs age = static_cast<TimeMs>(v.as_number());
        r.resource["created_at"] = Value(static_cast<std::int64_t>(kNow - age));
        continue;
      }
      auto dot = path.find('.');
      std::string root = path.substr(0, dot);
      std::string key = path.substr(dot + 1);
      if (root == "subject") r.subject[key] = v;
      if (root == "resource") r.resource[key] = v;
      if (root == "env" && key != "timestamp") r.env[key] = v;
      if (root == "asset") r.asset[key] = v;
    }
    return r;
  }

  void advance() {
    for (std::size_t i = 0; i < index_.size(); ++i) {
      if (++index_[i] < values_[i]->size()) return;
      index_[i] = 0;
    }
    done_ = true;
  }

 private:
  std::vector<std::string> paths_;
  std::vector<const std::vector<Value>*> values_;
  std::vector<std::size_t> index_;
  bool done_ = false;
};

}  // namespace

std::vector<LintViolation> lint_policy(const PolicyAst& policy,
                                       const std::vector<PolicyAst>& enterprise_baseline,
                                       std::size_t max_assignments) {
  std::vector<LintViolation> out;
  if (policy.layer == Layer::Enterprise) return out;

  std::vector<PolicyAst> scope = enterprise_baseline;
  scope.push_back(policy);
  AttributeDomains domains = AttributeDomains::infer(scope);
  if (domains.assignment_count() > max_assignments) {
    out.push_back({policy.policy_id, "domain-too-large",
                   "attribute domains exceed the enumeration bound"});
    return out;
  }

  std::vector<const Rule*> baseline_forbids;
  std::vector<const Rule*> baseline_permits;
  for (const PolicyAst& p : enterprise_baseline) {
    if (p.category != policy.category) continue;
    for (const Rule& r : p.rules) {
      if (r.effect == Effect::Forbid) baseline_forbids.push_back(&r);
      if (r.effect == Effect::Permit) baseline_permits.push_back(&r);
    }
  }

  for (const Rule& rule : policy.rules) {
    if (rule.effect != Effect::Permit || is_retention_rule(rule)) continue;

    // Permit overlapping an enterprise Forbid: find a witness request.
    for (const Rule* forbid : baseline_forbids) {
      bool witnessed = false;
      std::string witness;
      for (AssignmentEnumerator e(domains); !e.done(); e.advance()) {
        AttributeRequest r = e.request();
        if (eval_predicate(*rule.predicate, r, nullptr) == Tri::True &&
            eval_predicate(*forbid->predicate, r, nullptr) == Tri::True) {
          witnessed = true;
          witness = render_assignment(r);
          break;
        }
      }
      if (witnessed) {
        out.push_back({rule.id, "permits-forbidden-request",
                       "overlaps enterprise forbid " + forbid->id + " at {" +
                           witness + "}"});
      }
    }

    // Same predicate as an enterprise Permit but with obligations dropped.
    for (const Rule* permit : baseline_permits) {
      if (!expr_equal(*rule.predicate, *permit->predicate)) continue;
      if (rule.obligations.size() < permit->obligations.size()) {
        out.push_back({rule.id, "relaxed-obligations",
                       "drops obligations declared by enterprise " + permit->id});
      }
    }
  }
  return out;
}

Result<std::vector<PolicyConflict>> detect_conflicts(
    const std::vector<PolicyAst>& policies, const AttributeDomains* domains,
    std::size_t max_assignments) {
  AttributeDomains inferred;
  if (!domains) {
    inferred = AttributeDomains::infer(policies);
    domains = &inferred;
  }
  if (domains->assignment_count() > max_assignments)
    return Error{ErrorCode::DomainTooLarge,
                 "assignment space exceeds bound of " +
                     std::to_string(max_assignments)};

  struct LayerCat {
    std::vector<const Rule*> permits;
    std::vector<const Rule*> forbids;
  };
  std::map<std::pair<Layer, Category>, LayerCat> groups;
  for (const PolicyAst& p : policies) {
    auto& g = groups[{p.layer, p.category}];
    for (const Rule& r : p.rules) {
      if (r.effect == Effect::Permit && !is_retention_rule(r)) g.permits.push_back(&r);
      if (r.effect == Effect::Forbid) g.forbids.push_back(&r);
    }
  }

  std::vector<PolicyConflict> conflicts;
  std::set<std::pair<std::string, std::string>> reported;
  for (AssignmentEnumerator e(*domains); !e.done(); e.advance()) {
    AttributeRequest r = e.request();
    for (const auto& [key, group] : groups) {
      if (group.permits.empty() || group.forbids.empty()) continue;
      for (const Rule* permit : group.permits) {
        if (eval_predicate(*permit->predicate, r, nullptr) != Tri::True) continue;
        for (const Rule* forbid : group.forbids) {
          if (eval_predicate(*forbid->predicate, r, nullptr) != Tri::True)
            continue;
          if (reported.insert({permit->id, forbid->id}).second) {
            conflicts.push_back({key.first, key.second, permit->id, forbid->id,
                                 render_assignment(r)});
          }
        }
      }
    }
  }
  return conflicts;
}

}  // namespace iotgov::policy
