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

#include <charconv>
#include <sstream>

#include "iotgov/policy.hpp"

namespace iotgov::policy {

namespace {

std::string print_value(const Value& v) {
  if (v.is_string()) {
    std::string out = "\"";
    for (char c : v.as_string()) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out += "\"";
    return out;
  }
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  if (v.is_double()) {
    // Shortest representation that round-trips; keep a '.' so the lexer
    // reads it back as a float.
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v.as_number());
    std::string s(buf, end);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
      s += ".0";
    return s;
  }
  return v.str();  // integer
}

// Predicates bind tighter than "and", which binds tighter than "or". A child
// printed inside a stronger context gets parentheses.
enum class Prec { Or, And, Pred };

void print_node(const Expr& e, Prec context, std::string& out);

void print_child(const ExprPtr& child, Prec context, std::string& out) {
  Prec child_prec = Prec::Pred;
  if (std::holds_alternative<OrExpr>(child->node)) child_prec = Prec::Or;
  if (std::holds_alternative<AndExpr>(child->node)) child_prec = Prec::And;
  bool parens = static_cast<int>(child_prec) < static_cast<int>(context);
  if (parens) out += "(";
  print_node(*child, parens ? Prec::Or : context, out);
  if (parens) out += ")";
}

void print_node(const Expr& e, Prec context, std::string& out) {
  if (const auto* cmp = std::get_if<CmpPred>(&e.node)) {
    out += cmp->path.str();
    out += " ";
    out += cmp_op_text(cmp->op);
    out += " ";
    if (const auto* path = std::get_if<Path>(&cmp->rhs)) {
      out += path->str();
    } else {
      out += print_value(std::get<Value>(cmp->rhs));
    }
    return;
  }
  if (const auto* in = std::get_if<InPred>(&e.node)) {
    out += in->path.str();
    out += " in {";
    for (std::size_t i = 0; i < in->values.size(); ++i) {
      if (i) out += ", ";
      out += print_value(in->values[i]);
    }
    out += "}";
    return;
  }
  if (const auto* age = std::get_if<AgePred>(&e.node)) {
    out += "age ";
    out += cmp_op_text(age->op);
    out += " ";
    out += format_duration(age->duration_ms);
    return;
  }
  if (const auto* neg = std::get_if<NotPred>(&e.node)) {
    out += "not ";
    print_child(neg->inner, Prec::Pred, out);
    return;
  }
  if (const auto* conj = std::get_if<AndExpr>(&e.node)) {
    for (std::size_t i = 0; i < conj->terms.size(); ++i) {
      if (i) out += " and ";
      print_child(conj->terms[i], Prec::And, out);
    }
    return;
  }
  const auto& disj = std::get<OrExpr>(e.node);
  for (std::size_t i = 0; i < disj.terms.size(); ++i) {
    if (i) out += " or ";
    print_child(disj.terms[i], Prec::Or, out);
  }
  (void)context;
}

std::string print_obligation(const Obligation& ob) {
  if (const auto* mask = std::get_if<MaskObligation>(&ob))
    return "mask(" + mask->path.str() + ")";
  if (const auto* agg = std::get_if<AggregateObligation>(&ob))
    return "aggregate(" + agg->level + ")";
  const auto& retain = std::get<RetainObligation>(ob);
  std::string out = "retain " + format_duration(retain.min_ms);
  if (retain.max_ms) out += " .. " + format_duration(*retain.max_ms);
  return out;
}

bool value_identical(const Value& a, const Value& b) {
  if (a.is_string() != b.is_string() || a.is_bool() != b.is_bool()) return false;
  return a.equals(b);
}

bool obligation_equal(const Obligation& a, const Obligation& b) {
  if (a.index() != b.index()) return false;
  if (const auto* mask = std::get_if<MaskObligation>(&a))
    return mask->path == std::get<MaskObligation>(b).path;
  if (const auto* agg = std::get_if<AggregateObligation>(&a))
    return agg->level == std::get<AggregateObligation>(b).level;
  const auto& ra = std::get<RetainObligation>(a);
  const auto& rb = std::get<RetainObligation>(b);
  return ra.min_ms == rb.min_ms && ra.max_ms == rb.max_ms;
}

}  // namespace

bool is_retention_rule(const Rule& rule) {
  if (rule.effect != Effect::Permit || rule.obligations.empty()) return false;
  for (const Obligation& ob : rule.obligations) {
    if (!std::holds_alternative<RetainObligation>(ob)) return false;
  }
  return true;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* cmp = std::get_if<CmpPred>(&a.node)) {
    const auto& other = std::get<CmpPred>(b.node);
    if (!(cmp->path == other.path) || cmp->op != other.op) return false;
    if (cmp->rhs.index() != other.rhs.index()) return false;
    if (const auto* path = std::get_if<Path>(&cmp->rhs))
      return *path == std::get<Path>(other.rhs);
    return value_identical(std::get<Value>(cmp->rhs), std::get<Value>(other.rhs));
  }
  if (const auto* in = std::get_if<InPred>(&a.node)) {
    const auto& other = std::get<InPred>(b.node);
    if (!(in->path == other.path) || in->values.size() != other.values.size())
      return false;
    for (std::size_t i = 0; i < in->values.size(); ++i) {
      if (!value_identical(in->values[i], other.values[i])) return false;
    }
    return true;
  }
  if (const auto* age = std::get_if<AgePred>(&a.node)) {
    const auto& other = std::get<AgePred>(b.node);
    return age->op == other.op && age->duration_ms == other.duration_ms;
  }
  if (const auto* neg = std::get_if<NotPred>(&a.node)) {
    return expr_equal(*neg->inner, *std::get<NotPred>(b.node).inner);
  }
  if (const auto* conj = std::get_if<AndExpr>(&a.node)) {
    const auto& other = std::get<AndExpr>(b.node);
    if (conj->terms.size() != other.terms.size()) return false;
    for (std::size_t i = 0; i < conj->terms.size(); ++i) {
      if (!expr_equal(*conj->terms[i], *other.terms[i])) return false;
    }
    return true;
  }
  const auto& disj = std::get<OrExpr>(a.node);
  const auto& other = std::get<OrExpr>(b.node);
  if (disj.terms.size() != other.terms.size()) return false;
  for (std::size_t i = 0; i < disj.terms.size(); ++i) {
    if (!expr_equal(*disj.terms[i], *other.terms[i])) return false;
  }
  return true;
}

bool ast_equal(const PolicyAst& a, const PolicyAst& b) {
  if (a.policy_id != b.policy_id || a.layer != b.layer ||
      a.category != b.category || a.version != b.version ||
      a.effective_date != b.effective_date || a.rules.size() != b.rules.size())
    return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const Rule& ra = a.rules[i];
    const Rule& rb = b.rules[i];
    if (ra.id != rb.id || ra.effect != rb.effect) return false;
    if (!expr_equal(*ra.predicate, *rb.predicate)) return false;
    if (ra.obligations.size() != rb.obligations.size()) return false;
    for (std::size_t k = 0; k < ra.obligations.size(); ++k) {
      if (!obligation_equal(ra.obligations[k], rb.obligations[k])) return false;
    }
  }
  return true;
}

std::string print_expr(const Expr& expr) {
  std::string out;
  print_node(expr, Prec::Or, out);
  return out;
}

std::string print_policy(const PolicyAst& policy) {
  std::ostringstream out;
  out << "policy " << policy.policy_id << " layer " << layer_name(policy.layer)
      << " category " << category_name(policy.category) << " version "
      << policy.version.str();
  if (policy.effective_date) {
    std::string iso = format_iso8601(*policy.effective_date);
    out << " effective " << iso.substr(0, 10);
  }
  out << "\n";
  for (const Rule& rule : policy.rules) {
    out << effect_name(rule.effect) << " when " << print_expr(*rule.predicate);
    if (!rule.obligations.empty()) {
      out << " with ";
      for (std::size_t i = 0; i < rule.obligations.size(); ++i) {
        if (i) out << ", ";
        out << print_obligation(rule.obligations[i]);
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace iotgov::policy
