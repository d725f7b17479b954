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
#include <variant>
#include <vector>

#include "iotgov/errors.hpp"
#include "iotgov/semver.hpp"
#include "iotgov/simtime.hpp"
#include "iotgov/value.hpp"

// Policy DSL.
//
//   policy <IDENT> layer <enterprise|domain|plant>
//       category <access|security|compliance|quality>
//       version <SEMVER> [effective <DATE>]
//   <rule>+
//
//   rule  := ("permit"|"forbid"|"escalate") "when" expr
//              ["with" obligation ("," obligation)*]
//          | "retain" DURATION [".." DURATION] "when" expr
//   expr  := term ("or" term)*
//   term  := pred ("and" pred)*
//   pred  := path CMP (literal | path)
//          | path "in" "{" literal ("," literal)* "}"
//          | "age" CMP DURATION
//          | "not" pred
//          | "(" expr ")"
//   path  := ("subject"|"resource"|"env"|"asset") ("." IDENT)+
//   obligation := "mask" "(" path ")"
//               | "aggregate" "(" IDENT ")"
//               | "retain" DURATION [".." DURATION]
//
// "retain D [.. D] when E" is sugar for "permit when E with retain D [.. D]".
// "#" starts a line comment. Comparing two paths (subject.jurisdiction ==
// asset.jurisdiction) is part of the language; the same-jurisdiction rule is
// inexpressible without it.

namespace iotgov::policy {

enum class Layer { Enterprise, Domain, Plant };
enum class Category { Access, Security, Compliance, Quality };
enum class Effect { Permit, Forbid, Escalate };

std::string_view layer_name(Layer layer);            // lowercase DSL form
std::optional<Layer> layer_from_name(const std::string& name);
std::string_view category_name(Category category);
std::optional<Category> category_from_name(const std::string& name);
std::string_view effect_name(Effect effect);

struct Path {
  std::string root;                   // subject | resource | env | asset
  std::vector<std::string> segments;  // at least one

  std::string str() const;
  // Dotted key into the root's attribute bag.
  std::string key() const;
  bool operator==(const Path&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view cmp_op_text(CmpOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct CmpPred {
  Path path;
  CmpOp op = CmpOp::Eq;
  std::variant<Value, Path> rhs;
};

struct InPred {
  Path path;
  std::vector<Value> values;
};

struct AgePred {
  CmpOp op = CmpOp::Ge;
  TimeMs duration_ms = 0;
};

struct NotPred {
  ExprPtr inner;
};

struct AndExpr {
  std::vector<ExprPtr> terms;  // always >= 2
};

struct OrExpr {
  std::vector<ExprPtr> terms;  // always >= 2
};

struct Expr {
  std::variant<CmpPred, InPred, AgePred, NotPred, AndExpr, OrExpr> node;
};

struct MaskObligation {
  Path path;
};
struct AggregateObligation {
  std::string level;
};
struct RetainObligation {
  TimeMs min_ms = 0;
  std::optional<TimeMs> max_ms;
};
using Obligation = std::variant<MaskObligation, AggregateObligation, RetainObligation>;

struct Rule {
  std::string id;  // "<policy_id>#<1-based index>"
  Effect effect = Effect::Permit;
  ExprPtr predicate;
  std::vector<Obligation> obligations;
};

// A retention rule is a Permit whose obligations are all retain(..) clauses.
// It constrains data disposition, not access: evaluation, linting, and
// conflict detection treat it separately from grant-bearing permits.
bool is_retention_rule(const Rule& rule);

struct PolicyAst {
  std::string policy_id;
  Layer layer = Layer::Enterprise;
  Category category = Category::Access;
  SemVer version;
  std::optional<TimeMs> effective_date;
  std::vector<Rule> rules;
};

bool expr_equal(const Expr& a, const Expr& b);
bool ast_equal(const PolicyAst& a, const PolicyAst& b);

// Parse one policy document. Syntax errors carry line:column positions.
Result<PolicyAst> parse_policy(const std::string& text);

// Canonical form; parse_policy(print_policy(p)) reproduces p exactly.
std::string print_policy(const PolicyAst& policy);
std::string print_expr(const Expr& expr);

}  // namespace iotgov::policy
