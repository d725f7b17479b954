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

#include <cctype>
#include <charconv>

#include "iotgov/policy.hpp"

namespace iotgov::policy {

namespace {

enum class TokKind {
  Ident,
  String,
  Int,
  Float,
  Duration,
  SemverLit,   // 1.2.3
  DateLit,     // 2026-01-01
  Symbol,      // one of == != <= >= < > ( ) { } , . ..
  End,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;       // ident/string/symbol spelling
  double number = 0.0;    // Int/Float
  std::int64_t int_value = 0;
  TimeMs duration_ms = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Result<std::vector<Token>> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws_and_comments();
      if (pos_ >= text_.size()) {
        out.push_back(make(TokKind::End, ""));
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_ident());
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        auto tok = lex_number();
        if (!tok.ok()) return tok.error();
        out.push_back(tok.value());
      } else if (c == '"') {
        auto tok = lex_string();
        if (!tok.ok()) return tok.error();
        out.push_back(tok.value());
      } else {
        auto tok = lex_symbol();
        if (!tok.ok()) return tok.error();
        out.push_back(tok.value());
      }
    }
  }

 private:
  Token make(TokKind kind, std::string text) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = tok_line_;
    t.column = tok_col_;
    return t;
  }

  void advance() {
    if (pos_ < text_.size() && text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
    tok_line_ = line_;
    tok_col_ = col_;
  }

  Token lex_ident() {
    std::string s;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '-')) {
      // Idents allow '-' (e.g. "quality-inspection" concepts appear as string
      // literals, but policy ids like "retention-eu" are idents).
      s.push_back(text_[pos_]);
      advance();
    }
    return make(TokKind::Ident, s);
  }

  Result<Token> lex_string() {
    advance();  // opening quote
    std::string s;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) break;
        char esc = text_[pos_];
        if (esc == '"' || esc == '\\') {
          s.push_back(esc);
        } else if (esc == 'n') {
          s.push_back('\n');
        } else {
          return Error{ErrorCode::SyntaxError,
                       loc() + ": unknown escape \\" + std::string(1, esc)};
        }
        advance();
      } else if (c == '\n') {
        return Error{ErrorCode::SyntaxError, loc() + ": unterminated string"};
      } else {
        s.push_back(c);
        advance();
      }
    }
    if (pos_ >= text_.size())
      return Error{ErrorCode::SyntaxError, loc() + ": unterminated string"};
    advance();  // closing quote
    return make(TokKind::String, s);
  }

  Result<Token> lex_number() {
    std::string digits;
    bool negative = false;
    if (text_[pos_] == '-') {
      negative = true;
      advance();
    }
    auto read_digits = [&]() {
      std::string d;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        d.push_back(text_[pos_]);
        advance();
      }
      return d;
    };
    digits = read_digits();

    // Date: 2026-01-01 (never negative).
    if (!negative && pos_ < text_.size() && text_[pos_] == '-' &&
        pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      advance();
      std::string month = read_digits();
      if (pos_ >= text_.size() || text_[pos_] != '-')
        return Error{ErrorCode::SyntaxError, loc() + ": malformed date"};
      advance();
      std::string day = read_digits();
      Token t = make(TokKind::DateLit, digits + "-" + month + "-" + day);
      return t;
    }

    // Fraction, or semver when a second dot follows.
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      advance();
      std::string frac = read_digits();
      if (!negative && pos_ + 1 < text_.size() && text_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        advance();
        std::string patch = read_digits();
        return make(TokKind::SemverLit, digits + "." + frac + "." + patch);
      }
      Token t = make(TokKind::Float, digits + "." + frac);
      t.number = std::stod(t.text) * (negative ? -1.0 : 1.0);
      if (negative) t.text = "-" + t.text;
      return t;
    }

    // Duration: digits immediately followed by a unit suffix.
    if (!negative && pos_ < text_.size() &&
        std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      std::string unit;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        unit.push_back(text_[pos_]);
        advance();
      }
      auto ms = parse_duration(digits + unit);
      if (!ms)
        return Error{ErrorCode::BadDuration,
                     loc() + ": bad duration unit '" + unit + "'"};
      Token t = make(TokKind::Duration, digits + unit);
      t.duration_ms = *ms;
      return t;
    }

    Token t = make(TokKind::Int, (negative ? "-" : "") + digits);
    t.int_value = std::stoll(t.text);
    t.number = static_cast<double>(t.int_value);
    return t;
  }

  Result<Token> lex_symbol() {
    auto two = text_.substr(pos_, 2);
    for (const char* sym : {"==", "!=", "<=", ">=", ".."}) {
      if (two == sym) {
        advance();
        advance();
        return make(TokKind::Symbol, sym);
      }
    }
    char c = text_[pos_];
    for (char sym : {'<', '>', '(', ')', '{', '}', ',', '.'}) {
      if (c == sym) {
        advance();
        return make(TokKind::Symbol, std::string(1, sym));
      }
    }
    return Error{ErrorCode::SyntaxError,
                 loc() + ": unexpected character '" + std::string(1, c) + "'"};
  }

  std::string loc() const {
    return std::to_string(tok_line_) + ":" + std::to_string(tok_col_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int tok_line_ = 1, tok_col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Result<PolicyAst> run() {
    PolicyAst ast;
    if (auto s = expect_keyword("policy"); !s.ok()) return s.error();
    auto id = expect(TokKind::Ident, "policy id");
    if (!id.ok()) return id.error();
    ast.policy_id = id->text;

    if (auto s = expect_keyword("layer"); !s.ok()) return s.error();
    auto layer_tok = expect(TokKind::Ident, "layer");
    if (!layer_tok.ok()) return layer_tok.error();
    auto layer = layer_from_name(layer_tok->text);
    if (!layer)
      return err(*layer_tok, "unknown layer '" + layer_tok->text + "'");
    ast.layer = *layer;

    if (auto s = expect_keyword("category"); !s.ok()) return s.error();
    auto cat_tok = expect(TokKind::Ident, "category");
    if (!cat_tok.ok()) return cat_tok.error();
    auto category = category_from_name(cat_tok->text);
    if (!category)
      return err(*cat_tok, "unknown category '" + cat_tok->text + "'");
    ast.category = *category;

    if (auto s = expect_keyword("version"); !s.ok()) return s.error();
    const Token& ver = peek();
    if (ver.kind != TokKind::SemverLit) return err(ver, "expected semver");
    auto parsed = SemVer::parse(ver.text);
    if (!parsed) return err(ver, "bad version " + ver.text);
    ast.version = *parsed;
    next();

    if (peek().kind == TokKind::Ident && peek().text == "effective") {
      next();
      const Token& date = peek();
      if (date.kind != TokKind::DateLit) return err(date, "expected date");
      auto ms = parse_date(date.text);
      if (!ms) return err(date, "bad date " + date.text);
      ast.effective_date = *ms;
      next();
    }

    while (peek().kind != TokKind::End) {
      auto rule = parse_rule(ast.policy_id, ast.rules.size() + 1);
      if (!rule.ok()) return rule.error();
      ast.rules.push_back(std::move(rule).take());
    }
    if (ast.rules.empty())
      return Error{ErrorCode::SyntaxError, "policy has no rules"};
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  Error err(const Token& at, const std::string& what) const {
    return Error{ErrorCode::SyntaxError, std::to_string(at.line) + ":" +
                                             std::to_string(at.column) + ": " + what};
  }

  Result<Token> expect(TokKind kind, const std::string& what) {
    if (peek().kind != kind) return err(peek(), "expected " + what);
    return next();
  }

  Status expect_keyword(const std::string& kw) {
    if (peek().kind != TokKind::Ident || peek().text != kw)
      return err(peek(), "expected '" + kw + "'");
    next();
    return {};
  }

  Status expect_symbol(const std::string& sym) {
    if (peek().kind != TokKind::Symbol || peek().text != sym)
      return err(peek(), "expected '" + sym + "'");
    next();
    return {};
  }

  bool at_keyword(const std::string& kw) const {
    return peek().kind == TokKind::Ident && peek().text == kw;
  }

  Result<Rule> parse_rule(const std::string& policy_id, std::size_t index) {
    Rule rule;
    rule.id = policy_id + "#" + std::to_string(index);
    const Token& head = peek();
    if (head.kind != TokKind::Ident) return err(head, "expected rule");

    if (head.text == "permit") {
      rule.effect = Effect::Permit;
      next();
    } else if (head.text == "forbid") {
      rule.effect = Effect::Forbid;
      next();
    } else if (head.text == "escalate") {
      rule.effect = Effect::Escalate;
      next();
    } else if (head.text == "retain") {
      // retain D [.. D] when E  ==  permit when E with retain D [.. D]
      next();
      auto retain = parse_retain_obligation();
      if (!retain.ok()) return retain.error();
      rule.effect = Effect::Permit;
      rule.obligations.push_back(retain.value());
      if (auto s = expect_keyword("when"); !s.ok()) return s.error();
      auto expr = parse_expr();
      if (!expr.ok()) return expr.error();
      rule.predicate = std::move(expr).take();
      return rule;
    } else {
      return err(head, "expected permit/forbid/escalate/retain");
    }

    if (auto s = expect_keyword("when"); !s.ok()) return s.error();
    auto expr = parse_expr();
    if (!expr.ok()) return expr.error();
    rule.predicate = std::move(expr).take();

    if (at_keyword("with")) {
      next();
      while (true) {
        auto ob = parse_obligation();
        if (!ob.ok()) return ob.error();
        rule.obligations.push_back(std::move(ob).take());
        if (peek().kind == TokKind::Symbol && peek().text == ",") {
          next();
          continue;
        }
        break;
      }
    }
    return rule;
  }

  Result<RetainObligation> parse_retain_obligation() {
    const Token& d = peek();
    if (d.kind != TokKind::Duration) return err(d, "expected duration");
    RetainObligation ob;
    ob.min_ms = d.duration_ms;
    next();
    if (peek().kind == TokKind::Symbol && peek().text == "..") {
      next();
      const Token& dmax = peek();
      if (dmax.kind != TokKind::Duration) return err(dmax, "expected duration");
      ob.max_ms = dmax.duration_ms;
      next();
    }
    return ob;
  }

  Result<Obligation> parse_obligation() {
    const Token& head = peek();
    if (head.kind != TokKind::Ident) return err(head, "expected obligation");
    if (head.text == "mask") {
      next();
      if (auto s = expect_symbol("("); !s.ok()) return s.error();
      auto path = parse_path();
      if (!path.ok()) return path.error();
      if (auto s = expect_symbol(")"); !s.ok()) return s.error();
      return Obligation{MaskObligation{std::move(path).take()}};
    }
    if (head.text == "aggregate") {
      next();
      if (auto s = expect_symbol("("); !s.ok()) return s.error();
      auto level = expect(TokKind::Ident, "aggregation level");
      if (!level.ok()) return level.error();
      if (auto s = expect_symbol(")"); !s.ok()) return s.error();
      return Obligation{AggregateObligation{level->text}};
    }
    if (head.text == "retain") {
      next();
      auto retain = parse_retain_obligation();
      if (!retain.ok()) return retain.error();
      return Obligation{retain.value()};
    }
    return err(head, "unknown obligation '" + head.text + "'");
  }

  Result<ExprPtr> parse_expr() {
    std::vector<ExprPtr> terms;
    auto first = parse_term();
    if (!first.ok()) return first.error();
    terms.push_back(std::move(first).take());
    while (at_keyword("or")) {
      next();
      auto term = parse_term();
      if (!term.ok()) return term.error();
      terms.push_back(std::move(term).take());
    }
    if (terms.size() == 1) return terms[0];
    return std::make_shared<const Expr>(Expr{OrExpr{std::move(terms)}});
  }

  Result<ExprPtr> parse_term() {
    std::vector<ExprPtr> preds;
    auto first = parse_pred();
    if (!first.ok()) return first.error();
    preds.push_back(std::move(first).take());
    while (at_keyword("and")) {
      next();
      auto pred = parse_pred();
      if (!pred.ok()) return pred.error();
      preds.push_back(std::move(pred).take());
    }
    if (preds.size() == 1) return preds[0];
    return std::make_shared<const Expr>(Expr{AndExpr{std::move(preds)}});
  }

  Result<ExprPtr> parse_pred() {
    const Token& head = peek();
    if (head.kind == TokKind::Symbol && head.text == "(") {
      next();
      auto inner = parse_expr();
      if (!inner.ok()) return inner.error();
      if (auto s = expect_symbol(")"); !s.ok()) return s.error();
      return inner;
    }
    if (at_keyword("not")) {
      next();
      auto inner = parse_pred();
      if (!inner.ok()) return inner.error();
      return std::make_shared<const Expr>(Expr{NotPred{std::move(inner).take()}});
    }
    if (at_keyword("age")) {
      next();
      auto op = parse_cmp_op();
      if (!op.ok()) return op.error();
      const Token& d = peek();
      if (d.kind != TokKind::Duration) return err(d, "expected duration");
      AgePred pred{op.value(), d.duration_ms};
      next();
      return std::make_shared<const Expr>(Expr{pred});
    }

    auto path = parse_path();
    if (!path.ok()) return path.error();

    if (at_keyword("in")) {
      next();
      if (auto s = expect_symbol("{"); !s.ok()) return s.error();
      InPred pred;
      pred.path = std::move(path).take();
      while (true) {
        auto lit = parse_literal();
        if (!lit.ok()) return lit.error();
        pred.values.push_back(std::move(lit).take());
        if (peek().kind == TokKind::Symbol && peek().text == ",") {
          next();
          continue;
        }
        break;
      }
      if (auto s = expect_symbol("}"); !s.ok()) return s.error();
      return std::make_shared<const Expr>(Expr{std::move(pred)});
    }

    auto op = parse_cmp_op();
    if (!op.ok()) return op.error();
    CmpPred pred;
    pred.path = std::move(path).take();
    pred.op = op.value();
    const Token& rhs = peek();
    if (rhs.kind == TokKind::Ident &&
        (rhs.text == "subject" || rhs.text == "resource" || rhs.text == "env" ||
         rhs.text == "asset")) {
      auto rhs_path = parse_path();
      if (!rhs_path.ok()) return rhs_path.error();
      pred.rhs = std::move(rhs_path).take();
    } else {
      auto lit = parse_literal();
      if (!lit.ok()) return lit.error();
      pred.rhs = std::move(lit).take();
    }
    return std::make_shared<const Expr>(Expr{std::move(pred)});
  }

  Result<CmpOp> parse_cmp_op() {
    const Token& t = peek();
    if (t.kind != TokKind::Symbol) return err(t, "expected comparison operator");
    CmpOp op;
    if (t.text == "==") {
      op = CmpOp::Eq;
    } else if (t.text == "!=") {
      op = CmpOp::Ne;
    } else if (t.text == "<") {
      op = CmpOp::Lt;
    } else if (t.text == "<=") {
      op = CmpOp::Le;
    } else if (t.text == ">") {
      op = CmpOp::Gt;
    } else if (t.text == ">=") {
      op = CmpOp::Ge;
    } else {
      return err(t, "expected comparison operator");
    }
    next();
    return op;
  }

  Result<Path> parse_path() {
    auto root = expect(TokKind::Ident, "attribute path");
    if (!root.ok()) return root.error();
    if (root->text != "subject" && root->text != "resource" &&
        root->text != "env" && root->text != "asset") {
      return Error{ErrorCode::UnknownAttributeRoot,
                   std::to_string(root->line) + ":" + std::to_string(root->column) +
                       ": attribute root must be subject/resource/env/asset, got '" +
                       root->text + "'"};
    }
    Path path;
    path.root = root->text;
    if (!(peek().kind == TokKind::Symbol && peek().text == "."))
      return err(peek(), "expected '.' after attribute root");
    while (peek().kind == TokKind::Symbol && peek().text == ".") {
      next();
      auto seg = expect(TokKind::Ident, "path segment");
      if (!seg.ok()) return seg.error();
      path.segments.push_back(seg->text);
    }
    return path;
  }

  Result<Value> parse_literal() {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::String: {
        Value v(t.text);
        next();
        return v;
      }
      case TokKind::Int: {
        Value v(t.int_value);
        next();
        return v;
      }
      case TokKind::Float: {
        Value v(t.number);
        next();
        return v;
      }
      case TokKind::Ident:
        if (t.text == "true" || t.text == "false") {
          Value v(t.text == "true");
          next();
          return v;
        }
        return err(t, "expected literal, got '" + t.text + "'");
      default:
        return err(t, "expected literal");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::Enterprise: return "enterprise";
    case Layer::Domain: return "domain";
    case Layer::Plant: return "plant";
  }
  return "enterprise";
}

std::optional<Layer> layer_from_name(const std::string& name) {
  if (name == "enterprise") return Layer::Enterprise;
  if (name == "domain") return Layer::Domain;
  if (name == "plant") return Layer::Plant;
  return std::nullopt;
}

std::string_view category_name(Category category) {
  switch (category) {
    case Category::Access: return "access";
    case Category::Security: return "security";
    case Category::Compliance: return "compliance";
    case Category::Quality: return "quality";
  }
  return "access";
}

std::optional<Category> category_from_name(const std::string& name) {
  if (name == "access") return Category::Access;
  if (name == "security") return Category::Security;
  if (name == "compliance") return Category::Compliance;
  if (name == "quality") return Category::Quality;
  return std::nullopt;
}

std::string_view effect_name(Effect effect) {
  switch (effect) {
    case Effect::Permit: return "permit";
    case Effect::Forbid: return "forbid";
    case Effect::Escalate: return "escalate";
  }
  return "permit";
}

std::string_view cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "==";
}

std::string Path::str() const {
  std::string out = root;
  for (const std::string& seg : segments) {
    out += ".";
    out += seg;
  }
  return out;
}

std::string Path::key() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += ".";
    out += segments[i];
  }
  return out;
}

Result<PolicyAst> parse_policy(const std::string& text) {
  Lexer lexer(text);
  auto tokens = lexer.run();
  if (!tokens.ok()) return tokens.error();
  Parser parser(std::move(tokens).take());
  return parser.run();
}

}  // namespace iotgov::policy
