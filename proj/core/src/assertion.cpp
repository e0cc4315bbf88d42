#include "deltaspec/assertion.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "deltaspec/dl_lexer.hpp"
#include "deltaspec/error.hpp"

namespace deltaspec {

std::string_view agg_name(AggFn fn) {
  switch (fn) {
    case AggFn::Sum: return "sum";
    case AggFn::SumAbs: return "sumabs";
    case AggFn::Max: return "max";
    case AggFn::MaxAbs: return "maxabs";
    case AggFn::Min: return "min";
  }
  return "?";
}

namespace ast {

namespace {
APtr make(ANode n) { return std::make_shared<const ANode>(std::move(n)); }
ANode node(AKind k, Type t) {
  ANode n;
  n.kind = k;
  n.type = t;
  return n;
}
}  // namespace

APtr int_lit(std::int64_t v) {
  auto n = node(AKind::IntLit, Type::Int);
  n.intValue = v;
  return make(std::move(n));
}
APtr real_lit(double v) {
  auto n = node(AKind::RealLit, Type::Real);
  n.realValue = v;
  return make(std::move(n));
}
APtr bool_lit(bool v) {
  auto n = node(AKind::BoolLit, Type::Bool);
  n.boolValue = v;
  return make(std::move(n));
}
APtr field(std::string name, Type t) {
  auto n = node(AKind::Field, t);
  n.name = std::move(name);
  return make(std::move(n));
}
APtr old(std::string name, Type t) {
  auto n = node(AKind::Old, t);
  n.name = std::move(name);
  return make(std::move(n));
}
APtr param(std::string name, Type t) {
  auto n = node(AKind::Param, t);
  n.name = std::move(name);
  return make(std::move(n));
}
APtr result(Type t) { return make(node(AKind::Result, t)); }
APtr elem(APtr array, std::string var) {
  auto n = node(AKind::Elem, element_type(array->type));
  n.name = std::move(var);
  n.kids = {std::move(array)};
  return make(std::move(n));
}
APtr qindex(std::string var) {
  auto n = node(AKind::QIndex, Type::Int);
  n.name = std::move(var);
  return make(std::move(n));
}
APtr len(APtr array) {
  auto n = node(AKind::Len, Type::Int);
  n.kids = {std::move(array)};
  return make(std::move(n));
}
APtr agg(AggFn fn, APtr array) {
  auto n = node(AKind::Agg, element_type(array->type));
  n.agg = fn;
  n.kids = {std::move(array)};
  return make(std::move(n));
}
APtr neg(APtr x) {
  auto n = node(AKind::Neg, x->type);
  n.kids = {std::move(x)};
  return make(std::move(n));
}
APtr lnot(APtr x) {
  auto n = node(AKind::Not, Type::Bool);
  n.kids = {std::move(x)};
  return make(std::move(n));
}
APtr arith(BinOp op, APtr a, APtr b) {
  Type t = a->type == Type::Int && b->type == Type::Int ? Type::Int : Type::Real;
  auto n = node(AKind::Arith, t);
  n.op = op;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
APtr cmp(BinOp op, APtr a, APtr b) {
  auto n = node(AKind::Cmp, Type::Bool);
  n.op = op;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
APtr land(APtr a, APtr b) {
  auto n = node(AKind::And, Type::Bool);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
APtr lor(APtr a, APtr b) {
  auto n = node(AKind::Or, Type::Bool);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
APtr implies(APtr a, APtr b) {
  auto n = node(AKind::Implies, Type::Bool);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
APtr isnan(APtr x) {
  auto n = node(AKind::IsNan, Type::Bool);
  n.kids = {std::move(x)};
  return make(std::move(n));
}
APtr forall(std::string var, APtr array, APtr body) {
  auto n = node(AKind::Forall, Type::Bool);
  n.name = std::move(var);
  n.kids = {std::move(array), std::move(body)};
  return make(std::move(n));
}
APtr exists(std::string var, APtr array, APtr body) {
  auto n = node(AKind::Exists, Type::Bool);
  n.name = std::move(var);
  n.kids = {std::move(array), std::move(body)};
  return make(std::move(n));
}

}  // namespace ast

namespace {

int precedence(const ANode& n) {
  switch (n.kind) {
    case AKind::Implies:
    case AKind::Forall:
    case AKind::Exists: return 0;
    case AKind::Or: return 1;
    case AKind::And: return 2;
    case AKind::Cmp: return 3;
    case AKind::Arith: return n.op == BinOp::Add || n.op == BinOp::Sub ? 4 : 5;
    case AKind::Neg:
    case AKind::Not: return 6;
    case AKind::IntLit: return n.intValue < 0 ? 6 : 7;
    case AKind::RealLit: return std::signbit(n.realValue) && !std::isnan(n.realValue) ? 6 : 7;
    default: return 7;
  }
}

void emit(std::string& out, const ANode& n);

void emit_child(std::string& out, const ANode& n, int minPrec) {
  if (precedence(n) < minPrec) {
    out += '(';
    emit(out, n);
    out += ')';
  } else {
    emit(out, n);
  }
}

void emit(std::string& out, const ANode& n) {
  switch (n.kind) {
    case AKind::IntLit: out += std::to_string(n.intValue); break;
    case AKind::RealLit: out += format_real(n.realValue); break;
    case AKind::BoolLit: out += n.boolValue ? "true" : "false"; break;
    case AKind::Field:
    case AKind::Param:
    case AKind::QIndex: out += n.name; break;
    case AKind::Old: out += "old(" + n.name + ")"; break;
    case AKind::Result: out += "result"; break;
    case AKind::Elem:
      emit(out, *n.kids[0]);
      out += "[" + n.name + "]";
      break;
    case AKind::Len:
      out += "len(";
      emit(out, *n.kids[0]);
      out += ')';
      break;
    case AKind::Agg:
      out += agg_name(n.agg);
      out += '(';
      emit(out, *n.kids[0]);
      out += ')';
      break;
    case AKind::IsNan:
      out += "isnan(";
      emit(out, *n.kids[0]);
      out += ')';
      break;
    case AKind::Neg:
    case AKind::Not:
      out += n.kind == AKind::Neg ? '-' : '!';
      emit_child(out, *n.kids[0], 6);
      break;
    case AKind::Arith: {
      int p = precedence(n);
      emit_child(out, *n.kids[0], p);
      out += ' ';
      out += binop_text(n.op);
      out += ' ';
      emit_child(out, *n.kids[1], p + 1);
      break;
    }
    case AKind::Cmp:
      emit_child(out, *n.kids[0], 4);
      out += ' ';
      out += binop_text(n.op);
      out += ' ';
      emit_child(out, *n.kids[1], 4);
      break;
    case AKind::And:
    case AKind::Or: {
      int p = precedence(n);
      emit_child(out, *n.kids[0], p);
      out += n.kind == AKind::And ? " && " : " || ";
      emit_child(out, *n.kids[1], p + 1);
      break;
    }
    case AKind::Implies:
      emit_child(out, *n.kids[0], 1);
      out += " ==> ";
      emit_child(out, *n.kids[1], 0);
      break;
    case AKind::Forall:
    case AKind::Exists:
      out += n.kind == AKind::Forall ? "forall " : "exists ";
      out += n.name + " in ";
      emit(out, *n.kids[0]);
      out += ": ";
      emit_child(out, *n.kids[1], 0);
      break;
  }
}

}  // namespace

std::string print_assertion(const APtr& a) {
  std::string out;
  emit(out, *a);
  return out;
}

int assertion_size(const APtr& a) {
  switch (a->kind) {
    case AKind::Elem: return 1;
    default: {
      int s = 1;
      for (const auto& k : a->kids) s += assertion_size(k);
      return s;
    }
  }
}

bool is_literal(const APtr& a) {
  return a->kind == AKind::IntLit || a->kind == AKind::RealLit || a->kind == AKind::BoolLit;
}

bool structurally_equal(const APtr& a, const APtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->type != b->type || a->kids.size() != b->kids.size()) return false;
  switch (a->kind) {
    case AKind::IntLit:
      if (a->intValue != b->intValue) return false;
      break;
    case AKind::RealLit: {
      bool an = std::isnan(a->realValue), bn = std::isnan(b->realValue);
      if (an != bn) return false;
      if (!an && (a->realValue != b->realValue || std::signbit(a->realValue) != std::signbit(b->realValue)))
        return false;
      break;
    }
    case AKind::BoolLit:
      if (a->boolValue != b->boolValue) return false;
      break;
    case AKind::Arith:
    case AKind::Cmp:
      if (a->op != b->op) return false;
      break;
    case AKind::Agg:
      if (a->agg != b->agg) return false;
      break;
    default: break;
  }
  if (a->name != b->name) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!structurally_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {

void add_unique(std::vector<std::pair<std::string, Type>>& out, const std::string& name, Type t) {
  for (const auto& [n, _] : out)
    if (n == name) return;
  out.emplace_back(name, t);
}

void extend_scope(Scope& s, const Unit& unit, bool& found) {
  for (const auto& f : unit.fields) add_unique(s.fields, f.name, f.type);
  if (s.point.kind == ProgramPoint::Kind::ClassInvariant) {
    found = true;
    return;
  }
  const Method* m = unit.find_method(s.point.method);
  if (!m) return;
  for (const auto& p : m->params) add_unique(s.params, p.name, p.type);
  if (!found) s.resultType = m->returnType;
  found = true;
}

}  // namespace

Scope make_scope(const Unit& unit, const ProgramPoint& point) {
  Scope s;
  s.point = point;
  s.allowOld = point.kind == ProgramPoint::Kind::MethodPost;
  bool found = false;
  extend_scope(s, unit, found);
  if (!found) throw Error(ErrorCode::UnknownPoint, "unknown program point '" + point.label() + "' in " + unit.name);
  return s;
}

Scope make_scope(const Unit& pre, const Unit& post, const ProgramPoint& point) {
  Scope s;
  s.point = point;
  s.allowOld = point.kind == ProgramPoint::Kind::MethodPost;
  bool found = false;
  extend_scope(s, pre, found);
  extend_scope(s, post, found);
  if (!found) throw Error(ErrorCode::UnknownPoint, "unknown program point '" + point.label() + "'");
  return s;
}

namespace {

class AParser {
 public:
  AParser(std::string_view text, const Scope& scope) : toks_(tokenize(text)), scope_(scope) {}

  APtr parse() {
    APtr a = parse_implies();
    if (peek().kind != TokenKind::End) fail("trailing input");
    if (a->type != Type::Bool) type_error("assertion must be boolean");
    return a;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Scope& scope_;
  std::string boundVar_;
  APtr boundArray_;

  const Token& peek() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
  bool at(std::string_view t) const {
    const auto& k = peek();
    return (k.kind == TokenKind::Punct || k.kind == TokenKind::Ident) && k.text == t;
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    Diagnostic d{t.loc.line, t.loc.column, "error",
                 msg + (t.kind == TokenKind::End ? " (at end of input)" : " (at '" + t.text + "')")};
    throw Error(ErrorCode::SyntaxError, d.message, {d});
  }
  [[noreturn]] void type_error(const std::string& msg) const {
    const auto& t = peek();
    Diagnostic d{t.loc.line, t.loc.column, "error", msg};
    throw Error(ErrorCode::TypeError, msg, {d});
  }

  void expect(std::string_view t) {
    if (!at(t)) fail("expected '" + std::string(t) + "'");
    next();
  }
  std::string ident() {
    if (peek().kind != TokenKind::Ident) fail("expected an identifier");
    return next().text;
  }

  APtr need_bool(APtr a) {
    if (a->type != Type::Bool) type_error("expected a boolean operand");
    return a;
  }
  APtr need_num(APtr a) {
    if (!is_numeric(a->type)) type_error("expected a numeric operand");
    return a;
  }
  APtr need_array(APtr a) {
    if (!is_array(a->type)) type_error("expected an array");
    return a;
  }

  APtr parse_implies() {
    if (at("forall") || at("exists")) return parse_quant();
    APtr lhs = parse_or();
    if (at("==>")) {
      next();
      return ast::implies(need_bool(lhs), need_bool(parse_implies()));
    }
    return lhs;
  }

  APtr parse_quant() {
    bool all = at("forall");
    next();
    if (!boundVar_.empty()) fail("nested quantifiers are not supported");
    std::string var = ident();
    expect("in");
    APtr arr = need_array(parse_array_term());
    expect(":");
    boundVar_ = var;
    boundArray_ = arr;
    APtr body = need_bool(parse_implies());
    boundVar_.clear();
    boundArray_.reset();
    return all ? ast::forall(var, arr, body) : ast::exists(var, arr, body);
  }

  APtr parse_or() {
    APtr lhs = parse_and();
    while (at("||")) {
      next();
      lhs = ast::lor(need_bool(lhs), need_bool(parse_and()));
    }
    return lhs;
  }

  APtr parse_and() {
    APtr lhs = parse_cmp();
    while (at("&&")) {
      next();
      lhs = ast::land(need_bool(lhs), need_bool(parse_cmp()));
    }
    return lhs;
  }

  APtr parse_cmp() {
    APtr lhs = parse_add();
    static constexpr std::pair<std::string_view, BinOp> kOps[] = {
        {"<", BinOp::Lt}, {"<=", BinOp::Le}, {">", BinOp::Gt}, {">=", BinOp::Ge}, {"==", BinOp::Eq}, {"!=", BinOp::Ne}};
    for (auto [text, op] : kOps) {
      if (!at(text)) continue;
      next();
      APtr rhs = parse_add();
      bool eq = op == BinOp::Eq || op == BinOp::Ne;
      bool ok = (is_numeric(lhs->type) && is_numeric(rhs->type)) ||
                (eq && lhs->type == Type::Bool && rhs->type == Type::Bool);
      if (!ok) type_error("cannot compare " + std::string(type_name(lhs->type)) + " and " +
                          std::string(type_name(rhs->type)));
      return ast::cmp(op, lhs, rhs);
    }
    return lhs;
  }

  APtr parse_add() {
    APtr lhs = parse_mul();
    while (at("+") || at("-")) {
      BinOp op = at("+") ? BinOp::Add : BinOp::Sub;
      next();
      lhs = ast::arith(op, need_num(lhs), need_num(parse_mul()));
    }
    return lhs;
  }

  APtr parse_mul() {
    APtr lhs = parse_unary();
    while (at("*") || at("/") || at("%")) {
      BinOp op = at("*") ? BinOp::Mul : at("/") ? BinOp::Div : BinOp::Mod;
      next();
      lhs = ast::arith(op, need_num(lhs), need_num(parse_unary()));
    }
    return lhs;
  }

  APtr parse_unary() {
    if (at("-")) {
      next();
      APtr x = need_num(parse_unary());
      if (x->kind == AKind::IntLit && x->intValue != std::numeric_limits<std::int64_t>::min())
        return ast::int_lit(-x->intValue);
      if (x->kind == AKind::RealLit) return ast::real_lit(-x->realValue);
      return ast::neg(x);
    }
    if (at("!")) {
      next();
      return ast::lnot(need_bool(parse_unary()));
    }
    return parse_primary();
  }

  APtr maybe_index(APtr arr) {
    if (!at("[")) return arr;
    next();
    if (boundVar_.empty()) fail("array elements may only be indexed by a quantified variable");
    std::string v = ident();
    if (v != boundVar_) fail("index must be the quantified variable '" + boundVar_ + "'");
    expect("]");
    need_array(arr);
    return ast::elem(arr, v);
  }

  APtr parse_array_term() {
    if (at("old")) {
      next();
      expect("(");
      std::string n = ident();
      expect(")");
      return make_old(n);
    }
    if (at("result")) {
      next();
      return make_result();
    }
    return resolve(ident());
  }

  APtr make_old(const std::string& n) {
    if (!scope_.allowOld) type_error("old() is not available at this program point");
    for (const auto& [fn, t] : scope_.fields)
      if (fn == n) return ast::old(n, t);
    type_error("old() needs a field, got '" + n + "'");
  }

  APtr make_result() {
    if (scope_.resultType == Type::Void) type_error("'result' is not available at this program point");
    return ast::result(scope_.resultType);
  }

  APtr resolve(const std::string& n) {
    if (!boundVar_.empty() && n == boundVar_) return ast::qindex(n);
    for (const auto& [fn, t] : scope_.fields)
      if (fn == n) return ast::field(n, t);
    for (const auto& [pn, t] : scope_.params)
      if (pn == n) return ast::param(n, t);
    type_error("unknown identifier '" + n + "'");
  }

  APtr parse_primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Int) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{}) fail("integer literal out of range");
      next();
      return ast::int_lit(v);
    }
    if (t.kind == TokenKind::Real) {
      double v = std::strtod(t.text.c_str(), nullptr);
      next();
      return ast::real_lit(v);
    }
    if (at("(")) {
      next();
      APtr e = parse_implies();
      expect(")");
      return e;
    }
    if (t.kind != TokenKind::Ident) fail("expected an expression");
    if (at("true") || at("false")) {
      bool v = at("true");
      next();
      return ast::bool_lit(v);
    }
    if (at("nan") || at("inf")) {
      double v = at("nan") ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
      next();
      return ast::real_lit(v);
    }
    if (at("old")) return maybe_index(parse_array_term());
    if (at("result")) return maybe_index(parse_array_term());
    std::string word = t.text;
    if (pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == "(") {
      if (word == "len") {
        next();
        expect("(");
        APtr a = need_array(parse_array_term());
        expect(")");
        return ast::len(a);
      }
      if (word == "isnan") {
        next();
        expect("(");
        APtr a = need_num(parse_implies());
        expect(")");
        return ast::isnan(a);
      }
      static constexpr std::pair<std::string_view, AggFn> kAggs[] = {{"sum", AggFn::Sum},
                                                                      {"sumabs", AggFn::SumAbs},
                                                                      {"max", AggFn::Max},
                                                                      {"maxabs", AggFn::MaxAbs},
                                                                      {"min", AggFn::Min}};
      for (auto [name, fn] : kAggs) {
        if (word != name) continue;
        next();
        expect("(");
        APtr a = need_array(parse_array_term());
        expect(")");
        return ast::agg(fn, a);
      }
      fail("unknown function '" + word + "'");
    }
    next();
    return maybe_index(resolve(word));
  }
};

}  // namespace

APtr parse_assertion(std::string_view text, const Scope& scope) { return AParser(text, scope).parse(); }

Assertion make_assertion(const ProgramPoint& point, APtr body) {
  Assertion a;
  a.point = point;
  a.text = print_assertion(body);
  a.body = std::move(body);
  return a;
}

std::string ident_text(const Ident& id) {
  switch (id.kind) {
    case AKind::Old: return "old(" + id.name + ")";
    case AKind::Result: return "result";
    default: return id.name;
  }
}

namespace {
void collect(const APtr& a, std::set<Ident>& out) {
  switch (a->kind) {
    case AKind::Field:
    case AKind::Old:
    case AKind::Param: out.insert(Ident{a->kind, a->name, a->type}); return;
    case AKind::Result: out.insert(Ident{AKind::Result, "result", a->type}); return;
    default:
      for (const auto& k : a->kids) collect(k, out);
  }
}
}  // namespace

std::vector<Ident> free_idents(const APtr& a) {
  std::set<Ident> s;
  collect(a, s);
  return {s.begin(), s.end()};
}

}  // namespace deltaspec
