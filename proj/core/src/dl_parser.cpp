#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "deltaspec/dl_lexer.hpp"
#include "deltaspec/minilang.hpp"

namespace deltaspec {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Unit parse_unit() {
    Unit u;
    expect_word("class");
    u.name = expect_ident("class name");
    expect("{");
    bool sawCtor = false;
    while (!at("}")) {
      if (at_end()) fail("unexpected end of input, expected '}'");
      if (at("field")) {
        Field f;
        f.loc = peek().loc;
        next();
        f.name = expect_ident("field name");
        expect(":");
        f.type = parse_type();
        expect(";");
        u.memberOrder.emplace_back(MemberKind::Field, u.fields.size());
        u.fields.push_back(std::move(f));
      } else if (at("init")) {
        if (sawCtor) fail("duplicate constructor");
        sawCtor = true;
        u.ctor = parse_method(true);
        u.memberOrder.emplace_back(MemberKind::Ctor, 0);
      } else if (at("method")) {
        u.memberOrder.emplace_back(MemberKind::Method, u.methods.size());
        u.methods.push_back(parse_method(false));
      } else {
        fail("expected 'field', 'init' or 'method'");
      }
    }
    expect("}");
    if (!at_end()) fail("trailing input after class body");
    if (!sawCtor) {
      u.ctor.name = std::string(kCtorName);
      u.ctor.isCtor = true;
      u.ctor.implicit = true;
    }
    return u;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool at(std::string_view text) const {
    const auto& t = peek();
    return (t.kind == TokenKind::Punct || t.kind == TokenKind::Ident) && t.text == text;
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    Diagnostic d;
    d.line = t.loc.line;
    d.column = t.loc.column;
    d.message = msg + (t.kind == TokenKind::End ? " (at end of input)" : " (at '" + t.text + "')");
    throw Error(ErrorCode::SyntaxError, d.message, {d});
  }

  void expect(std::string_view text) {
    if (!at(text)) fail("expected '" + std::string(text) + "'");
    next();
  }
  void expect_word(std::string_view w) { expect(w); }

  std::string expect_ident(const std::string& what) {
    const auto& t = peek();
    if (t.kind != TokenKind::Ident || is_reserved(t.text)) fail("expected " + what);
    return next().text;
  }

  static bool is_reserved(std::string_view w) {
    static constexpr std::string_view kWords[] = {"class", "field", "init", "method", "var",   "if",    "else",
                                                  "while", "for",   "in",   "return", "fail",  "true",  "false",
                                                  "nan",   "inf",   "new",  "len",    "int",   "real",  "bool",
                                                  "abs",   "max",   "min",  "toReal", "old",   "result"};
    for (auto k : kWords)
      if (k == w) return true;
    return false;
  }

  Type parse_type() {
    Type base;
    if (at("int")) base = Type::Int;
    else if (at("real")) base = Type::Real;
    else if (at("bool")) base = Type::Bool;
    else fail("expected a type");
    next();
    if (at("[")) {
      next();
      expect("]");
      if (base == Type::Bool) fail("bool arrays are not supported");
      return array_of(base);
    }
    return base;
  }

  Method parse_method(bool ctor) {
    Method m;
    m.loc = peek().loc;
    m.isCtor = ctor;
    next();  // init | method
    m.name = ctor ? std::string(kCtorName) : expect_ident("method name");
    expect("(");
    if (!at(")")) {
      for (;;) {
        Param p;
        p.name = expect_ident("parameter name");
        expect(":");
        p.type = parse_type();
        m.params.push_back(std::move(p));
        if (!at(",")) break;
        next();
      }
    }
    expect(")");
    if (!ctor && at(":")) {
      next();
      m.returnType = parse_type();
    }
    std::size_t begin = pos_;
    m.body = parse_block();
    for (std::size_t i = begin; i < pos_; ++i) m.bodyTokens.push_back(toks_[i].text);
    return m;
  }

  std::vector<Stmt> parse_block() {
    expect("{");
    std::vector<Stmt> out;
    while (!at("}")) {
      if (at_end()) fail("unexpected end of input, expected '}'");
      out.push_back(parse_stmt());
    }
    expect("}");
    return out;
  }

  Stmt parse_stmt() {
    Stmt s;
    s.loc = peek().loc;
    if (at("var")) {
      next();
      s.kind = StmtKind::Local;
      s.name = expect_ident("variable name");
      expect(":");
      s.declType = parse_type();
      expect(":=");
      s.exprs.push_back(parse_expr());
      expect(";");
    } else if (at("if")) {
      return parse_if();
    } else if (at("while")) {
      next();
      s.kind = StmtKind::While;
      expect("(");
      s.exprs.push_back(parse_expr());
      expect(")");
      s.body = parse_block();
    } else if (at("for")) {
      next();
      s.kind = StmtKind::ForIn;
      s.name = expect_ident("loop variable");
      expect("in");
      s.exprs.push_back(parse_expr());
      s.body = parse_block();
    } else if (at("return")) {
      next();
      s.kind = StmtKind::Return;
      if (!at(";")) s.exprs.push_back(parse_expr());
      expect(";");
    } else if (at("fail")) {
      next();
      s.kind = StmtKind::Fail;
      expect(";");
    } else if (peek().kind == TokenKind::Ident && !is_reserved(peek().text)) {
      s.name = next().text;
      if (at("[")) {
        next();
        s.kind = StmtKind::IndexAssign;
        s.exprs.push_back(parse_expr());
        expect("]");
      } else {
        s.kind = StmtKind::Assign;
      }
      expect(":=");
      s.exprs.push_back(parse_expr());
      expect(";");
    } else {
      fail("expected a statement");
    }
    return s;
  }

  Stmt parse_if() {
    Stmt s;
    s.loc = peek().loc;
    s.kind = StmtKind::If;
    expect("if");
    expect("(");
    s.exprs.push_back(parse_expr());
    expect(")");
    s.body = parse_block();
    if (at("else")) {
      next();
      s.hasElse = true;
      if (at("if")) {
        s.elseIsIf = true;
        s.elseBody.push_back(parse_if());
      } else {
        s.elseBody = parse_block();
      }
    }
    return s;
  }

  Expr make_binary(BinOp op, Expr lhs, Expr rhs, SourceLoc loc) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.binop = op;
    e.loc = loc;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (at("||")) {
      auto loc = next().loc;
      lhs = make_binary(BinOp::Or, std::move(lhs), parse_and(), loc);
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_eq();
    while (at("&&")) {
      auto loc = next().loc;
      lhs = make_binary(BinOp::And, std::move(lhs), parse_eq(), loc);
    }
    return lhs;
  }

  Expr parse_eq() {
    Expr lhs = parse_rel();
    while (at("==") || at("!=")) {
      BinOp op = at("==") ? BinOp::Eq : BinOp::Ne;
      auto loc = next().loc;
      lhs = make_binary(op, std::move(lhs), parse_rel(), loc);
    }
    return lhs;
  }

  Expr parse_rel() {
    Expr lhs = parse_add();
    while (at("<") || at("<=") || at(">") || at(">=")) {
      BinOp op = at("<") ? BinOp::Lt : at("<=") ? BinOp::Le : at(">") ? BinOp::Gt : BinOp::Ge;
      auto loc = next().loc;
      lhs = make_binary(op, std::move(lhs), parse_add(), loc);
    }
    return lhs;
  }

  Expr parse_add() {
    Expr lhs = parse_mul();
    while (at("+") || at("-")) {
      BinOp op = at("+") ? BinOp::Add : BinOp::Sub;
      auto loc = next().loc;
      lhs = make_binary(op, std::move(lhs), parse_mul(), loc);
    }
    return lhs;
  }

  Expr parse_mul() {
    Expr lhs = parse_unary();
    while (at("*") || at("/") || at("%")) {
      BinOp op = at("*") ? BinOp::Mul : at("/") ? BinOp::Div : BinOp::Mod;
      auto loc = next().loc;
      lhs = make_binary(op, std::move(lhs), parse_unary(), loc);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at("-") || at("!")) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.unop = at("-") ? UnOp::Neg : UnOp::Not;
      e.loc = next().loc;
      e.args.push_back(parse_unary());
      return e;
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (at("[")) {
      Expr idx;
      idx.kind = ExprKind::Index;
      idx.loc = next().loc;
      idx.args.push_back(std::move(e));
      idx.args.push_back(parse_expr());
      expect("]");
      e = std::move(idx);
    }
    return e;
  }

  Expr parse_primary() {
    const Token& t = peek();
    Expr e;
    e.loc = t.loc;
    if (t.kind == TokenKind::Int) {
      e.kind = ExprKind::IntLit;
      e.text = t.text;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e.intValue);
      if (ec != std::errc{}) fail("integer literal out of range");
      next();
      return e;
    }
    if (t.kind == TokenKind::Real) {
      e.kind = ExprKind::RealLit;
      e.text = t.text;
      e.realValue = std::strtod(t.text.c_str(), nullptr);
      next();
      return e;
    }
    if (at("(")) {
      next();
      e = parse_expr();
      expect(")");
      e.parenthesized = true;
      return e;
    }
    if (t.kind != TokenKind::Ident) fail("expected an expression");
    if (at("true") || at("false")) {
      e.kind = ExprKind::BoolLit;
      e.boolValue = at("true");
      e.text = t.text;
      next();
      return e;
    }
    if (at("nan") || at("inf")) {
      e.kind = ExprKind::RealLit;
      e.text = t.text;
      e.realValue = at("nan") ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
      next();
      return e;
    }
    if (at("len")) {
      next();
      e.kind = ExprKind::Len;
      expect("(");
      e.args.push_back(parse_expr());
      expect(")");
      return e;
    }
    if (at("new")) {
      next();
      e.kind = ExprKind::NewArray;
      if (at("int")) e.newType = Type::IntArray;
      else if (at("real")) e.newType = Type::RealArray;
      else fail("expected 'int' or 'real' after 'new'");
      next();
      expect("[");
      e.args.push_back(parse_expr());
      expect("]");
      return e;
    }
    if (at("abs") || at("max") || at("min") || at("toReal")) {
      e.kind = ExprKind::Call;
      e.builtin = at("abs") ? Builtin::Abs : at("max") ? Builtin::Max : at("min") ? Builtin::Min : Builtin::ToReal;
      next();
      expect("(");
      if (!at(")")) {
        for (;;) {
          e.args.push_back(parse_expr());
          if (!at(",")) break;
          next();
        }
      }
      expect(")");
      return e;
    }
    if (is_reserved(t.text)) fail("unexpected keyword");
    e.kind = ExprKind::Var;
    e.text = t.text;
    next();
    return e;
  }
};

}  // namespace

Unit parse_unit(std::string_view source) {
  Parser p(source);
  Unit u = p.parse_unit();
  auto diags = check_unit(u);
  if (!diags.empty()) {
    bool dup = false;
    for (auto& d : diags)
      if (d.message.rfind("duplicate", 0) == 0) dup = true;
    throw Error(dup ? ErrorCode::DuplicateName : ErrorCode::TypeError, diags.front().message, diags);
  }
  return u;
}

}  // namespace deltaspec
