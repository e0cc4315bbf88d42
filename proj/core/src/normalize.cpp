#include <cmath>
#include <limits>

#include "deltaspec/assertion.hpp"

namespace deltaspec {

namespace {

bool is_num_lit(const APtr& a) { return a->kind == AKind::IntLit || a->kind == AKind::RealLit; }
double lit_real(const APtr& a) { return a->kind == AKind::IntLit ? static_cast<double>(a->intValue) : a->realValue; }

bool is_ident(const APtr& a) {
  return a->kind == AKind::Field || a->kind == AKind::Old || a->kind == AKind::Param || a->kind == AKind::Result;
}

std::string key(const APtr& a) { return print_assertion(a); }

APtr fold_arith(BinOp op, const APtr& a, const APtr& b) {
  if (a->kind == AKind::IntLit && b->kind == AKind::IntLit) {
    std::int64_t x = a->intValue, y = b->intValue, r = 0;
    bool ovf = false;
    switch (op) {
      case BinOp::Add: ovf = __builtin_add_overflow(x, y, &r); break;
      case BinOp::Sub: ovf = __builtin_sub_overflow(x, y, &r); break;
      case BinOp::Mul: ovf = __builtin_mul_overflow(x, y, &r); break;
      case BinOp::Div:
      case BinOp::Mod:
        if (y == 0 || (x == std::numeric_limits<std::int64_t>::min() && y == -1)) ovf = true;
        else r = op == BinOp::Div ? x / y : x % y;
        break;
      default: ovf = true;
    }
    return ovf ? nullptr : ast::int_lit(r);
  }
  double x = lit_real(a), y = lit_real(b);
  switch (op) {
    case BinOp::Add: return ast::real_lit(x + y);
    case BinOp::Sub: return ast::real_lit(x - y);
    case BinOp::Mul: return ast::real_lit(x * y);
    case BinOp::Div: return ast::real_lit(x / y);
    case BinOp::Mod: return ast::real_lit(std::fmod(x, y));
    default: return nullptr;
  }
}

bool fold_cmp(BinOp op, const APtr& a, const APtr& b) {
  auto test = [op](auto x, auto y) {
    switch (op) {
      case BinOp::Lt: return x < y;
      case BinOp::Le: return x <= y;
      case BinOp::Gt: return x > y;
      case BinOp::Ge: return x >= y;
      case BinOp::Eq: return x == y;
      case BinOp::Ne: return x != y;
      default: return false;
    }
  };
  if (a->kind == AKind::BoolLit) return test(a->boolValue, b->boolValue);
  if (a->kind == AKind::IntLit && b->kind == AKind::IntLit) return test(a->intValue, b->intValue);
  return test(lit_real(a), lit_real(b));
}

APtr rewrite(const APtr& n);

APtr sorted_pair(const APtr& n, APtr a, APtr b, auto rebuild) {
  if (key(b) < key(a)) std::swap(a, b);
  if (a == n->kids[0] && b == n->kids[1]) return n;
  return rebuild(std::move(a), std::move(b));
}

APtr rewrite_cmp(const APtr& n, const APtr& a, const APtr& b) {
  BinOp op = n->op;
  if (op == BinOp::Gt) return ast::cmp(BinOp::Lt, b, a);
  if (op == BinOp::Ge) return ast::cmp(BinOp::Le, b, a);
  if (is_literal(a) && is_literal(b)) return ast::bool_lit(fold_cmp(op, a, b));

  bool ints = a->type == Type::Int && b->type == Type::Int;
  if (ints || a->type == Type::Bool) {
    if (is_ident(a) && is_ident(b) && structurally_equal(a, b)) return ast::bool_lit(op == BinOp::Eq || op == BinOp::Le);
  }
  if (ints && op == BinOp::Lt) {
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (b->kind == AKind::IntLit && b->intValue != lo) return ast::cmp(BinOp::Le, a, ast::int_lit(b->intValue - 1));
    if (a->kind == AKind::IntLit && a->intValue != hi) return ast::cmp(BinOp::Le, ast::int_lit(a->intValue + 1), b);
  }
  if (op == BinOp::Eq || op == BinOp::Ne)
    return sorted_pair(n, a, b, [op](APtr x, APtr y) { return ast::cmp(op, std::move(x), std::move(y)); });
  if (a == n->kids[0] && b == n->kids[1]) return n;
  return ast::cmp(op, a, b);
}

APtr rewrite_not(const APtr& n, const APtr& x) {
  if (x->kind == AKind::BoolLit) return ast::bool_lit(!x->boolValue);
  if (x->kind == AKind::Not) return x->kids[0];
  if (x->kind == AKind::Cmp) {
    const APtr& l = x->kids[0];
    const APtr& r = x->kids[1];
    if (x->op == BinOp::Eq) return ast::cmp(BinOp::Ne, l, r);
    if (x->op == BinOp::Ne) return ast::cmp(BinOp::Eq, l, r);
    if (l->type == Type::Int && r->type == Type::Int) {
      switch (x->op) {
        case BinOp::Lt: return ast::cmp(BinOp::Le, r, l);
        case BinOp::Le: return ast::cmp(BinOp::Lt, r, l);
        case BinOp::Gt: return ast::cmp(BinOp::Le, l, r);
        case BinOp::Ge: return ast::cmp(BinOp::Lt, l, r);
        default: break;
      }
    }
  }
  if (x == n->kids[0]) return n;
  return ast::lnot(x);
}

APtr rewrite_logic(const APtr& n, const APtr& a, const APtr& b) {
  bool isAnd = n->kind == AKind::And;
  for (const auto* p : {&a, &b}) {
    const APtr& lit = *p;
    const APtr& other = p == &a ? b : a;
    if (lit->kind != AKind::BoolLit) continue;
    if (isAnd) return lit->boolValue ? other : lit;
    return lit->boolValue ? lit : other;
  }
  if (structurally_equal(a, b)) return a;
  return sorted_pair(n, a, b, [isAnd](APtr x, APtr y) {
    return isAnd ? ast::land(std::move(x), std::move(y)) : ast::lor(std::move(x), std::move(y));
  });
}

APtr rewrite(const APtr& n) {
  std::vector<APtr> kids;
  bool changed = false;
  for (const auto& k : n->kids) {
    kids.push_back(rewrite(k));
    changed = changed || kids.back() != k;
  }
  switch (n->kind) {
    case AKind::Neg: {
      const APtr& x = kids[0];
      if (x->kind == AKind::IntLit && x->intValue != std::numeric_limits<std::int64_t>::min())
        return ast::int_lit(-x->intValue);
      if (x->kind == AKind::RealLit) return ast::real_lit(-x->realValue);
      if (x->kind == AKind::Neg && x->type == Type::Real) return x->kids[0];
      return changed ? ast::neg(x) : n;
    }
    case AKind::Not: return rewrite_not(n, kids[0]);
    case AKind::Arith: {
      if (is_num_lit(kids[0]) && is_num_lit(kids[1])) {
        if (APtr f = fold_arith(n->op, kids[0], kids[1])) return f;
      }
      if (n->op == BinOp::Add || n->op == BinOp::Mul) {
        BinOp op = n->op;
        APtr base = changed ? ast::arith(op, kids[0], kids[1]) : n;
        return sorted_pair(base, kids[0], kids[1], [op](APtr x, APtr y) { return ast::arith(op, std::move(x), std::move(y)); });
      }
      return changed ? ast::arith(n->op, kids[0], kids[1]) : n;
    }
    case AKind::Cmp: {
      APtr base = changed ? ast::cmp(n->op, kids[0], kids[1]) : n;
      return rewrite_cmp(base, kids[0], kids[1]);
    }
    case AKind::And:
    case AKind::Or: {
      APtr base = changed ? (n->kind == AKind::And ? ast::land(kids[0], kids[1]) : ast::lor(kids[0], kids[1])) : n;
      return rewrite_logic(base, kids[0], kids[1]);
    }
    case AKind::Implies: {
      const APtr& g = kids[0];
      const APtr& k = kids[1];
      if (g->kind == AKind::BoolLit) return g->boolValue ? k : ast::bool_lit(true);
      if (k->kind == AKind::BoolLit) return k->boolValue ? ast::bool_lit(true) : ast::lnot(g);
      return changed ? ast::implies(g, k) : n;
    }
    case AKind::IsNan: {
      const APtr& x = kids[0];
      if (x->kind == AKind::IntLit) return ast::bool_lit(false);
      if (x->kind == AKind::RealLit) return ast::bool_lit(std::isnan(x->realValue));
      return changed ? ast::isnan(x) : n;
    }
    case AKind::Forall:
    case AKind::Exists: {
      const APtr& body = kids[1];
      bool all = n->kind == AKind::Forall;
      if (body->kind == AKind::BoolLit && body->boolValue == all) return body;
      if (!changed) return n;
      return all ? ast::forall(n->name, kids[0], body) : ast::exists(n->name, kids[0], body);
    }
    default: return n;
  }
}

}  // namespace

APtr normalize(const APtr& a) {
  APtr cur = a;
  std::string k = key(cur);
  for (int i = 0; i < 32; ++i) {
    APtr nxt = rewrite(cur);
    std::string nk = key(nxt);
    if (nk == k) return nxt;
    cur = std::move(nxt);
    k = std::move(nk);
  }
  return cur;
}

bool is_trivial(const APtr& normalized) { return normalized->kind == AKind::BoolLit; }

}  // namespace deltaspec
