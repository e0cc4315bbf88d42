#include "deltaspec/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"

namespace deltaspec {

namespace {

void harvest_expr(const Expr& e, std::set<std::int64_t>& ints, std::set<double>& reals) {
  if (e.kind == ExprKind::IntLit) ints.insert(e.intValue);
  if (e.kind == ExprKind::RealLit && std::isfinite(e.realValue)) reals.insert(e.realValue);
  if (e.kind == ExprKind::Unary && e.unop == UnOp::Neg && !e.args.empty()) {
    const Expr& x = e.args[0];
    if (x.kind == ExprKind::IntLit) ints.insert(-x.intValue);
    if (x.kind == ExprKind::RealLit && std::isfinite(x.realValue)) reals.insert(-x.realValue);
  }
  for (const auto& a : e.args) harvest_expr(a, ints, reals);
}

void harvest_stmts(const std::vector<Stmt>& body, std::set<std::int64_t>& ints, std::set<double>& reals) {
  for (const auto& s : body) {
    for (const auto& e : s.exprs) harvest_expr(e, ints, reals);
    harvest_stmts(s.body, ints, reals);
    harvest_stmts(s.elseBody, ints, reals);
  }
}

void harvest_unit(const Unit& u, std::set<std::int64_t>& ints, std::set<double>& reals) {
  harvest_stmts(u.ctor.body, ints, reals);
  for (const auto& m : u.methods) harvest_stmts(m.body, ints, reals);
}

}  // namespace

Grammar instantiate_grammar(const Unit& pre, const Unit& post, const ProgramPoint& point, int maxNodes) {
  Grammar g;
  g.scope = make_scope(pre, post, point);
  g.maxNodes = maxNodes;
  bool post_point = point.kind == ProgramPoint::Kind::MethodPost;
  bool withOld = post_point && point.method != kCtorName;

  auto add_var = [&](const APtr& v) {
    if (is_array(v->type)) g.arrayVars.push_back(v);
    else if (v->type == Type::Bool) g.boolVars.push_back(v);
    else g.numericVars.push_back(v);
  };
  for (const auto& [name, t] : g.scope.fields) add_var(ast::field(name, t));
  if (withOld)
    for (const auto& [name, t] : g.scope.fields) add_var(ast::old(name, t));
  for (const auto& [name, t] : g.scope.params) add_var(ast::param(name, t));
  if (g.scope.resultType != Type::Void) add_var(ast::result(g.scope.resultType));

  for (const auto& a : g.arrayVars) {
    if (a->kind == AKind::Old) continue;
    g.derived.push_back(ast::len(a));
    for (AggFn fn : {AggFn::Sum, AggFn::SumAbs, AggFn::Max, AggFn::MaxAbs, AggFn::Min})
      g.derived.push_back(ast::agg(fn, a));
  }

  std::set<std::int64_t> ints{-1, 0, 1};
  std::set<double> reals;
  harvest_unit(pre, ints, reals);
  harvest_unit(post, ints, reals);
  std::set<double> realForms(reals);
  for (auto i : ints) realForms.insert(static_cast<double>(i));
  for (double r : reals)
    if (r == std::floor(r) && std::fabs(r) < 1e15) ints.insert(static_cast<std::int64_t>(r));
  g.intLits.assign(ints.begin(), ints.end());
  for (double r : realForms) {
    if (r == 0.0) r = 0.0;  // folds -0.0
    if (g.realLits.empty() || g.realLits.back() != r) g.realLits.push_back(r);
  }
  return g;
}

std::vector<std::string> Grammar::terminals() const {
  std::vector<std::string> out;
  for (const auto* list : {&numericVars, &boolVars, &arrayVars, &derived})
    for (const auto& v : *list) out.push_back(print_assertion(v));
  for (auto i : intLits) out.push_back(std::to_string(i));
  for (auto r : realLits) out.push_back(format_real(r));
  return out;
}

std::uint64_t Grammar::hash() const {
  std::uint64_t h = fnv1a(point().label());
  for (const auto& t : terminals()) h = fnv1a(t + "\n", h);
  return fnv1a(std::to_string(maxNodes), h);
}

namespace {

constexpr BinOp kCmpOps[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};

using List = std::vector<APtr>;

/// A tier is a union of blocks; each block is a fixed list or a product.
struct Block {
  enum class Kind { Fixed, Compare, Imply } kind = Kind::Fixed;
  const List* a = nullptr;
  const List* b = nullptr;
  List fixed;

  std::size_t size() const {
    switch (kind) {
      case Kind::Fixed: return fixed.size();
      case Kind::Compare: return a->size() * b->size() * 6;
      case Kind::Imply: return a->size() * b->size();
    }
    return 0;
  }

  APtr at(std::size_t i) const {
    switch (kind) {
      case Kind::Fixed: return fixed[i];
      case Kind::Compare: {
        std::size_t op = i % 6;
        i /= 6;
        return ast::cmp(kCmpOps[op], (*a)[i / b->size()], (*b)[i % b->size()]);
      }
      case Kind::Imply: return ast::implies((*a)[i / b->size()], (*b)[i % b->size()]);
    }
    return nullptr;
  }
};

class Fuzzer {
 public:
  Fuzzer(const Grammar& g, std::uint64_t seed, std::size_t n) : g_(g), rng_({seed, fnv1a(g.point().label())}), n_(n) {
    build_terms();
  }

  CandidateSet run() {
    CandidateSet out;
    out.grammarHash = g_.hash();
    maxSize_ = g_.maxNodes;
    kNorm_.assign(static_cast<std::size_t>(maxSize_) + 1, {});
    gNorm_.assign(static_cast<std::size_t>(maxSize_) + 1, {});
    build_guards();
    out.exhausted = true;
    for (int s = 1; s <= maxSize_; ++s) {
      std::vector<Block> consequents = consequent_blocks(s);
      std::vector<Block> implications = implication_blocks(s);
      std::size_t raw = 0;
      for (const auto* bl : {&consequents, &implications})
        for (const auto& b : *bl) raw += b.size();
      std::size_t remaining = n_ - items_.size();
      if (raw <= remaining) {
        for (const auto& b : consequents)
          for (std::size_t i = 0; i < b.size(); ++i) {
            APtr c = accept(b.at(i));
            if (c) kNorm_[static_cast<std::size_t>(s)].push_back(c);
          }
        for (const auto& b : implications)
          for (std::size_t i = 0; i < b.size(); ++i) accept(b.at(i));
        out.completeTiers = s;
        continue;
      }
      out.exhausted = false;
      std::vector<Block> all = std::move(consequents);
      for (auto& b : implications) all.push_back(std::move(b));
      sample(all, raw);
      break;
    }
    for (auto& body : items_) out.items.push_back(make_assertion(g_.point(), body));
    return out;
  }

 private:
  const Grammar& g_;
  Rng rng_;
  std::size_t n_;
  int maxSize_ = 0;
  std::vector<APtr> items_;
  std::unordered_set<std::string> seen_;

  // [type][size]: numeric terms; index 0 = Int, 1 = Real
  std::vector<List> terms_[2];
  std::vector<List> nonLit_[2];
  std::vector<List> plain_[2];    // non-literal terms without a literal operand
  std::vector<List> shifted_[2];  // x + c and x - c
  List lits_[2];
  List vars_[2];
  std::vector<List> kNorm_;
  std::vector<List> gNorm_;
  std::vector<List> cmpCache_;

  static int tix(Type t) { return t == Type::Int ? 0 : 1; }

  static void put(std::vector<List>& by, std::size_t size, APtr x) {
    if (by.size() <= size) by.resize(size + 1);
    by[size].push_back(std::move(x));
  }

  void build_terms() {
    for (auto i : g_.intLits) lits_[0].push_back(ast::int_lit(i));
    for (auto r : g_.realLits) lits_[1].push_back(ast::real_lit(r));
    for (const auto& v : g_.numericVars) vars_[tix(v->type)].push_back(v);
    for (int t = 0; t < 2; ++t) {
      for (const auto& v : vars_[t]) put(nonLit_[t], 1, v);
      for (const auto& l : lits_[t]) put(terms_[t], 1, l);
    }
    for (const auto& d : g_.derived) put(nonLit_[tix(d->type)], 2, d);
    for (int t = 0; t < 2; ++t) {
      std::vector<List> atoms = nonLit_[t];
      std::vector<List> operands = nonLit_[t];
      for (const auto& l : lits_[t]) put(operands, 1, l);
      for (std::size_t sx = 1; sx < atoms.size(); ++sx)
        for (const auto& x : atoms[sx])
          for (std::size_t sy = 1; sy < operands.size(); ++sy)
            for (const auto& y : operands[sy])
              for (BinOp op : {BinOp::Add, BinOp::Sub}) put(nonLit_[t], 1 + sx + sy, ast::arith(op, x, y));
      for (std::size_t s = 1; s < nonLit_[t].size(); ++s)
        for (const auto& x : nonLit_[t][s]) {
          put(terms_[t], s, x);
          bool shifted = x->kind == AKind::Arith && is_literal(x->kids[1]);
          put(shifted ? shifted_[t] : plain_[t], s, x);
        }
    }
  }

  std::string quant_var() const {
    for (const char* cand : {"i", "j", "k", "q"}) {
      bool clash = false;
      for (const auto& [n, _] : g_.scope.fields) clash = clash || n == cand;
      for (const auto& [n, _] : g_.scope.params) clash = clash || n == cand;
      if (!clash) return cand;
    }
    return "idx_";
  }

  List bool_atoms(int s) const {
    List out;
    for (const auto& b : g_.boolVars) {
      if (s == 1) out.push_back(b);
      if (s == 2) out.push_back(ast::lnot(b));
    }
    const auto& reals = nonLit_[1];
    for (std::size_t sx = 1; sx < reals.size(); ++sx) {
      if (sx > 2) break;  // plain variables and derived terms only
      for (const auto& x : reals[sx]) {
        if (static_cast<int>(sx) + 1 == s) out.push_back(ast::isnan(x));
        if (static_cast<int>(sx) + 2 == s) out.push_back(ast::lnot(ast::isnan(x)));
      }
    }
    return out;
  }

  List quantifiers(int s) const {
    List out;
    if (s != 5) return out;
    std::string var = quant_var();
    for (const auto& arr : g_.arrayVars) {
      if (arr->kind == AKind::Old) continue;
      int t = tix(element_type(arr->type));
      APtr el = ast::elem(arr, var);
      List rhs = vars_[t];
      rhs.insert(rhs.end(), lits_[t].begin(), lits_[t].end());
      for (bool all : {true, false})
        for (BinOp op : kCmpOps)
          for (const auto& r : rhs) {
            APtr body = ast::cmp(op, el, r);
            out.push_back(all ? ast::forall(var, arr, body) : ast::exists(var, arr, body));
          }
    }
    return out;
  }

  std::vector<Block> consequent_blocks(int s) const {
    std::vector<Block> out;
    Block fixed;
    fixed.fixed = bool_atoms(s);
    List q = quantifiers(s);
    fixed.fixed.insert(fixed.fixed.end(), q.begin(), q.end());
    if (!fixed.fixed.empty()) out.push_back(std::move(fixed));
    auto product = [&](const std::vector<List>& left, const std::vector<List>& right, int a, int b) {
      if (a >= static_cast<int>(left.size()) || b >= static_cast<int>(right.size())) return;
      const List& L = left[static_cast<std::size_t>(a)];
      const List& R = right[static_cast<std::size_t>(b)];
      if (L.empty() || R.empty()) return;
      Block blk;
      blk.kind = Block::Kind::Compare;
      blk.a = &L;
      blk.b = &R;
      out.push_back(blk);
    };
    for (int t = 0; t < 2; ++t) {
      for (int a = 1; a + 2 <= s; ++a) {
        int b = s - 1 - a;
        // `x + c op y` restates `x op y - c`, and against a literal it restates `x op c'`.
        product(plain_[t], terms_[t], a, b);
        product(shifted_[t], plain_[t], a, b);
      }
    }
    return out;
  }

  void build_guards() {
    std::unordered_set<std::string> seen;
    auto add = [&](APtr raw, std::size_t size) {
      APtr n = normalize(raw);
      if (is_trivial(n) || size >= gNorm_.size()) return;
      if (seen.insert(print_assertion(n)).second) gNorm_[size].push_back(n);
    };
    for (int s = 1; s <= 3 && s <= maxSize_; ++s)
      for (const auto& b : bool_atoms(s)) add(b, static_cast<std::size_t>(s));
    for (int t = 0; t < 2; ++t) {
      List atoms;
      std::vector<std::size_t> sizes;
      for (std::size_t s = 1; s < nonLit_[t].size() && s <= 2; ++s)
        for (const auto& v : nonLit_[t][s]) {
          atoms.push_back(v);
          sizes.push_back(s);
        }
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (BinOp op : kCmpOps) {
          for (const auto& l : lits_[t]) add(ast::cmp(op, atoms[i], l), 2 + sizes[i]);
          for (std::size_t j = 0; j < atoms.size(); ++j)
            if (j != i) add(ast::cmp(op, atoms[i], atoms[j]), 1 + sizes[i] + sizes[j]);
        }
      }
    }
  }

  std::vector<Block> implication_blocks(int s) const {
    std::vector<Block> out;
    for (int a = 1; a + 2 <= s; ++a) {
      int b = s - 1 - a;
      const List& G = gNorm_[static_cast<std::size_t>(a)];
      const List& K = kNorm_[static_cast<std::size_t>(b)];
      if (G.empty() || K.empty()) continue;
      Block blk;
      blk.kind = Block::Kind::Imply;
      blk.a = &G;
      blk.b = &K;
      out.push_back(blk);
    }
    return out;
  }

  // Returns the normalized candidate when it is new.
  APtr accept(const APtr& raw) {
    APtr n = normalize(raw);
    if (is_trivial(n)) return nullptr;
    if (!seen_.insert(print_assertion(n)).second) return nullptr;
    items_.push_back(n);
    return n;
  }

  APtr decode(const std::vector<Block>& blocks, std::size_t idx) const {
    for (const auto& b : blocks) {
      if (idx < b.size()) return b.at(idx);
      idx -= b.size();
    }
    return nullptr;
  }

  void sample(const std::vector<Block>& blocks, std::size_t raw) {
    constexpr std::size_t kShuffleLimit = 4'000'000;
    if (raw <= kShuffleLimit) {
      std::vector<std::uint32_t> order(raw);
      for (std::size_t i = 0; i < raw; ++i) order[i] = static_cast<std::uint32_t>(i);
      rng_.shuffle(order);
      for (auto i : order) {
        if (items_.size() >= n_) return;
        accept(decode(blocks, i));
      }
      return;
    }
    std::unordered_set<std::size_t> tried;
    std::size_t attempts = 0, maxAttempts = 4 * n_ + 1000;
    while (items_.size() < n_ && attempts++ < maxAttempts) {
      std::size_t i = static_cast<std::size_t>(rng_.below(raw));
      if (!tried.insert(i).second) continue;
      accept(decode(blocks, i));
    }
  }
};

}  // namespace

CandidateSet fuzz_candidates(const Grammar& g, std::uint64_t seed, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InputError, "candidate count must be at least 1");
  return Fuzzer(g, seed, n).run();
}

}  // namespace deltaspec
