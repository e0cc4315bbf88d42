#include "deltaspec/mutation.hpp"

#include <functional>
#include <unordered_set>

#include "deltaspec/error.hpp"
#include "deltaspec/minilang.hpp"
#include "deltaspec/observation_index.hpp"

namespace deltaspec {

std::string_view mut_op_name(MutOp op) {
  switch (op) {
    case MutOp::AOR: return "AOR";
    case MutOp::ROR: return "ROR";
    case MutOp::LOR: return "LOR";
    case MutOp::CRP: return "CRP";
    case MutOp::SDL: return "SDL";
    case MutOp::NEG: return "NEG";
  }
  return "?";
}

std::optional<MutOp> mut_op_from_name(std::string_view name) {
  for (MutOp op : all_mut_ops())
    if (mut_op_name(op) == name) return op;
  return std::nullopt;
}

const std::set<MutOp>& all_mut_ops() {
  static const std::set<MutOp> ops{MutOp::AOR, MutOp::ROR, MutOp::LOR, MutOp::CRP, MutOp::SDL, MutOp::NEG};
  return ops;
}

std::string MutantId::text() const {
  return std::string(mut_op_name(op)) + ":" + method + ":" + std::to_string(node) + ":" + std::to_string(variant);
}

std::string_view relevance_name(Relevance r) {
  switch (r) {
    case Relevance::Relevant: return "RELEVANT";
    case Relevance::NotRelevant: return "NOT_RELEVANT";
    case Relevance::UntransplantableInChangedCode: return "UNTRANSPLANTABLE_IN_CHANGED_CODE";
  }
  return "?";
}

std::string_view relevance_mode_name(RelevanceMode m) { return m == RelevanceMode::Literal ? "literal" : "refined"; }

namespace {

constexpr BinOp kArith[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
constexpr BinOp kRel[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};

struct NodeRef {
  Stmt* stmt = nullptr;  // set for statement nodes
  Expr* expr = nullptr;  // set for expression nodes
  std::vector<Stmt>* parent = nullptr;
  std::size_t position = 0;
};

using Visitor = std::function<bool(int, const NodeRef&)>;  // return true to stop

bool walk_expr(Expr& e, int& counter, const Visitor& f) {
  if (f(counter++, NodeRef{nullptr, &e, nullptr, 0})) return true;
  for (auto& a : e.args)
    if (walk_expr(a, counter, f)) return true;
  return false;
}

bool walk_block(std::vector<Stmt>& body, int& counter, const Visitor& f) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    Stmt& s = body[i];
    if (f(counter++, NodeRef{&s, nullptr, &body, i})) return true;
    for (auto& e : s.exprs)
      if (walk_expr(e, counter, f)) return true;
    if (walk_block(s.body, counter, f)) return true;
    if (walk_block(s.elseBody, counter, f)) return true;
  }
  return false;
}

int variant_count(MutOp op, const NodeRef& n) {
  if (n.expr) {
    const Expr& e = *n.expr;
    switch (op) {
      case MutOp::AOR: return e.kind == ExprKind::Binary && is_arith(e.binop) ? 4 : 0;
      case MutOp::ROR: return e.kind == ExprKind::Binary && is_relational(e.binop) ? 5 : 0;
      case MutOp::LOR: return e.kind == ExprKind::Binary && is_logical(e.binop) ? 1 : 0;
      case MutOp::CRP:
        if (e.kind == ExprKind::IntLit || e.kind == ExprKind::RealLit) return 3;
        return e.kind == ExprKind::BoolLit ? 1 : 0;
      default: return 0;
    }
  }
  const Stmt& s = *n.stmt;
  if (op == MutOp::SDL) return s.kind == StmtKind::Assign || s.kind == StmtKind::IndexAssign ? 1 : 0;
  if (op == MutOp::NEG) return s.kind == StmtKind::If || s.kind == StmtKind::While ? 1 : 0;
  return 0;
}

BinOp other_op(const BinOp* table, std::size_t n, BinOp current, int variant) {
  int k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i] == current) continue;
    if (k++ == variant) return table[i];
  }
  return current;
}

// Applies the mutation in place and returns its description.
std::string apply(MutOp op, int variant, const NodeRef& n) {
  if (n.expr) {
    Expr& e = *n.expr;
    switch (op) {
      case MutOp::AOR:
      case MutOp::ROR: {
        BinOp before = e.binop;
        e.binop = op == MutOp::AOR ? other_op(kArith, 5, before, variant) : other_op(kRel, 6, before, variant);
        return std::string(binop_text(before)) + " -> " + std::string(binop_text(e.binop));
      }
      case MutOp::LOR:
        e.binop = e.binop == BinOp::And ? BinOp::Or : BinOp::And;
        return e.binop == BinOp::Or ? "&& -> ||" : "|| -> &&";
      case MutOp::CRP: {
        std::string before = print_expr(e);
        e.text.clear();
        if (e.kind == ExprKind::BoolLit) e.boolValue = !e.boolValue;
        else if (e.kind == ExprKind::IntLit) {
          std::int64_t v = e.intValue;
          std::int64_t r = 0;
          if (variant == 0 && !__builtin_add_overflow(v, 1, &r)) e.intValue = r;
          else if (variant == 1 && !__builtin_sub_overflow(v, 1, &r)) e.intValue = r;
          else if (variant == 2) e.intValue = 0;
        } else {
          double v = e.realValue;
          e.realValue = variant == 0 ? v + 1.0 : variant == 1 ? v - 1.0 : 0.0;
        }
        return before + " -> " + print_expr(e);
      }
      default: return "";
    }
  }
  Stmt& s = *n.stmt;
  if (op == MutOp::SDL) {
    std::string text = print_stmt(s);
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    n.parent->erase(n.parent->begin() + static_cast<std::ptrdiff_t>(n.position));
    return "delete `" + text + "`";
  }
  Expr cond = std::move(s.exprs[0]);
  cond.parenthesized = true;
  Expr neg;
  neg.kind = ExprKind::Unary;
  neg.unop = UnOp::Not;
  neg.loc = cond.loc;
  neg.args.push_back(std::move(cond));
  s.exprs[0] = std::move(neg);
  return "negate condition";
}

Method& method_of(Unit& u, const std::string& name) { return *u.find_method(name); }

// Mutates a copy of `unit`; nullopt when the result is ill-typed.
std::optional<Mutant> build(const Unit& unit, const MutantId& id) {
  Mutant m;
  m.id = id;
  m.unit = unit;
  Method* target = m.unit.find_method(id.method);
  if (!target) return std::nullopt;
  int counter = 0;
  bool applied = false;
  walk_block(target->body, counter, [&](int idx, const NodeRef& n) {
    if (idx != id.node) return false;
    if (id.variant >= variant_count(id.op, n)) return true;
    m.loc = n.stmt ? n.stmt->loc : n.expr->loc;
    m.description = apply(id.op, id.variant, n);
    applied = true;
    return true;
  });
  if (!applied) return std::nullopt;
  if (!check_unit(m.unit).empty()) return std::nullopt;
  return m;
}

}  // namespace

std::vector<Mutant> generate_mutants(const Unit& unit, const std::set<MutOp>& ops) {
  std::vector<Mutant> out;
  std::unordered_set<std::string> seen{print_unit(unit)};
  std::vector<const Method*> methods{&unit.ctor};
  for (const auto& m : unit.methods) methods.push_back(&m);
  for (const Method* m : methods) {
    Unit scratch = unit;
    std::vector<MutantId> ids;
    int counter = 0;
    walk_block(method_of(scratch, m->name).body, counter, [&](int idx, const NodeRef& n) {
      for (MutOp op : all_mut_ops()) {
        if (!ops.count(op)) continue;
        int k = variant_count(op, n);
        for (int v = 0; v < k; ++v) ids.push_back(MutantId{op, m->name, idx, v});
      }
      return false;
    });
    for (const auto& id : ids) {
      auto mut = build(unit, id);
      if (!mut) continue;
      if (!seen.insert(print_unit(mut->unit)).second) continue;
      out.push_back(std::move(*mut));
    }
  }
  return out;
}

std::optional<Mutant> transplant(const Mutant& m, const Unit& source, const Unit& target) {
  const Method* a = source.find_method(m.id.method);
  const Method* b = target.find_method(m.id.method);
  if (!a || !b || a->bodyTokens != b->bodyTokens) return std::nullopt;
  return build(target, m.id);
}

std::vector<RelevanceLabel> label_relevance(const std::vector<Mutant>& postMutants, const Unit& pre, const Unit& post,
                                            const std::vector<TestCase>& shared, RelevanceMode mode,
                                            std::uint64_t stepBudget) {
  if (shared.empty()) throw Error(ErrorCode::NoSharedTests, "relevance labeling needs at least one shared test");
  CommonPoints cp = diff_common_points(pre, post);
  std::vector<std::string> prePlain, postPlain;
  if (mode == RelevanceMode::Refined) {
    for (const auto& t : shared) {
      prePlain.push_back(observable(exec_test(pre, t, stepBudget)));
      postPlain.push_back(observable(exec_test(post, t, stepBudget)));
    }
  }
  std::vector<RelevanceLabel> labels;
  for (const auto& m : postMutants) {
    RelevanceLabel label;
    label.mode = mode;
    std::optional<Mutant> onPre;
    if (!cp.changedMethods.count(m.id.method)) onPre = transplant(m, post, pre);
    if (!onPre) {
      label.value = Relevance::UntransplantableInChangedCode;
      labels.push_back(label);
      continue;
    }
    for (std::size_t i = 0; i < shared.size(); ++i) {
      std::string outPre = observable(exec_test(onPre->unit, shared[i], stepBudget));
      std::string outPost = observable(exec_test(m.unit, shared[i], stepBudget));
      bool relevant = mode == RelevanceMode::Literal
                          ? outPre != outPost
                          : (outPost == postPlain[i]) != (outPre == prePlain[i]);
      if (relevant) {
        label.value = Relevance::Relevant;
        label.witnessTestId = shared[i].seedId;
        break;
      }
    }
    labels.push_back(label);
  }
  return labels;
}

std::size_t KillMatrix::killed_count(std::size_t row) const {
  std::size_t n = 0;
  for (const auto& c : cells[row]) n += c.killed ? 1 : 0;
  return n;
}

bool KillMatrix::column_killed(std::size_t col) const {
  if (killedByImplicitOracle[col]) return true;
  for (const auto& r : cells)
    if (r[col].killed) return true;
  return false;
}

KillMatrix kill_matrix(const std::vector<Assertion>& assertions, const std::vector<Mutant>& mutants, const Unit& unit,
                       const std::vector<TestCase>& tests, const std::vector<ExecutionRecord>& originalRecords,
                       std::uint64_t stepBudget) {
  (void)unit;
  KillMatrix km;
  km.rows = assertions;
  for (const auto& m : mutants) km.cols.push_back(m.id);
  km.cells.assign(assertions.size(), std::vector<KillCell>(mutants.size()));
  km.killedByImplicitOracle.assign(mutants.size(), false);

  std::vector<Truth> truths;
  for (std::size_t c = 0; c < mutants.size(); ++c) {
    const Unit& mu = mutants[c].unit;
    std::vector<ExecutionRecord> runs;
    runs.reserve(tests.size());
    for (const auto& t : tests) runs.push_back(exec_test(mu, t, stepBudget));

    ObservationIndex divergent(mu);
    for (std::size_t ti = 0; ti < tests.size(); ++ti) {
      const ExecutionRecord& orig = originalRecords[ti];
      const ExecutionRecord& run = runs[ti];
      if (run.outcome != Outcome::Completed &&
          (run.outcome != orig.outcome || run.failedCall != orig.failedCall || run.errorKind != orig.errorKind))
        km.killedByImplicitOracle[c] = true;
      for (std::size_t k = 0; k < run.observations.size(); ++k) {
        if (k < orig.observations.size() && same_observation(run.observations[k], orig.observations[k])) continue;
        divergent.add(tests[ti].seedId, run.observations[k]);
      }
    }
    if (divergent.total() == 0) continue;
    TruthCache cache(divergent);
    for (std::size_t r = 0; r < assertions.size(); ++r) {
      const auto& refs = divergent.refs(assertions[r].point);
      if (refs.empty()) continue;
      cache.evaluate(assertions[r], truths);
      for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] == Truth::True) continue;
        km.cells[r][c] = KillCell{true, refs[i].testId};
        break;
      }
    }
  }
  return km;
}

bool replay_kill(const Assertion& a, const Mutant& m, const TestCase& witness, std::uint64_t stepBudget) {
  ExecutionRecord rec = exec_test(m.unit, witness, stepBudget);
  for (const auto& o : rec.observations) {
    if (o.point != a.point) continue;
    if (eval_assertion(a, m.unit, o).truth != Truth::True) return true;
  }
  return false;
}

double mutation_score(const KillMatrix& km) {
  if (km.cols.empty()) return 0.0;
  std::size_t killed = 0;
  for (std::size_t c = 0; c < km.cols.size(); ++c) killed += km.column_killed(c) ? 1 : 0;
  return static_cast<double>(killed) / static_cast<double>(km.cols.size());
}

}  // namespace deltaspec
