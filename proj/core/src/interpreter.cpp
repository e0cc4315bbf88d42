#include "deltaspec/interpreter.hpp"

#include <cmath>
#include <limits>

namespace deltaspec {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "COMPLETED";
    case Outcome::RuntimeError: return "RUNTIME_ERROR";
    case Outcome::BudgetExhausted: return "BUDGET_EXHAUSTED";
  }
  return "?";
}

std::string_view runtime_error_name(RuntimeErrorKind k) {
  switch (k) {
    case RuntimeErrorKind::None: return "None";
    case RuntimeErrorKind::Fail: return "Fail";
    case RuntimeErrorKind::DivByZero: return "DivByZero";
    case RuntimeErrorKind::Overflow: return "Overflow";
    case RuntimeErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case RuntimeErrorKind::NegativeSize: return "NegativeSize";
    case RuntimeErrorKind::BadCall: return "BadCall";
  }
  return "?";
}

namespace {

struct RuntimeFault {
  RuntimeErrorKind kind;
};
struct BudgetFault {};

class Machine {
 public:
  Machine(State& fields, std::uint64_t budget) : fields_(fields), budget_(budget) {}

  // Returns the method result (monostate for void).
  Value invoke(const Method& m, const std::vector<Value>& args) {
    frame_.assign(static_cast<std::size_t>(std::max<int>(m.frameSize, static_cast<int>(args.size()))), Value{});
    for (std::size_t i = 0; i < args.size(); ++i) frame_[i] = args[i];
    Value result;
    exec_block(m.body, result);
    return result;
  }

 private:
  State& fields_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::vector<Value> frame_;

  void tick(std::uint64_t n = 1) {
    steps_ += n;
    if (steps_ > budget_) throw BudgetFault{};
  }

  Value& slot_ref(bool isField, int slot) {
    return isField ? fields_[static_cast<std::size_t>(slot)] : frame_[static_cast<std::size_t>(slot)];
  }

  // true when a return statement ran
  bool exec_block(const std::vector<Stmt>& body, Value& result) {
    for (const auto& s : body)
      if (exec(s, result)) return true;
    return false;
  }

  bool exec(const Stmt& s, Value& result) {
    tick();
    switch (s.kind) {
      case StmtKind::Local:
      case StmtKind::Assign: {
        Value v = eval(s.exprs[0]);
        slot_ref(s.isField, s.slot) = std::move(v);
        return false;
      }
      case StmtKind::IndexAssign: {
        std::int64_t idx = std::get<std::int64_t>(eval(s.exprs[0]));
        Value v = eval(s.exprs[1]);
        Value& target = slot_ref(s.isField, s.slot);
        if (auto* ia = std::get_if<IntArray>(&target)) {
          check_index(idx, ia->size());
          (*ia)[static_cast<std::size_t>(idx)] = std::get<std::int64_t>(v);
        } else {
          auto& ra = std::get<RealArray>(target);
          check_index(idx, ra.size());
          ra[static_cast<std::size_t>(idx)] = std::get<double>(v);
        }
        return false;
      }
      case StmtKind::If:
        if (std::get<bool>(eval(s.exprs[0]))) return exec_block(s.body, result);
        if (s.hasElse) return exec_block(s.elseBody, result);
        return false;
      case StmtKind::While:
        while (std::get<bool>(eval(s.exprs[0]))) {
          tick();
          if (exec_block(s.body, result)) return true;
        }
        return false;
      case StmtKind::ForIn: {
        Value arr = eval(s.exprs[0]);
        auto run = [&](Value elem) {
          tick();
          frame_[static_cast<std::size_t>(s.slot)] = std::move(elem);
          return exec_block(s.body, result);
        };
        if (auto* ia = std::get_if<IntArray>(&arr)) {
          for (auto x : *ia)
            if (run(x)) return true;
        } else {
          for (auto x : std::get<RealArray>(arr))
            if (run(x)) return true;
        }
        return false;
      }
      case StmtKind::Return:
        if (!s.exprs.empty()) result = eval(s.exprs[0]);
        return true;
      case StmtKind::Fail: throw RuntimeFault{RuntimeErrorKind::Fail};
    }
    return false;
  }

  static void check_index(std::int64_t idx, std::size_t n) {
    if (idx < 0 || static_cast<std::uint64_t>(idx) >= n) throw RuntimeFault{RuntimeErrorKind::IndexOutOfBounds};
  }

  static std::int64_t int_arith(BinOp op, std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
      case BinOp::Add: overflow = __builtin_add_overflow(a, b, &r); break;
      case BinOp::Sub: overflow = __builtin_sub_overflow(a, b, &r); break;
      case BinOp::Mul: overflow = __builtin_mul_overflow(a, b, &r); break;
      case BinOp::Div:
      case BinOp::Mod:
        if (b == 0) throw RuntimeFault{RuntimeErrorKind::DivByZero};
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1) throw RuntimeFault{RuntimeErrorKind::Overflow};
        return op == BinOp::Div ? a / b : a % b;
      default: return 0;
    }
    if (overflow) throw RuntimeFault{RuntimeErrorKind::Overflow};
    return r;
  }

  static double real_arith(BinOp op, double a, double b) {
    switch (op) {
      case BinOp::Add: return a + b;
      case BinOp::Sub: return a - b;
      case BinOp::Mul: return a * b;
      case BinOp::Div: return a / b;
      case BinOp::Mod: return std::fmod(a, b);
      default: return 0.0;
    }
  }

  template <typename T>
  static bool compare(BinOp op, T a, T b) {
    switch (op) {
      case BinOp::Lt: return a < b;
      case BinOp::Le: return a <= b;
      case BinOp::Gt: return a > b;
      case BinOp::Ge: return a >= b;
      case BinOp::Eq: return a == b;
      case BinOp::Ne: return a != b;
      default: return false;
    }
  }

  // Avoids copying arrays for `a[i]` and `len(a)` on plain variables.
  const Value* peek_var(const Expr& e) {
    if (e.kind != ExprKind::Var) return nullptr;
    return &slot_ref(e.isField, e.slot);
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return e.intValue;
      case ExprKind::RealLit: return e.realValue;
      case ExprKind::BoolLit: return e.boolValue;
      case ExprKind::Var: return slot_ref(e.isField, e.slot);
      case ExprKind::Index: {
        Value tmp;
        const Value* arr = peek_var(e.args[0]);
        if (!arr) {
          tmp = eval(e.args[0]);
          arr = &tmp;
        }
        std::int64_t idx = std::get<std::int64_t>(eval(e.args[1]));
        if (auto* ia = std::get_if<IntArray>(arr)) {
          check_index(idx, ia->size());
          return (*ia)[static_cast<std::size_t>(idx)];
        }
        const auto& ra = std::get<RealArray>(*arr);
        check_index(idx, ra.size());
        return ra[static_cast<std::size_t>(idx)];
      }
      case ExprKind::Len: {
        Value tmp;
        const Value* arr = peek_var(e.args[0]);
        if (!arr) {
          tmp = eval(e.args[0]);
          arr = &tmp;
        }
        if (auto* ia = std::get_if<IntArray>(arr)) return static_cast<std::int64_t>(ia->size());
        return static_cast<std::int64_t>(std::get<RealArray>(*arr).size());
      }
      case ExprKind::NewArray: {
        std::int64_t n = std::get<std::int64_t>(eval(e.args[0]));
        if (n < 0) throw RuntimeFault{RuntimeErrorKind::NegativeSize};
        tick(static_cast<std::uint64_t>(n));  // allocation is paid per element
        if (e.newType == Type::IntArray) return IntArray(static_cast<std::size_t>(n), 0);
        return RealArray(static_cast<std::size_t>(n), 0.0);
      }
      case ExprKind::Unary: {
        Value v = eval(e.args[0]);
        if (e.unop == UnOp::Not) return !std::get<bool>(v);
        if (auto* i = std::get_if<std::int64_t>(&v)) {
          if (*i == std::numeric_limits<std::int64_t>::min()) throw RuntimeFault{RuntimeErrorKind::Overflow};
          return -*i;
        }
        return -std::get<double>(v);
      }
      case ExprKind::Binary: {
        if (e.binop == BinOp::And) {
          if (!std::get<bool>(eval(e.args[0]))) return false;
          return std::get<bool>(eval(e.args[1]));
        }
        if (e.binop == BinOp::Or) {
          if (std::get<bool>(eval(e.args[0]))) return true;
          return std::get<bool>(eval(e.args[1]));
        }
        Value l = eval(e.args[0]);
        Value r = eval(e.args[1]);
        if (auto* li = std::get_if<std::int64_t>(&l)) {
          std::int64_t ri = std::get<std::int64_t>(r);
          if (is_arith(e.binop)) return int_arith(e.binop, *li, ri);
          return compare(e.binop, *li, ri);
        }
        if (auto* ld = std::get_if<double>(&l)) {
          double rd = std::get<double>(r);
          if (is_arith(e.binop)) return real_arith(e.binop, *ld, rd);
          return compare(e.binop, *ld, rd);
        }
        return compare(e.binop, std::get<bool>(l), std::get<bool>(r));
      }
      case ExprKind::Call: {
        Value a = eval(e.args[0]);
        switch (e.builtin) {
          case Builtin::Abs:
            if (auto* i = std::get_if<std::int64_t>(&a)) {
              if (*i == std::numeric_limits<std::int64_t>::min()) throw RuntimeFault{RuntimeErrorKind::Overflow};
              return *i < 0 ? -*i : *i;
            }
            return std::fabs(std::get<double>(a));
          case Builtin::ToReal: return static_cast<double>(std::get<std::int64_t>(a));
          case Builtin::Max:
          case Builtin::Min: {
            Value b = eval(e.args[1]);
            bool mx = e.builtin == Builtin::Max;
            if (auto* i = std::get_if<std::int64_t>(&a)) {
              std::int64_t j = std::get<std::int64_t>(b);
              return mx ? std::max(*i, j) : std::min(*i, j);
            }
            double x = std::get<double>(a), y = std::get<double>(b);
            return mx ? java_max(x, y) : java_min(x, y);
          }
        }
        return Value{};
      }
    }
    return Value{};
  }
};

bool args_match(const Method& m, const std::vector<Value>& args) {
  if (m.params.size() != args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (type_of(args[i]) != m.params[i].type) return false;
  return true;
}

void append_value17(std::string& out, const Value& v) {
  switch (v.index()) {
    case 2: out += format_real17(std::get<double>(v)); break;
    case 5: {
      out += '[';
      const auto& a = std::get<RealArray>(v);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += format_real17(a[i]);
      }
      out += ']';
      break;
    }
    default: out += format_value(v);
  }
}

}  // namespace

bool test_type_valid(const Unit& unit, const TestCase& test) {
  if (test.calls.empty() || test.calls[0].method != kCtorName) return false;
  for (std::size_t i = 0; i < test.calls.size(); ++i) {
    const auto& c = test.calls[i];
    if (i > 0 && c.method == kCtorName) return false;
    const Method* m = unit.find_method(c.method);
    if (!m || !args_match(*m, c.args)) return false;
  }
  return true;
}

ExecutionRecord exec_test(const Unit& unit, const TestCase& test, std::uint64_t stepBudget) {
  ExecutionRecord rec;
  State fields;
  fields.reserve(unit.fields.size());
  for (const auto& f : unit.fields) fields.push_back(default_value(f.type));

  for (std::size_t ci = 0; ci < test.calls.size(); ++ci) {
    const Call& call = test.calls[ci];
    const Method* m = unit.find_method(call.method);
    CallResult cr;
    bool ctorMisplaced = (ci == 0) != (call.method == kCtorName);
    if (!m || ctorMisplaced || !args_match(*m, call.args)) {
      cr.outcome = Outcome::RuntimeError;
      cr.error = RuntimeErrorKind::BadCall;
    } else {
      State before = fields;
      Machine vm(fields, stepBudget);
      try {
        cr.returnValue = vm.invoke(*m, call.args);
      } catch (const RuntimeFault& f) {
        cr.outcome = Outcome::RuntimeError;
        cr.error = f.kind;
      } catch (const BudgetFault&) {
        cr.outcome = Outcome::BudgetExhausted;
      }
      if (cr.outcome == Outcome::Completed) {
        Observation post;
        post.point = ProgramPoint::post(unit.name, m->name);
        post.preState = before;
        post.postState = fields;
        post.params = call.args;
        post.returnValue = cr.returnValue;
        post.callIndex = static_cast<int>(ci);
        Observation inv;
        inv.point = ProgramPoint::invariant(unit.name);
        inv.preState = std::move(before);
        inv.postState = fields;
        inv.callIndex = static_cast<int>(ci);
        rec.observations.push_back(std::move(post));
        rec.observations.push_back(std::move(inv));
      }
    }
    rec.calls.push_back(cr);
    if (cr.outcome != Outcome::Completed) {
      rec.outcome = cr.outcome;
      rec.errorKind = cr.error;
      rec.failedCall = static_cast<int>(ci);
      break;
    }
  }
  rec.finalState = std::move(fields);
  return rec;
}

std::string observable(const ExecutionRecord& rec) {
  std::string out;
  for (std::size_t i = 0; i < rec.calls.size(); ++i) {
    const auto& c = rec.calls[i];
    out += "call " + std::to_string(i) + " -> ";
    switch (c.outcome) {
      case Outcome::Completed:
        if (std::holds_alternative<std::monostate>(c.returnValue)) out += "ok";
        else append_value17(out, c.returnValue);
        break;
      case Outcome::RuntimeError:
        out += "error ";
        out += runtime_error_name(c.error);
        break;
      case Outcome::BudgetExhausted: out += "budget"; break;
    }
    out += '\n';
  }
  out += "final";
  for (const auto& v : rec.finalState) {
    out += ' ';
    append_value17(out, v);
  }
  out += '\n';
  return out;
}

}  // namespace deltaspec
