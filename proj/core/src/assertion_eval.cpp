#include <cmath>
#include <limits>

#include "deltaspec/assertion.hpp"

namespace deltaspec {

std::string_view truth_name(Truth t) {
  switch (t) {
    case Truth::True: return "TRUE";
    case Truth::False: return "FALSE";
    case Truth::Error: return "EVAL_ERROR";
  }
  return "?";
}

std::string_view eval_error_name(EvalError e) {
  switch (e) {
    case EvalError::None: return "None";
    case EvalError::UnboundIdentifier: return "UnboundIdentifier";
    case EvalError::EmptyAggregate: return "EmptyAggregate";
    case EvalError::Arithmetic: return "Arithmetic";
    case EvalError::IndexOutOfBounds: return "IndexOutOfBounds";
  }
  return "?";
}

CompiledAssertion::CompiledAssertion(const APtr& body) : idents_(free_idents(body)) { root_ = build(body); }

int CompiledAssertion::build(const APtr& n) {
  Node c{};
  c.kind = n->kind;
  c.type = n->type;
  c.op = n->op;
  c.agg = n->agg;
  c.intValue = n->intValue;
  c.realValue = n->realValue;
  c.boolValue = n->boolValue;
  c.slot = -1;
  c.kid[0] = c.kid[1] = c.kid[2] = -1;
  if (n->kind == AKind::Field || n->kind == AKind::Old || n->kind == AKind::Param || n->kind == AKind::Result) {
    Ident id{n->kind, n->kind == AKind::Result ? "result" : n->name, n->type};
    for (std::size_t i = 0; i < idents_.size(); ++i)
      if (idents_[i] == id) c.slot = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < n->kids.size() && i < 3; ++i) c.kid[i] = build(n->kids[i]);
  nodes_.push_back(c);
  return static_cast<int>(nodes_.size() - 1);
}

namespace {

using Node = CompiledAssertion::Node;

struct Num {
  EvalError err = EvalError::None;
  bool isInt = true;
  std::int64_t i = 0;
  double r = 0.0;
  double real() const { return isInt ? static_cast<double>(i) : r; }
};

Num num_err(EvalError e) {
  Num n;
  n.err = e;
  return n;
}
Num num_int(std::int64_t v) {
  Num n;
  n.i = v;
  return n;
}
Num num_real(double v) {
  Num n;
  n.isInt = false;
  n.r = v;
  return n;
}

EvalResult truth(bool b) { return {b ? Truth::True : Truth::False, EvalError::None}; }
EvalResult error(EvalError e) { return {Truth::Error, e}; }

EvalResult kleene_and(EvalResult a, EvalResult b) {
  if (a.truth == Truth::False || b.truth == Truth::False) return truth(false);
  if (a.truth == Truth::Error) return a;
  if (b.truth == Truth::Error) return b;
  return truth(true);
}

EvalResult kleene_or(EvalResult a, EvalResult b) {
  if (a.truth == Truth::True || b.truth == Truth::True) return truth(true);
  if (a.truth == Truth::Error) return a;
  if (b.truth == Truth::Error) return b;
  return truth(false);
}

EvalResult kleene_not(EvalResult a) {
  if (a.truth == Truth::Error) return a;
  return truth(a.truth == Truth::False);
}

class Evaluator {
 public:
  Evaluator(const std::vector<Node>& nodes, const std::vector<const Value*>& env) : nodes_(nodes), env_(env) {}

  EvalResult boolean(int idx) {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
      case AKind::BoolLit: return truth(n.boolValue);
      case AKind::Field:
      case AKind::Old:
      case AKind::Param:
      case AKind::Result: {
        const Value* v = lookup(n);
        if (!v) return error(EvalError::UnboundIdentifier);
        const bool* b = std::get_if<bool>(v);
        if (!b) return error(EvalError::UnboundIdentifier);
        return truth(*b);
      }
      case AKind::Not: return kleene_not(boolean(n.kid[0]));
      case AKind::And: return kleene_and(boolean(n.kid[0]), boolean(n.kid[1]));
      case AKind::Or: return kleene_or(boolean(n.kid[0]), boolean(n.kid[1]));
      case AKind::Implies: return kleene_or(kleene_not(boolean(n.kid[0])), boolean(n.kid[1]));
      case AKind::IsNan: {
        Num x = number(n.kid[0]);
        if (x.err != EvalError::None) return error(x.err);
        return truth(!x.isInt && std::isnan(x.r));
      }
      case AKind::Cmp: return compare(n);
      case AKind::Forall:
      case AKind::Exists: return quantify(n);
      default: return error(EvalError::UnboundIdentifier);
    }
  }

 private:
  const std::vector<Node>& nodes_;
  const std::vector<const Value*>& env_;
  std::int64_t q_ = -1;

  const Value* lookup(const Node& n) const {
    if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= env_.size()) return nullptr;
    return env_[static_cast<std::size_t>(n.slot)];
  }

  EvalResult compare(const Node& n) {
    const Node& l = nodes_[static_cast<std::size_t>(n.kid[0])];
    if (l.type == Type::Bool) {
      EvalResult a = boolean(n.kid[0]);
      EvalResult b = boolean(n.kid[1]);
      if (a.truth == Truth::Error) return a;
      if (b.truth == Truth::Error) return b;
      bool eq = a.truth == b.truth;
      return truth(n.op == BinOp::Eq ? eq : !eq);
    }
    Num a = number(n.kid[0]);
    Num b = number(n.kid[1]);
    if (a.err != EvalError::None) return error(a.err);
    if (b.err != EvalError::None) return error(b.err);
    if (a.isInt && b.isInt) return truth(cmp(n.op, a.i, b.i));
    return truth(cmp(n.op, a.real(), b.real()));
  }

  template <typename T>
  static bool cmp(BinOp op, T a, T b) {
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

  const Value* array(int idx, EvalError& err) {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    const Value* v = lookup(n);
    if (!v || !(std::holds_alternative<IntArray>(*v) || std::holds_alternative<RealArray>(*v))) {
      err = EvalError::UnboundIdentifier;
      return nullptr;
    }
    return v;
  }

  static std::size_t array_size(const Value& v) {
    if (auto* ia = std::get_if<IntArray>(&v)) return ia->size();
    return std::get<RealArray>(v).size();
  }

  EvalResult quantify(const Node& n) {
    EvalError err = EvalError::None;
    const Value* arr = array(n.kid[0], err);
    if (!arr) return error(err);
    bool all = n.kind == AKind::Forall;
    EvalResult acc = truth(all);
    std::size_t size = array_size(*arr);
    for (std::size_t k = 0; k < size; ++k) {
      q_ = static_cast<std::int64_t>(k);
      EvalResult r = boolean(n.kid[1]);
      acc = all ? kleene_and(acc, r) : kleene_or(acc, r);
      if (acc.truth == (all ? Truth::False : Truth::True)) break;
    }
    q_ = -1;
    return acc;
  }

  Num number(int idx) {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
      case AKind::IntLit: return num_int(n.intValue);
      case AKind::RealLit: return num_real(n.realValue);
      case AKind::Field:
      case AKind::Old:
      case AKind::Param:
      case AKind::Result: {
        const Value* v = lookup(n);
        if (!v) return num_err(EvalError::UnboundIdentifier);
        if (auto* i = std::get_if<std::int64_t>(v)) return num_int(*i);
        if (auto* d = std::get_if<double>(v)) return num_real(*d);
        return num_err(EvalError::UnboundIdentifier);
      }
      case AKind::QIndex: return num_int(q_);
      case AKind::Elem: {
        EvalError err = EvalError::None;
        const Value* arr = array(n.kid[0], err);
        if (!arr) return num_err(err);
        if (q_ < 0 || static_cast<std::size_t>(q_) >= array_size(*arr)) return num_err(EvalError::IndexOutOfBounds);
        if (auto* ia = std::get_if<IntArray>(arr)) return num_int((*ia)[static_cast<std::size_t>(q_)]);
        return num_real(std::get<RealArray>(*arr)[static_cast<std::size_t>(q_)]);
      }
      case AKind::Len: {
        EvalError err = EvalError::None;
        const Value* arr = array(n.kid[0], err);
        if (!arr) return num_err(err);
        return num_int(static_cast<std::int64_t>(array_size(*arr)));
      }
      case AKind::Agg: return aggregate(n);
      case AKind::Neg: {
        Num x = number(n.kid[0]);
        if (x.err != EvalError::None) return x;
        if (x.isInt) {
          if (x.i == std::numeric_limits<std::int64_t>::min()) return num_err(EvalError::Arithmetic);
          return num_int(-x.i);
        }
        return num_real(-x.r);
      }
      case AKind::Arith: {
        Num a = number(n.kid[0]);
        Num b = number(n.kid[1]);
        if (a.err != EvalError::None) return a;
        if (b.err != EvalError::None) return b;
        if (a.isInt && b.isInt) return int_arith(n.op, a.i, b.i);
        return num_real(real_arith(n.op, a.real(), b.real()));
      }
      default: return num_err(EvalError::UnboundIdentifier);
    }
  }

  static Num int_arith(BinOp op, std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    bool ovf = false;
    switch (op) {
      case BinOp::Add: ovf = __builtin_add_overflow(a, b, &r); break;
      case BinOp::Sub: ovf = __builtin_sub_overflow(a, b, &r); break;
      case BinOp::Mul: ovf = __builtin_mul_overflow(a, b, &r); break;
      case BinOp::Div:
      case BinOp::Mod:
        if (b == 0 || (a == std::numeric_limits<std::int64_t>::min() && b == -1)) ovf = true;
        else r = op == BinOp::Div ? a / b : a % b;
        break;
      default: ovf = true;
    }
    return ovf ? num_err(EvalError::Arithmetic) : num_int(r);
  }

  static double real_arith(BinOp op, double a, double b) {
    switch (op) {
      case BinOp::Add: return a + b;
      case BinOp::Sub: return a - b;
      case BinOp::Mul: return a * b;
      case BinOp::Div: return a / b;
      case BinOp::Mod: return std::fmod(a, b);
      default: return std::numeric_limits<double>::quiet_NaN();
    }
  }

  Num aggregate(const Node& n) {
    EvalError err = EvalError::None;
    const Value* arr = array(n.kid[0], err);
    if (!arr) return num_err(err);
    bool needsElems = n.agg == AggFn::Max || n.agg == AggFn::MaxAbs || n.agg == AggFn::Min;
    if (needsElems && array_size(*arr) == 0) return num_err(EvalError::EmptyAggregate);
    if (auto* ia = std::get_if<IntArray>(arr)) {
      std::int64_t acc = 0;
      bool first = true;
      for (std::int64_t x : *ia) {
        std::int64_t v = x;
        if (n.agg == AggFn::SumAbs || n.agg == AggFn::MaxAbs) {
          if (v == std::numeric_limits<std::int64_t>::min()) return num_err(EvalError::Arithmetic);
          v = v < 0 ? -v : v;
        }
        switch (n.agg) {
          case AggFn::Sum:
          case AggFn::SumAbs:
            if (__builtin_add_overflow(acc, v, &acc)) return num_err(EvalError::Arithmetic);
            break;
          case AggFn::Max:
          case AggFn::MaxAbs: acc = first ? v : std::max(acc, v); break;
          case AggFn::Min: acc = first ? v : std::min(acc, v); break;
        }
        first = false;
      }
      return num_int(acc);
    }
    const auto& ra = std::get<RealArray>(*arr);
    double acc = 0.0;
    bool first = true;
    for (double x : ra) {
      double v = (n.agg == AggFn::SumAbs || n.agg == AggFn::MaxAbs) ? std::fabs(x) : x;
      switch (n.agg) {
        case AggFn::Sum:
        case AggFn::SumAbs: acc += v; break;
        case AggFn::Max:
        case AggFn::MaxAbs: acc = first ? v : java_max(acc, v); break;
        case AggFn::Min: acc = first ? v : java_min(acc, v); break;
      }
      first = false;
    }
    return num_real(acc);
  }
};

}  // namespace

EvalResult CompiledAssertion::eval(const std::vector<const Value*>& env) const {
  return Evaluator(nodes_, env).boolean(root_);
}

Binder::Binder(const Unit& unit, const ProgramPoint& point, const std::vector<Ident>& idents) {
  const Method* m = point.kind == ProgramPoint::Kind::MethodPost ? unit.find_method(point.method) : nullptr;
  for (const auto& id : idents) {
    Source s{id.kind, -1};
    switch (id.kind) {
      case AKind::Field:
      case AKind::Old: {
        if (id.kind == AKind::Old && !m) break;
        int fi = unit.field_index(id.name);
        if (fi >= 0 && unit.fields[static_cast<std::size_t>(fi)].type == id.type) s.index = fi;
        break;
      }
      case AKind::Param:
        if (!m) break;
        for (std::size_t i = 0; i < m->params.size(); ++i)
          if (m->params[i].name == id.name && m->params[i].type == id.type) s.index = static_cast<int>(i);
        break;
      case AKind::Result:
        if (m && m->returnType == id.type) s.index = 0;
        break;
      default: break;
    }
    sources_.push_back(s);
  }
}

void Binder::bind(const Observation& obs, std::vector<const Value*>& env) const {
  env.assign(sources_.size(), nullptr);
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    const Source& s = sources_[i];
    if (s.index < 0) continue;
    auto idx = static_cast<std::size_t>(s.index);
    switch (s.kind) {
      case AKind::Field:
        if (idx < obs.postState.size()) env[i] = &obs.postState[idx];
        break;
      case AKind::Old:
        if (idx < obs.preState.size()) env[i] = &obs.preState[idx];
        break;
      case AKind::Param:
        if (idx < obs.params.size()) env[i] = &obs.params[idx];
        break;
      case AKind::Result:
        if (!std::holds_alternative<std::monostate>(obs.returnValue)) env[i] = &obs.returnValue;
        break;
      default: break;
    }
  }
}

EvalResult eval_assertion(const Assertion& a, const Unit& unit, const Observation& obs) {
  if (obs.point != a.point) return {Truth::Error, EvalError::UnboundIdentifier};
  CompiledAssertion c(a.body);
  Binder b(unit, a.point, c.idents());
  std::vector<const Value*> env;
  b.bind(obs, env);
  return c.eval(env);
}

}  // namespace deltaspec
