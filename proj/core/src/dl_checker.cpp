#include <algorithm>
#include <map>
#include <set>

#include "deltaspec/minilang.hpp"

namespace deltaspec {

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args != b.args) return false;
  switch (a.kind) {
    case ExprKind::IntLit: return a.intValue == b.intValue;
    case ExprKind::RealLit: {
      bool an = a.realValue != a.realValue, bn = b.realValue != b.realValue;
      return an == bn && (an || a.realValue == b.realValue);
    }
    case ExprKind::BoolLit: return a.boolValue == b.boolValue;
    case ExprKind::Var: return a.text == b.text;
    case ExprKind::NewArray: return a.newType == b.newType;
    case ExprKind::Unary: return a.unop == b.unop;
    case ExprKind::Binary: return a.binop == b.binop;
    case ExprKind::Call: return a.builtin == b.builtin;
    default: return true;
  }
}

bool operator==(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.name == b.name && a.declType == b.declType && a.exprs == b.exprs &&
         a.body == b.body && a.elseBody == b.elseBody && a.hasElse == b.hasElse;
}

int Unit::field_index(std::string_view n) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == n) return static_cast<int>(i);
  return -1;
}

const Method* Unit::find_method(std::string_view n) const {
  if (n == kCtorName) return &ctor;
  for (auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

Method* Unit::find_method(std::string_view n) {
  return const_cast<Method*>(static_cast<const Unit*>(this)->find_method(n));
}

std::vector<ProgramPoint> program_points(const Unit& unit) {
  std::vector<ProgramPoint> pts;
  pts.push_back(ProgramPoint::invariant(unit.name));
  pts.push_back(ProgramPoint::post(unit.name, std::string(kCtorName)));
  for (auto& m : unit.methods) pts.push_back(ProgramPoint::post(unit.name, m.name));
  return pts;
}

std::optional<ProgramPoint> point_from_label(const Unit& unit, std::string_view label) {
  if (label == "inv") return ProgramPoint::invariant(unit.name);
  if (unit.find_method(label)) return ProgramPoint::post(unit.name, std::string(label));
  return std::nullopt;
}

namespace {

class Checker {
 public:
  explicit Checker(Unit& u) : unit_(u) {}

  std::vector<Diagnostic> run() {
    std::set<std::string> names;
    for (auto& f : unit_.fields) {
      if (!names.insert(f.name).second) error(f.loc, "duplicate name '" + f.name + "'");
    }
    std::set<std::string> methodNames;
    for (auto& m : unit_.methods) {
      if (m.name == kCtorName) error(m.loc, "'init' is reserved for the constructor");
      if (!methodNames.insert(m.name).second || names.count(m.name))
        error(m.loc, "duplicate name '" + m.name + "'");
    }
    for (auto& m : unit_.methods) names.insert(m.name);
    check_method(unit_.ctor, names);
    for (auto& m : unit_.methods) check_method(m, names);
    return std::move(diags_);
  }

 private:
  struct Local {
    std::string name;
    Type type;
    int slot;
  };

  Unit& unit_;
  std::vector<Diagnostic> diags_;
  std::vector<Local> scope_;
  int nextSlot_ = 0;
  int maxSlot_ = 0;
  Method* method_ = nullptr;

  void error(SourceLoc loc, std::string msg) {
    Diagnostic d;
    d.line = loc.line;
    d.column = loc.column;
    d.message = std::move(msg);
    diags_.push_back(std::move(d));
  }

  void check_method(Method& m, const std::set<std::string>& memberNames) {
    method_ = &m;
    scope_.clear();
    nextSlot_ = 0;
    maxSlot_ = 0;
    std::set<std::string> seen;
    for (auto& p : m.params) {
      if (!seen.insert(p.name).second || memberNames.count(p.name))
        error(m.loc, "duplicate name '" + p.name + "' in parameters of '" + m.name + "'");
      declare(p.name, p.type);
    }
    check_block(m.body);
    if (m.returnType != Type::Void && !always_exits(m.body))
      error(m.loc, "method '" + m.name + "' may finish without returning a value");
    m.frameSize = maxSlot_;
  }

  int declare(const std::string& name, Type t) {
    int slot = nextSlot_++;
    maxSlot_ = std::max(maxSlot_, nextSlot_);
    scope_.push_back({name, t, slot});
    return slot;
  }

  static bool always_exits(const std::vector<Stmt>& body) {
    for (auto& s : body) {
      if (s.kind == StmtKind::Return || s.kind == StmtKind::Fail) return true;
      if (s.kind == StmtKind::If && s.hasElse && always_exits(s.body) && always_exits(s.elseBody)) return true;
    }
    return false;
  }

  void check_block(std::vector<Stmt>& body) {
    auto mark = scope_.size();
    auto slotMark = nextSlot_;
    for (auto& s : body) check_stmt(s);
    scope_.resize(mark);
    nextSlot_ = slotMark;
  }

  // Returns false when the name is unknown.
  bool resolve(const std::string& name, Type& type, bool& isField, int& slot) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) {
        type = it->type;
        isField = false;
        slot = it->slot;
        return true;
      }
    }
    int fi = unit_.field_index(name);
    if (fi >= 0) {
      type = unit_.fields[fi].type;
      isField = true;
      slot = fi;
      return true;
    }
    return false;
  }

  void check_stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::Local: {
        Type t = check_expr(s.exprs[0]);
        if (t != Type::Void && t != s.declType)
          error(s.loc, "cannot initialize '" + s.name + "' of type " + print_type(s.declType) + " with " + print_type(t));
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->name == s.name) error(s.loc, "duplicate name '" + s.name + "'");
        if (unit_.field_index(s.name) >= 0) error(s.loc, "duplicate name '" + s.name + "' shadows a field");
        s.slot = declare(s.name, s.declType);
        s.isField = false;
        break;
      }
      case StmtKind::Assign:
      case StmtKind::IndexAssign: {
        Type target;
        if (!resolve(s.name, target, s.isField, s.slot)) {
          error(s.loc, "unknown identifier '" + s.name + "'");
          for (auto& e : s.exprs) check_expr(e);
          break;
        }
        if (s.kind == StmtKind::IndexAssign) {
          Type it = check_expr(s.exprs[0]);
          if (!is_array(target)) error(s.loc, "'" + s.name + "' is not an array");
          else target = element_type(target);
          if (it != Type::Void && it != Type::Int) error(s.exprs[0].loc, "array index must be int");
        }
        Type vt = check_expr(s.exprs.back());
        if (vt != Type::Void && target != Type::Void && vt != target)
          error(s.loc, "cannot assign " + print_type(vt) + " to '" + s.name + "' of type " + print_type(target));
        break;
      }
      case StmtKind::If:
      case StmtKind::While: {
        Type c = check_expr(s.exprs[0]);
        if (c != Type::Void && c != Type::Bool) error(s.exprs[0].loc, "condition must be bool");
        check_block(s.body);
        if (s.hasElse) check_block(s.elseBody);
        break;
      }
      case StmtKind::ForIn: {
        Type a = check_expr(s.exprs[0]);
        Type elem = Type::Int;
        if (a != Type::Void && !is_array(a)) error(s.exprs[0].loc, "for-in needs an array");
        else if (a != Type::Void) elem = element_type(a);
        auto mark = scope_.size();
        auto slotMark = nextSlot_;
        s.declType = elem;
        s.slot = declare(s.name, elem);
        check_block(s.body);
        scope_.resize(mark);
        nextSlot_ = slotMark;
        break;
      }
      case StmtKind::Return: {
        if (s.exprs.empty()) {
          if (method_->returnType != Type::Void) error(s.loc, "missing return value");
        } else {
          Type t = check_expr(s.exprs[0]);
          if (method_->returnType == Type::Void) error(s.loc, "return with a value in a void method");
          else if (t != Type::Void && t != method_->returnType)
            error(s.loc, "return type mismatch: expected " + print_type(method_->returnType) + ", got " + print_type(t));
        }
        break;
      }
      case StmtKind::Fail: break;
    }
  }

  // Void signals an already-reported error.
  Type check_expr(Expr& e) {
    e.type = infer(e);
    return e.type;
  }

  Type infer(Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return Type::Int;
      case ExprKind::RealLit: return Type::Real;
      case ExprKind::BoolLit: return Type::Bool;
      case ExprKind::Var: {
        Type t;
        if (!resolve(e.text, t, e.isField, e.slot)) {
          error(e.loc, "unknown identifier '" + e.text + "'");
          return Type::Void;
        }
        return t;
      }
      case ExprKind::Index: {
        Type a = check_expr(e.args[0]);
        Type i = check_expr(e.args[1]);
        if (i != Type::Void && i != Type::Int) error(e.args[1].loc, "array index must be int");
        if (a == Type::Void) return Type::Void;
        if (!is_array(a)) {
          error(e.loc, "indexing a non-array of type " + print_type(a));
          return Type::Void;
        }
        return element_type(a);
      }
      case ExprKind::Len: {
        Type a = check_expr(e.args[0]);
        if (a != Type::Void && !is_array(a)) error(e.loc, "len() needs an array");
        return Type::Int;
      }
      case ExprKind::NewArray: {
        Type n = check_expr(e.args[0]);
        if (n != Type::Void && n != Type::Int) error(e.loc, "array size must be int");
        return e.newType;
      }
      case ExprKind::Unary: {
        Type t = check_expr(e.args[0]);
        if (t == Type::Void) return t;
        if (e.unop == UnOp::Neg && !is_numeric(t)) {
          error(e.loc, "unary '-' needs a number");
          return Type::Void;
        }
        if (e.unop == UnOp::Not && t != Type::Bool) {
          error(e.loc, "'!' needs a bool");
          return Type::Void;
        }
        return t;
      }
      case ExprKind::Binary: {
        Type l = check_expr(e.args[0]);
        Type r = check_expr(e.args[1]);
        if (l == Type::Void || r == Type::Void) return Type::Void;
        std::string op(binop_text(e.binop));
        if (is_arith(e.binop)) {
          if (!is_numeric(l) || l != r) {
            error(e.loc, "operator '" + op + "' needs two ints or two reals, got " + print_type(l) + " and " + print_type(r));
            return Type::Void;
          }
          return l;
        }
        if (is_logical(e.binop)) {
          if (l != Type::Bool || r != Type::Bool) {
            error(e.loc, "operator '" + op + "' needs bools");
            return Type::Void;
          }
          return Type::Bool;
        }
        bool eq = e.binop == BinOp::Eq || e.binop == BinOp::Ne;
        if (l != r || (!is_numeric(l) && !(eq && l == Type::Bool))) {
          error(e.loc, "cannot compare " + print_type(l) + " and " + print_type(r) + " with '" + op + "'");
          return Type::Void;
        }
        return Type::Bool;
      }
      case ExprKind::Call: {
        std::vector<Type> ts;
        for (auto& a : e.args) ts.push_back(check_expr(a));
        for (auto t : ts)
          if (t == Type::Void) return Type::Void;
        std::string name(builtin_name(e.builtin));
        switch (e.builtin) {
          case Builtin::Abs:
            if (ts.size() != 1 || !is_numeric(ts[0])) break;
            return ts[0];
          case Builtin::Max:
          case Builtin::Min:
            if (ts.size() != 2 || !is_numeric(ts[0]) || ts[0] != ts[1]) break;
            return ts[0];
          case Builtin::ToReal:
            if (ts.size() != 1 || ts[0] != Type::Int) break;
            return Type::Real;
        }
        error(e.loc, "bad arguments to '" + name + "'");
        return Type::Void;
      }
    }
    return Type::Void;
  }
};

}  // namespace

std::vector<Diagnostic> check_unit(Unit& unit) { return Checker(unit).run(); }

}  // namespace deltaspec
