#include <cmath>
#include <sstream>

#include "deltaspec/minilang.hpp"

namespace deltaspec {

std::string_view binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

std::string_view builtin_name(Builtin fn) {
  switch (fn) {
    case Builtin::Abs: return "abs";
    case Builtin::Max: return "max";
    case Builtin::Min: return "min";
    case Builtin::ToReal: return "toReal";
  }
  return "?";
}

bool is_arith(BinOp op) { return op <= BinOp::Mod; }
bool is_relational(BinOp op) { return op >= BinOp::Lt && op <= BinOp::Ne; }
bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

std::string print_type(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Real: return "real";
    case Type::Bool: return "bool";
    case Type::IntArray: return "int[]";
    case Type::RealArray: return "real[]";
    case Type::Void: return "void";
  }
  return "?";
}

namespace {

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 7;
  if (e.kind != ExprKind::Binary) {
    // A negative literal prints with a leading '-', like a unary minus.
    if ((e.kind == ExprKind::IntLit && e.intValue < 0) ||
        (e.kind == ExprKind::RealLit && std::signbit(e.realValue) && e.text.empty()))
      return 7;
    return 8;
  }
  switch (e.binop) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne: return 3;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    default: return 6;
  }
}

void emit(std::ostream& os, const Expr& e, int minPrec);

void emit_child(std::ostream& os, const Expr& e, int minPrec) {
  if (e.parenthesized || precedence(e) < minPrec) {
    os << '(';
    emit(os, e, 0);
    os << ')';
  } else {
    emit(os, e, minPrec);
  }
}

void emit(std::ostream& os, const Expr& e, int) {
  switch (e.kind) {
    case ExprKind::IntLit:
      if (!e.text.empty()) os << e.text;
      else os << e.intValue;
      break;
    case ExprKind::RealLit:
      os << (e.text.empty() ? format_real(e.realValue) : e.text);
      break;
    case ExprKind::BoolLit: os << (e.boolValue ? "true" : "false"); break;
    case ExprKind::Var: os << e.text; break;
    case ExprKind::Index:
      emit_child(os, e.args[0], 8);
      os << '[';
      emit(os, e.args[1], 0);
      os << ']';
      break;
    case ExprKind::Len:
      os << "len(";
      emit(os, e.args[0], 0);
      os << ')';
      break;
    case ExprKind::NewArray:
      os << "new " << (e.newType == Type::RealArray ? "real" : "int") << '[';
      emit(os, e.args[0], 0);
      os << ']';
      break;
    case ExprKind::Unary:
      os << (e.unop == UnOp::Neg ? "-" : "!");
      emit_child(os, e.args[0], 7);
      break;
    case ExprKind::Binary: {
      int p = precedence(e);
      emit_child(os, e.args[0], p);
      os << ' ' << binop_text(e.binop) << ' ';
      emit_child(os, e.args[1], p + 1);
      break;
    }
    case ExprKind::Call:
      os << builtin_name(e.builtin) << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        emit(os, e.args[i], 0);
      }
      os << ')';
      break;
  }
}

void emit_block(std::ostream& os, const std::vector<Stmt>& body, int indent) {
  os << "{\n";
  for (auto& s : body) os << print_stmt(s, indent + 1);
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << '}';
}

void emit_stmt(std::ostream& os, const Stmt& s, int indent) {
  switch (s.kind) {
    case StmtKind::Local:
      os << "var " << s.name << ": " << print_type(s.declType) << " := " << print_expr(s.exprs[0]) << ';';
      break;
    case StmtKind::Assign: os << s.name << " := " << print_expr(s.exprs[0]) << ';'; break;
    case StmtKind::IndexAssign:
      os << s.name << '[' << print_expr(s.exprs[0]) << "] := " << print_expr(s.exprs[1]) << ';';
      break;
    case StmtKind::If:
      os << "if (" << print_expr(s.exprs[0]) << ") ";
      emit_block(os, s.body, indent);
      if (s.hasElse) {
        os << " else ";
        if (s.elseIsIf && s.elseBody.size() == 1 && s.elseBody[0].kind == StmtKind::If) emit_stmt(os, s.elseBody[0], indent);
        else emit_block(os, s.elseBody, indent);
      }
      break;
    case StmtKind::While:
      os << "while (" << print_expr(s.exprs[0]) << ") ";
      emit_block(os, s.body, indent);
      break;
    case StmtKind::ForIn:
      os << "for " << s.name << " in " << print_expr(s.exprs[0]) << ' ';
      emit_block(os, s.body, indent);
      break;
    case StmtKind::Return:
      os << "return";
      if (!s.exprs.empty()) os << ' ' << print_expr(s.exprs[0]);
      os << ';';
      break;
    case StmtKind::Fail: os << "fail;"; break;
  }
}

void emit_method(std::ostream& os, const Method& m) {
  os << "  ";
  if (m.isCtor) os << kCtorName;
  else os << "method " << m.name;
  os << '(';
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    os << m.params[i].name << ": " << print_type(m.params[i].type);
  }
  os << ')';
  if (!m.isCtor && m.returnType != Type::Void) os << ": " << print_type(m.returnType);
  os << ' ';
  emit_block(os, m.body, 1);
  os << '\n';
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  emit(os, e, 0);
  return os.str();
}

std::string print_stmt(const Stmt& s, int indent) {
  std::ostringstream os;
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  emit_stmt(os, s, indent);
  os << '\n';
  return os.str();
}

std::string print_unit(const Unit& unit) {
  std::ostringstream os;
  os << "class " << unit.name << " {\n";
  auto order = unit.memberOrder;
  if (order.empty()) {
    for (std::size_t i = 0; i < unit.fields.size(); ++i) order.emplace_back(MemberKind::Field, i);
    order.emplace_back(MemberKind::Ctor, 0);
    for (std::size_t i = 0; i < unit.methods.size(); ++i) order.emplace_back(MemberKind::Method, i);
  }
  for (auto [kind, idx] : order) {
    switch (kind) {
      case MemberKind::Field:
        os << "  field " << unit.fields[idx].name << ": " << print_type(unit.fields[idx].type) << ";\n";
        break;
      case MemberKind::Ctor:
        if (!unit.ctor.implicit) emit_method(os, unit.ctor);
        break;
      case MemberKind::Method: emit_method(os, unit.methods[idx]); break;
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace deltaspec
