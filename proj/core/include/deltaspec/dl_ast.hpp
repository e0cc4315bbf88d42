#pragma once

#include <compare>
#include <optional>
#include <string_view>
#include <cstdint>
#include <string>
#include <vector>

#include "deltaspec/value.hpp"

namespace deltaspec {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp : std::uint8_t { Neg, Not };
enum class Builtin : std::uint8_t { Abs, Max, Min, ToReal };

enum class ExprKind : std::uint8_t { IntLit, RealLit, BoolLit, Var, Index, Len, NewArray, Unary, Binary, Call };

std::string_view binop_text(BinOp op);
std::string_view builtin_name(Builtin fn);
bool is_arith(BinOp op);
bool is_relational(BinOp op);
bool is_logical(BinOp op);

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourceLoc loc;
  Type type = Type::Void;  // filled by the checker

  std::int64_t intValue = 0;
  double realValue = 0.0;
  bool boolValue = false;
  std::string text;  // literal spelling or identifier name

  BinOp binop = BinOp::Add;
  UnOp unop = UnOp::Neg;
  Builtin builtin = Builtin::Abs;
  Type newType = Type::Void;  // element array type for `new`

  bool parenthesized = false;

  // Var resolution (checker): field index or frame slot.
  bool isField = false;
  int slot = -1;

  std::vector<Expr> args;

  friend bool operator==(const Expr& a, const Expr& b);
};

enum class StmtKind : std::uint8_t { Local, Assign, IndexAssign, If, While, ForIn, Return, Fail };

struct Stmt {
  StmtKind kind = StmtKind::Fail;
  SourceLoc loc;
  std::string name;          // Local/Assign/IndexAssign target, ForIn variable
  Type declType = Type::Void;
  bool isField = false;      // target resolution
  int slot = -1;

  // Local: [init]  Assign: [value]  IndexAssign: [index, value]
  // If/While: [cond]  ForIn: [array]  Return: [] or [value]
  std::vector<Expr> exprs;
  std::vector<Stmt> body;
  std::vector<Stmt> elseBody;
  bool hasElse = false;
  bool elseIsIf = false;  // `else if` spelling

  friend bool operator==(const Stmt& a, const Stmt& b);
};

struct Param {
  std::string name;
  Type type = Type::Int;
  friend bool operator==(const Param&, const Param&) = default;
};

inline constexpr std::string_view kCtorName = "init";

struct Method {
  std::string name;
  std::vector<Param> params;
  Type returnType = Type::Void;
  std::vector<Stmt> body;
  std::vector<std::string> bodyTokens;  // token texts of the body as written
  SourceLoc loc;
  bool isCtor = false;
  bool implicit = false;  // constructor synthesized when the source has none
  int frameSize = 0;      // params + locals, assigned by the checker

  bool same_signature(const Method& other) const {
    return params == other.params && returnType == other.returnType;
  }
};

struct Field {
  std::string name;
  Type type = Type::Int;
  SourceLoc loc;
};

enum class MemberKind : std::uint8_t { Field, Ctor, Method };

struct Unit {
  std::string name;
  std::vector<Field> fields;
  Method ctor;
  std::vector<Method> methods;
  std::vector<std::pair<MemberKind, std::size_t>> memberOrder;

  int field_index(std::string_view name) const;
  /// Resolves `init` to the constructor.
  const Method* find_method(std::string_view name) const;
  Method* find_method(std::string_view name);
};

struct ProgramPoint {
  enum class Kind : std::uint8_t { ClassInvariant, MethodPost };
  Kind kind = Kind::ClassInvariant;
  std::string unit;
  std::string method;  // empty for ClassInvariant

  static ProgramPoint invariant(std::string unit) { return {Kind::ClassInvariant, std::move(unit), {}}; }
  static ProgramPoint post(std::string unit, std::string method) {
    return {Kind::MethodPost, std::move(unit), std::move(method)};
  }

  /// `inv` or the method name (`init` for the constructor).
  std::string label() const { return kind == Kind::ClassInvariant ? "inv" : method; }

  friend auto operator<=>(const ProgramPoint&, const ProgramPoint&) = default;
  friend bool operator==(const ProgramPoint&, const ProgramPoint&) = default;
};

/// Invariant point first, then the constructor, then methods in declaration
/// order. Point index i in this list is used as a compact id elsewhere.
std::vector<ProgramPoint> program_points(const Unit& unit);

/// Parses `inv`, `init` or a method name into a point of `unit`.
std::optional<ProgramPoint> point_from_label(const Unit& unit, std::string_view label);

}  // namespace deltaspec
