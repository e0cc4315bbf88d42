#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deltaspec/dl_ast.hpp"
#include "deltaspec/interpreter.hpp"

namespace deltaspec {

enum class AKind : std::uint8_t {
  IntLit,
  RealLit,
  BoolLit,
  Field,
  Old,
  Param,
  Result,
  Elem,    // kids[0] indexed by the enclosing quantifier's variable
  QIndex,  // the quantifier variable itself
  Len,
  Agg,
  Neg,
  Not,
  Arith,
  Cmp,
  And,
  Or,
  Implies,
  IsNan,
  Forall,
  Exists,
};

enum class AggFn : std::uint8_t { Sum, SumAbs, Max, MaxAbs, Min };
std::string_view agg_name(AggFn fn);

struct ANode;
using APtr = std::shared_ptr<const ANode>;

/// Immutable assertion AST node; subtrees are shared between candidates.
struct ANode {
  AKind kind = AKind::BoolLit;
  Type type = Type::Bool;
  std::int64_t intValue = 0;
  double realValue = 0.0;
  bool boolValue = false;
  std::string name;  // identifier, or bound variable for quantifiers
  BinOp op = BinOp::Add;
  AggFn agg = AggFn::Sum;
  std::vector<APtr> kids;
};

namespace ast {
APtr int_lit(std::int64_t v);
APtr real_lit(double v);
APtr bool_lit(bool v);
APtr field(std::string name, Type t);
APtr old(std::string name, Type t);
APtr param(std::string name, Type t);
APtr result(Type t);
APtr elem(APtr array, std::string var);
APtr qindex(std::string var);
APtr len(APtr array);
APtr agg(AggFn fn, APtr array);
APtr neg(APtr x);
APtr lnot(APtr x);
APtr arith(BinOp op, APtr a, APtr b);
APtr cmp(BinOp op, APtr a, APtr b);
APtr land(APtr a, APtr b);
APtr lor(APtr a, APtr b);
APtr implies(APtr a, APtr b);
APtr isnan(APtr x);
APtr forall(std::string var, APtr array, APtr body);
APtr exists(std::string var, APtr array, APtr body);
}  // namespace ast

/// Canonical text; parses back to the same tree.
std::string print_assertion(const APtr& a);

/// Node count; `old(x)` and `a[i]` count as one node.
int assertion_size(const APtr& a);

bool is_literal(const APtr& a);
bool structurally_equal(const APtr& a, const APtr& b);

/// Identifiers visible at a program point.
struct Scope {
  ProgramPoint point;
  std::vector<std::pair<std::string, Type>> fields;
  std::vector<std::pair<std::string, Type>> params;
  Type resultType = Type::Void;
  bool allowOld = false;
};

Scope make_scope(const Unit& unit, const ProgramPoint& point);
/// Union of both versions' identifiers (first declaration wins on a clash).
/// Throws Error(UnknownPoint) when `point` exists in neither unit.
Scope make_scope(const Unit& pre, const Unit& post, const ProgramPoint& point);

/// Throws Error(SyntaxError) or Error(TypeError).
APtr parse_assertion(std::string_view text, const Scope& scope);

struct Assertion {
  ProgramPoint point;
  APtr body;
  std::string text;  // print_assertion(body)

  /// `label: text`, unique across points.
  std::string key() const { return point.label() + ": " + text; }
};

Assertion make_assertion(const ProgramPoint& point, APtr body);

// ---- evaluation ----

enum class Truth : std::uint8_t { True, False, Error };
enum class EvalError : std::uint8_t { None, UnboundIdentifier, EmptyAggregate, Arithmetic, IndexOutOfBounds };

std::string_view truth_name(Truth t);
std::string_view eval_error_name(EvalError e);

struct EvalResult {
  Truth truth = Truth::Error;
  EvalError error = EvalError::None;
};

/// A free identifier: a field, `old` field, parameter or `result`.
struct Ident {
  AKind kind = AKind::Field;
  std::string name;
  Type type = Type::Int;
  friend auto operator<=>(const Ident&, const Ident&) = default;
  friend bool operator==(const Ident&, const Ident&) = default;
};

std::string ident_text(const Ident& id);

/// Sorted, duplicate-free.
std::vector<Ident> free_idents(const APtr& a);

/// Flattened tree with identifiers resolved to environment slots.
class CompiledAssertion {
 public:
  explicit CompiledAssertion(const APtr& body);

  const std::vector<Ident>& idents() const { return idents_; }

  /// env[i] binds idents()[i]; nullptr means unbound.
  EvalResult eval(const std::vector<const Value*>& env) const;

  struct Node {
    AKind kind;
    Type type;
    BinOp op;
    AggFn agg;
    std::int64_t intValue;
    double realValue;
    bool boolValue;
    int slot;
    int kid[3];
  };

 private:
  std::vector<Ident> idents_;
  std::vector<Node> nodes_;
  int root_ = -1;

  int build(const APtr& n);
};

/// Maps identifiers to observation slots for one unit and program point.
class Binder {
 public:
  Binder(const Unit& unit, const ProgramPoint& point, const std::vector<Ident>& idents);
  /// Pointers into `obs`; valid while `obs` lives.
  void bind(const Observation& obs, std::vector<const Value*>& env) const;

 private:
  struct Source {
    AKind kind;
    int index;  // field index or param position; -1 when unbound
  };
  std::vector<Source> sources_;
};

/// One-off evaluation; compiles on every call.
EvalResult eval_assertion(const Assertion& a, const Unit& unit, const Observation& obs);

// ---- normalization ----

/// Canonical rewriting to a fixpoint; semantics-preserving on bound environments.
APtr normalize(const APtr& a);

/// True when the normalized body is a bool literal.
bool is_trivial(const APtr& normalized);

// ---- bounded equivalence ----

struct DomainConfig {
  std::vector<std::int64_t> intDomain{-2, -1, 0, 1, 2};
  std::vector<double> realDomain{-1.5, 0.0, 1.0, std::numeric_limits<double>::quiet_NaN()};
  std::vector<int> arrayLens{0, 1, 2, 3};
  std::uint64_t cap = 10'000'000;
};

struct EquivResult {
  bool equivalent = true;
  std::vector<std::pair<Ident, Value>> witness;  // empty when equivalent
  EvalResult left, right;                         // evaluations at the witness
};

/// Throws Error(DomainTooLarge) when the environment count exceeds d.cap.
EquivResult bounded_equiv(const APtr& a, const APtr& b, const DomainConfig& d = {});

/// Values enumerated for one identifier type.
std::vector<Value> domain_values(Type t, const DomainConfig& d);

}  // namespace deltaspec
