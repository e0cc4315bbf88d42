#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "deltaspec/dl_ast.hpp"
#include "deltaspec/error.hpp"

namespace deltaspec {

/// Parses and type-checks one DL class. Throws Error (SyntaxError, TypeError or
/// DuplicateName) carrying every diagnostic collected.
Unit parse_unit(std::string_view source);

/// Static checks on an already-built AST; fills expression types and variable
/// slots. Returns diagnostics (empty when well-typed).
std::vector<Diagnostic> check_unit(Unit& unit);

std::string print_unit(const Unit& unit);
std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_type(Type t);

struct CommonPoints {
  std::vector<ProgramPoint> shared;
  std::set<std::string> changedMethods;  // `init` for the constructor
  std::set<std::string> addedMethods;
  std::set<std::string> removedMethods;
};

/// Throws Error(NameMismatch) when the unit names differ.
CommonPoints diff_common_points(const Unit& pre, const Unit& post);

}  // namespace deltaspec
