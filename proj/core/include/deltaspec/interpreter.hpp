#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deltaspec/dl_ast.hpp"

namespace deltaspec {

inline constexpr std::uint64_t kDefaultStepBudget = 100000;

struct Call {
  std::string method;  // `init` for the constructor
  std::vector<Value> args;
  friend bool operator==(const Call&, const Call&) = default;
};

struct TestCase {
  std::uint64_t seedId = 0;
  std::vector<Call> calls;  // calls[0] is the constructor
};

/// Field values in declaration order.
using State = std::vector<Value>;

struct Observation {
  ProgramPoint point;
  State preState;
  State postState;
  std::vector<Value> params;  // in declaration order of the method's parameters
  Value returnValue;          // monostate when void
  int callIndex = 0;
};

enum class Outcome : std::uint8_t { Completed, RuntimeError, BudgetExhausted };
enum class RuntimeErrorKind : std::uint8_t { None, Fail, DivByZero, Overflow, IndexOutOfBounds, NegativeSize, BadCall };

std::string_view outcome_name(Outcome o);
std::string_view runtime_error_name(RuntimeErrorKind k);

struct CallResult {
  Outcome outcome = Outcome::Completed;
  RuntimeErrorKind error = RuntimeErrorKind::None;
  Value returnValue;
};

struct ExecutionRecord {
  std::vector<Observation> observations;
  Outcome outcome = Outcome::Completed;
  RuntimeErrorKind errorKind = RuntimeErrorKind::None;
  int failedCall = -1;  // index of the abnormal call, -1 when completed
  std::vector<CallResult> calls;
  State finalState;
};

/// Runs every call of `test` in order, stopping at the first abnormal call.
/// The budget applies to each call separately.
ExecutionRecord exec_test(const Unit& unit, const TestCase& test, std::uint64_t stepBudget = kDefaultStepBudget);

/// Canonical text of the per-call results and the final state.
std::string observable(const ExecutionRecord& rec);

/// True when every call names a method of `unit` with type-matching arguments
/// and the first call is the constructor.
bool test_type_valid(const Unit& unit, const TestCase& test);

}  // namespace deltaspec
