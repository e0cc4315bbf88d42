#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deltaspec/assertion.hpp"
#include "deltaspec/interpreter.hpp"

namespace deltaspec {

enum class MutOp : std::uint8_t { AOR, ROR, LOR, CRP, SDL, NEG };
std::string_view mut_op_name(MutOp op);
std::optional<MutOp> mut_op_from_name(std::string_view name);
const std::set<MutOp>& all_mut_ops();

struct MutantId {
  MutOp op = MutOp::AOR;
  std::string method;  // `init` for the constructor
  int node = 0;        // preorder index of the mutated node within the method body
  int variant = 0;
  friend auto operator<=>(const MutantId&, const MutantId&) = default;
  friend bool operator==(const MutantId&, const MutantId&) = default;
  /// `AOR:increment:3:1`
  std::string text() const;
};

struct Mutant {
  MutantId id;
  Unit unit;
  std::string description;  // e.g. `+ -> -`
  SourceLoc loc;
};

/// Preorder over statements and expressions of every method; variants in the
/// fixed operator-table order. Ill-typed mutants and mutants that print
/// identically to the original (or to an earlier mutant) are dropped.
std::vector<Mutant> generate_mutants(const Unit& unit, const std::set<MutOp>& ops = all_mut_ops());

/// Applies m's mutation to `target` when the mutated method's body tokens
/// are identical in both units.
std::optional<Mutant> transplant(const Mutant& m, const Unit& source, const Unit& target);

enum class Relevance : std::uint8_t { Relevant, NotRelevant, UntransplantableInChangedCode };
enum class RelevanceMode : std::uint8_t { Literal, Refined };
std::string_view relevance_name(Relevance r);
std::string_view relevance_mode_name(RelevanceMode m);

struct RelevanceLabel {
  Relevance value = Relevance::NotRelevant;
  std::optional<std::uint64_t> witnessTestId;
  RelevanceMode mode = RelevanceMode::Literal;
  /// Relevant for rMS denominators: RELEVANT, or untransplantable when counted.
  bool counts(bool countUntransplantable = true) const {
    return value == Relevance::Relevant ||
           (countUntransplantable && value == Relevance::UntransplantableInChangedCode);
  }
};

/// Throws Error(NoSharedTests) when `shared` is empty.
std::vector<RelevanceLabel> label_relevance(const std::vector<Mutant>& postMutants, const Unit& pre, const Unit& post,
                                            const std::vector<TestCase>& shared, RelevanceMode mode,
                                            std::uint64_t stepBudget = kDefaultStepBudget);

struct KillCell {
  bool killed = false;
  std::uint64_t witnessTestId = 0;
};

struct KillMatrix {
  std::vector<Assertion> rows;
  std::vector<MutantId> cols;
  std::vector<std::vector<KillCell>> cells;  // [row][col]
  std::vector<bool> killedByImplicitOracle;  // per column

  std::size_t killed_count(std::size_t row) const;
  bool column_killed(std::size_t col) const;
};

/// Replays every test on every mutant. A cell is killed when an observation
/// that differs from the original run evaluates to FALSE or EVAL_ERROR; the
/// witness is the lowest such test id. Columns follow `mutants` order.
KillMatrix kill_matrix(const std::vector<Assertion>& assertions, const std::vector<Mutant>& mutants, const Unit& unit,
                       const std::vector<TestCase>& tests, const std::vector<ExecutionRecord>& originalRecords,
                       std::uint64_t stepBudget = kDefaultStepBudget);

/// Re-executes the witness test of a killed cell and reports whether the
/// assertion is falsified (FALSE or EVAL_ERROR) on some observation.
bool replay_kill(const Assertion& a, const Mutant& m, const TestCase& witness,
                 std::uint64_t stepBudget = kDefaultStepBudget);

/// Killed columns (by an assertion or the implicit oracle) over all columns.
double mutation_score(const KillMatrix& km);

}  // namespace deltaspec
