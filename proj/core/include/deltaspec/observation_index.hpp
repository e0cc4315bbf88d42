#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "deltaspec/assertion.hpp"
#include "deltaspec/interpreter.hpp"

namespace deltaspec {

struct ObsRef {
  std::uint64_t testId = 0;
  int callIndex = 0;
  friend auto operator<=>(const ObsRef&, const ObsRef&) = default;
  friend bool operator==(const ObsRef&, const ObsRef&) = default;
};

/// Value equality where NaN equals NaN.
bool same_value(const Value& a, const Value& b);
bool same_observation(const Observation& a, const Observation& b);

/// Observations of a set of runs grouped by program point, ordered by
/// (testId, callIndex) regardless of the order runs were added.
class ObservationIndex {
 public:
  explicit ObservationIndex(const Unit& unit) : unit_(&unit) {}
  ObservationIndex(const Unit& unit, const std::vector<TestCase>& tests, const std::vector<ExecutionRecord>& records);

  /// Keeps pointers into `rec`; the record must outlive the index.
  void add(std::uint64_t testId, const ExecutionRecord& rec);
  void add(std::uint64_t testId, const Observation& obs);

  const Unit& unit() const { return *unit_; }
  const std::vector<const Observation*>& observations(const ProgramPoint& p) const;
  const std::vector<ObsRef>& refs(const ProgramPoint& p) const;
  std::size_t total() const;

 private:
  struct Slot {
    std::vector<ObsRef> refs;
    std::vector<const Observation*> obs;
    bool sorted = true;
  };
  const Unit* unit_;
  mutable std::map<ProgramPoint, Slot> slots_;
  void sort_slot(Slot& s) const;
};

/// Memoized truth vectors of assertion components over an index.
class TruthCache {
 public:
  explicit TruthCache(const ObservationIndex& index) : index_(index) {}

  /// One entry per observation of `point`, aligned with index.observations(point).
  const std::vector<Truth>& truths(const ProgramPoint& point, const APtr& body);

  /// Whole-assertion truths; implications reuse the cached guard and consequent.
  /// `guardTrue` (optional) receives whether the guard held, or true for non-implications.
  void evaluate(const Assertion& a, std::vector<Truth>& out, std::vector<bool>* guardTrue = nullptr);

 private:
  const ObservationIndex& index_;
  struct Entry {
    APtr keepAlive;
    std::vector<Truth> truths;
  };
  std::map<ProgramPoint, std::unordered_map<const ANode*, Entry>> cache_;
};

}  // namespace deltaspec
