#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deltaspec/assertion.hpp"

namespace deltaspec {

inline constexpr int kDefaultMaxNodes = 13;
inline constexpr std::size_t kDefaultCandidates = 50000;

/// Candidate language for one program point, shared by both versions.
struct Grammar {
  Scope scope;
  std::vector<APtr> numericVars;  // fields, old(field), params, result
  std::vector<APtr> boolVars;
  std::vector<APtr> arrayVars;
  std::vector<APtr> derived;  // len() and aggregates over arrayVars
  std::vector<std::int64_t> intLits;
  std::vector<double> realLits;
  int maxNodes = kDefaultMaxNodes;

  const ProgramPoint& point() const { return scope.point; }
  std::vector<std::string> terminals() const;
  std::uint64_t hash() const;
};

/// Throws Error(UnknownPoint) when `point` is missing from both units.
Grammar instantiate_grammar(const Unit& pre, const Unit& post, const ProgramPoint& point,
                            int maxNodes = kDefaultMaxNodes);

struct CandidateSet {
  std::vector<Assertion> items;  // normalized, duplicate-free
  std::uint64_t grammarHash = 0;
  bool exhausted = false;        // the whole derivable space fit in n
  int completeTiers = 0;         // sizes 1..completeTiers are fully present
};

/// Enumerates derivations by increasing size. Whole size tiers are kept while
/// they fit in `n`; the first tier that does not fit is sampled with `seed`.
CandidateSet fuzz_candidates(const Grammar& g, std::uint64_t seed, std::size_t n);

}  // namespace deltaspec
