#pragma once

#include <map>
#include <string>
#include <vector>

#include "deltaspec/inference.hpp"

namespace deltaspec {

enum class DeltaMode : std::uint8_t { Paper, Strict };
std::string_view delta_mode_name(DeltaMode m);

struct DeltaEntry {
  Assertion assertion;               // class representative
  std::vector<std::string> members;  // keys of every assertion in the class, representative included
};

struct DeltaReport {
  std::string commitId;
  DeltaMode mode = DeltaMode::Strict;
  std::vector<DeltaEntry> added;
  std::vector<DeltaEntry> removed;
  std::vector<DeltaEntry> preserved;
  std::vector<DeltaEntry> undetermined;
  std::map<std::string, std::string> provenance;
  bool reduced = false;
};

/// Works on VALID status; mutation-filter buckets are ignored. VALID on both
/// sides is preserved in either mode. Paper mode puts the remaining VALID
/// assertions in added or removed by side. Strict mode additionally requires
/// the other side to be INVALID and sends the rest to undetermined.
/// Throws Error(CandidateMismatch) when the tables cover different candidates.
DeltaReport compute_delta(const StatusTable& pre, const StatusTable& post, DeltaMode mode);

/// Groups each partition into bounded-equivalence classes per program point.
/// The representative is the shortest text (then the least key).
DeltaReport reduce_equivalent(DeltaReport report, const DomainConfig& d = {});

enum class TruthTag : std::uint8_t { Added, Removed, Preserved };
std::string_view truth_tag_name(TruthTag t);

struct TruthLine {
  TruthTag tag = TruthTag::Added;
  std::string point;  // label: `inv`, `init` or a method name
  std::string text;
  int line = 0;
};

/// Lines `+|-|= point: assertion`; `#` starts a comment line. Throws
/// Error(InputError) on malformed lines.
std::vector<TruthLine> parse_truth(std::string_view content);

enum class MatchStatus : std::uint8_t { Matched, Unmatched, Inexpressible };
std::string_view match_status_name(MatchStatus s);

struct TruthMatch {
  TruthLine truth;
  MatchStatus status = MatchStatus::Unmatched;
  std::string matchedKey;
  std::string reason;
};

struct MatchResult {
  std::vector<TruthMatch> entries;
  int expressible = 0;
  int matched = 0;
  double recall = 1.0;
  bool recallByConvention = false;  // no expressible truth: 1.0 by convention
  std::vector<std::string> surplus;  // reported delta keys without a truth counterpart
};

MatchResult match_ground_truth(const DeltaReport& report, const std::vector<TruthLine>& truth, const Unit& pre,
                               const Unit& post, const DomainConfig& d = {});

}  // namespace deltaspec
