#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deltaspec/grammar.hpp"
#include "deltaspec/mutation.hpp"
#include "deltaspec/observation_index.hpp"
#include "deltaspec/testgen.hpp"

namespace deltaspec {

enum class Status : std::uint8_t { Valid, Invalid, Undetermined };
enum class EvalErrorPolicy : std::uint8_t { Falsifies, Skips };
/// Where a VALID assertion ended up after the mutation filter.
enum class Bucket : std::uint8_t { Spec, DiscardedIrrelevant, DiscardedRedundant, NotValid };

std::string_view status_name(Status s);
std::string_view bucket_name(Bucket b);

struct SpecConfig {
  int minSupport = 5;
  EvalErrorPolicy evalErrorPolicy = EvalErrorPolicy::Falsifies;
  bool mutationFilter = true;
  bool keepRepresentativesOnly = false;
};

struct StatusEntry {
  Assertion assertion;
  Status status = Status::Undetermined;
  int evalCount = 0;
  std::optional<ObsRef> falsifier;
  int killCount = 0;
  Bucket bucket = Bucket::NotValid;
};

struct StatusTable {
  std::string version;  // "pre" or "post"
  SpecConfig config;
  std::vector<StatusEntry> entries;  // candidate order
  std::vector<std::string> warnings;

  const StatusEntry* find(const std::string& key) const;
  /// Keys of VALID entries still in the spec bucket.
  std::vector<std::string> spec_keys() const;
  std::vector<Assertion> valid_assertions() const;

 private:
  mutable std::unordered_map<std::string, std::size_t> byKey_;
};

/// Throws Error(InputError) when the configuration is unusable.
void validate(const SpecConfig& cfg);

StatusTable classify(const std::vector<Assertion>& candidates, const Unit& unit, const TestSuite& suite,
                     const SpecConfig& cfg, const std::string& version);

/// Throws Error(MatrixMismatch) when the matrix rows differ from the table's VALID set.
StatusTable filter_by_mutation(StatusTable table, const KillMatrix& km, const SpecConfig& cfg);

struct InferenceResult {
  StatusTable table;
  std::vector<Mutant> mutants;  // empty when the filter is off
  KillMatrix kills;
};

/// classify, then (when enabled) kill matrix over this version's own mutants and filter.
InferenceResult infer_spec(const Unit& unit, const TestSuite& suite, const std::vector<Assertion>& candidates,
                           const SpecConfig& cfg, const std::string& version);

/// Independent per-observation re-evaluation of every VALID entry. Returns one
/// message per violation (empty when sound).
std::vector<std::string> soundness_violations(const StatusTable& table, const Unit& unit, const TestSuite& suite);

}  // namespace deltaspec
