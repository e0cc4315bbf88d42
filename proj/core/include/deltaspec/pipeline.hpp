#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deltaspec/delta.hpp"
#include "deltaspec/experiments.hpp"
#include "deltaspec/grammar.hpp"
#include "deltaspec/inference.hpp"
#include "deltaspec/minilang.hpp"
#include "deltaspec/testgen.hpp"

namespace deltaspec {

std::string_view tool_version();

struct CommitInput {
  std::string id;
  std::filesystem::path dir;
  std::string preFile, postFile;  // paths as given, used in diagnostics
  std::string preSource, postSource;
  std::optional<std::string> truth;
  std::optional<std::filesystem::path> configFile;
};

/// Throws Error(InputError) unless `dir` holds exactly one `.dl` file under
/// each of `pre/` and `post/`.
CommitInput load_commit(const std::filesystem::path& dir);

struct PipelineConfig {
  GenConfig gen;
  std::size_t candidates = kDefaultCandidates;
  int maxNodes = kDefaultMaxNodes;
  SpecConfig spec;
  DeltaMode mode = DeltaMode::Strict;
  bool reduce = true;
  DomainConfig domain;
  RelevanceMode relevance = RelevanceMode::Literal;
  SimConfig sim;
  bool experiments = true;

  std::string canonical() const;  // stable text used for the config hash
};

/// Applies an INI file whose keys mirror the CLI flags (see README).
/// Throws Error(InputError) on unknown keys or unparsable values.
void apply_config_ini(PipelineConfig& cfg, const std::filesystem::path& file);
void apply_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

struct PointCandidates {
  ProgramPoint point;
  std::uint64_t grammarHash = 0;
  std::size_t count = 0;
  bool exhausted = false;
  int completeTiers = 0;
};

struct ExperimentData {
  std::vector<TestCase> shared;
  TestSuite sharedPost;  // shared tests replayed on post
  std::vector<Mutant> mutants;
  std::vector<RelevanceLabel> relevance;
  KillMatrix kills;
  Pool added, preserved, allValidPost;
  std::optional<SimResult> rq3;
  std::optional<CostResult> rq4;
  std::string note;  // why a simulation was skipped
};

struct PipelineResult {
  std::string commitId;
  PipelineConfig config;
  Unit pre, post;
  CommonPoints common;
  TestSuite preSuite, postSuite;
  std::vector<Assertion> candidates;
  std::vector<PointCandidates> pointCandidates;
  InferenceResult preInference, postInference;
  DeltaReport rawDelta;
  DeltaReport delta;  // reduced when config.reduce
  std::optional<ExperimentData> experiments;
  std::optional<MatchResult> truthMatch;
  std::map<std::string, std::string> inputHashes;
  std::vector<std::pair<std::string, double>> timings;  // seconds, in stage order
};

Unit parse_unit_file(const std::string& source, const std::string& file);

PipelineResult run_pipeline(const CommitInput& commit, const PipelineConfig& cfg);

/// Computes relevance, the post kill matrix over the shared suite and both
/// simulations. Requires the inference and delta stages of `r`.
ExperimentData run_experiments(const PipelineResult& r);

/// Partition and strict-mode invariants; returns violated properties.
std::vector<std::string> delta_invariant_violations(const DeltaReport& r, const StatusTable& pre,
                                                    const StatusTable& post, const CommonPoints& common);

}  // namespace deltaspec
