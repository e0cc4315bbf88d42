#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deltaspec/mutation.hpp"

namespace deltaspec {

struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Throws Error(UndefinedScore) when `relevant` is zero.
Ratio rms(std::uint64_t killedRelevant, std::uint64_t relevant);

/// Killed relevant columns over relevant columns for a row selection.
Ratio selection_rms(const KillMatrix& km, const std::vector<bool>& relevant, const std::vector<std::size_t>& rows);

std::vector<bool> relevant_columns(const std::vector<RelevanceLabel>& labels, bool countUntransplantable = true);

struct SimConfig {
  std::uint64_t seed = 1;
  std::vector<int> sizes{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int reps = 100;
  std::vector<double> targets{0.25, 0.5, 0.75, 1.0};
  bool countUntransplantable = true;
};

void validate(const SimConfig& cfg);

struct Pool {
  std::string name;
  std::vector<std::size_t> rows;  // kill-matrix row indices
};

struct SizeSeries {
  std::string pool;
  int size = 0;
  bool exhausted = false;  // size exceeded the pool; every rep uses the whole pool
  std::vector<double> samples;
  double mean = 0;
};

struct SizeStats {
  int size = 0;
  bool skipped = false;  // a pool was empty
  double u = 0;
  double p = 1;
  double a12 = 0.5;
};

struct SimResult {
  std::vector<SizeSeries> series;  // pool-major, then size
  std::vector<SizeStats> stats;    // first pool against second
  std::vector<std::string> absentPools;
};

/// Throws Error(UndefinedScore) when no column is relevant.
SimResult simulate_fixed_size(const KillMatrix& km, const std::vector<RelevanceLabel>& labels, const SimConfig& cfg,
                              const Pool& a, const Pool& b);

struct CostSeries {
  std::string pool;
  double target = 0;
  std::vector<std::optional<int>> costs;  // nullopt = UNREACHED
  double meanCost = 0;                    // over reaching reps; NaN when none reached
  double reachRate = 0;
  double medianCost = 0;                  // UNREACHED counted as +inf
};

struct CostResult {
  std::vector<CostSeries> series;  // pool-major, then target
  std::vector<std::string> absentPools;
};

CostResult simulate_to_target(const KillMatrix& km, const std::vector<RelevanceLabel>& labels, const SimConfig& cfg,
                              const std::vector<Pool>& pools);

/// Mean rMS per (pool, size) across commits, computed two ways.
struct Rq3Aggregate {
  std::string pool;
  int size = 0;
  double meanOfCommitMeans = 0;  // average each commit over reps, then across commits
  double pooledMean = 0;         // average all (commit, rep) samples together
};

std::vector<Rq3Aggregate> aggregate_rq3(const std::vector<SimResult>& perCommit);

}  // namespace deltaspec
