// Runs every corpus case over its seeds once and checks each acceptance
// criterion against the shared runs. Prints one PASS/FAIL line per criterion
// on stdout; progress goes to stderr.

#include <deltaspec/error.hpp>
#include <deltaspec/pipeline.hpp>
#include <deltaspec/rng.hpp>
#include <deltaspec/serialize.hpp>
#include <deltaspec/stats.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace deltaspec;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Criterion {
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    pass = false;
    notes.push_back(why);
  }
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream o;
  o.precision(prec);
  o << std::fixed << v;
  return o.str();
}

std::set<std::string> member_keys(const std::vector<DeltaEntry>& part) {
  std::set<std::string> out;
  for (const auto& e : part) out.insert(e.members.begin(), e.members.end());
  return out;
}

// Swap duality and strict evidence on the raw delta of one run.
std::vector<std::string> algebra_violations(const PipelineResult& r) {
  const auto& pre = r.preInference.table;
  const auto& post = r.postInference.table;
  auto out = delta_invariant_violations(r.rawDelta, pre, post, r.common);
  auto reduced = delta_invariant_violations(r.delta, pre, post, r.common);
  out.insert(out.end(), reduced.begin(), reduced.end());
  for (auto mode : {DeltaMode::Strict, DeltaMode::Paper}) {
    auto fwd = mode == r.rawDelta.mode ? r.rawDelta : compute_delta(pre, post, mode);
    auto bwd = compute_delta(post, pre, mode);
    std::string m(delta_mode_name(mode));
    if (member_keys(fwd.added) != member_keys(bwd.removed)) out.push_back(m + ": added is not the swapped removed");
    if (member_keys(fwd.removed) != member_keys(bwd.added)) out.push_back(m + ": removed is not the swapped added");
    if (member_keys(fwd.preserved) != member_keys(bwd.preserved)) out.push_back(m + ": preserved differs on swap");
    auto fv = delta_invariant_violations(fwd, pre, post, r.common);
    out.insert(out.end(), fv.begin(), fv.end());
  }
  return out;
}

struct ReplayCount {
  std::size_t killed = 0;
  std::size_t replayed = 0;
};

void replay_matrix(const KillMatrix& km, const std::vector<Mutant>& mutants, const std::vector<TestCase>& tests,
                   std::uint64_t budget, ReplayCount& rc) {
  std::map<std::uint64_t, const TestCase*> byId;
  for (const auto& t : tests) byId.emplace(t.seedId, &t);
  for (std::size_t r = 0; r < km.rows.size(); ++r)
    for (std::size_t c = 0; c < km.cols.size(); ++c) {
      const auto& cell = km.cells[r][c];
      if (!cell.killed) continue;
      ++rc.killed;
      auto it = byId.find(cell.witnessTestId);
      if (it != byId.end() && replay_kill(km.rows[r], mutants[c], *it->second, budget)) ++rc.replayed;
    }
}

std::map<std::string, std::string> reports_without_timings(const PipelineResult& r) {
  auto files = render_reports(r);
  files["manifest.json"] = manifest_json(r, false).dump(1);
  return files;
}

// Two-sided permutation p by relabelling the pooled sample, with U from pair counts.
double pair_u(const std::vector<double>& xs, const std::vector<double>& ys) {
  double u = 0;
  for (double x : xs)
    for (double y : ys) u += x > y ? 1.0 : x == y ? 0.5 : 0.0;
  return u;
}

double brute_p(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled(xs);
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const std::size_t n = pooled.size();
  const double mu = static_cast<double>(xs.size() * ys.size()) / 2;
  const double obs = std::fabs(pair_u(xs, ys) - mu);
  double extreme = 0, total = 0;
  std::vector<double> a, b;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != xs.size()) continue;
    a.clear();
    b.clear();
    for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? a : b).push_back(pooled[i]);
    total += 1;
    if (std::fabs(pair_u(a, b) - mu) >= obs - 1e-9) extreme += 1;
  }
  return extreme / total;
}

// Every multiset of sizes 1..6 over {0,1,2}; both statistics are invariant
// under reordering within a sample.
std::vector<std::vector<double>> multisets() {
  std::vector<std::vector<double>> out;
  for (int k = 1; k <= 6; ++k)
    for (int zeros = 0; zeros <= k; ++zeros)
      for (int ones = 0; zeros + ones <= k; ++ones) {
        std::vector<double> v(static_cast<std::size_t>(zeros), 0.0);
        v.insert(v.end(), static_cast<std::size_t>(ones), 1.0);
        v.insert(v.end(), static_cast<std::size_t>(k - zeros - ones), 2.0);
        out.push_back(std::move(v));
      }
  return out;
}

Criterion check_stats() {
  Criterion c{"statistics-oracles", true, {}};
  auto t0 = Clock::now();
  auto sets = multisets();
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& xs : sets)
    for (const auto& ys : sets) {
      ++pairs;
      auto r = mann_whitney_u(xs, ys);
      if (!r.exact || r.u != pair_u(xs, ys) || std::fabs(r.p - brute_p(xs, ys)) > 1e-12) ++mismatches;
    }
  double exhaustive = seconds_since(t0);
  if (mismatches) c.fail(std::to_string(mismatches) + " exact Mann-Whitney mismatches");
  if (exhaustive >= 30) c.fail("exhaustive check took " + fmt(exhaustive, 1) + " s");

  Rng rng(2024);
  std::size_t a12Bad = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> xs(1 + rng.below(20)), ys(1 + rng.below(20));
    for (auto& x : xs) x = static_cast<double>(rng.below(5));
    for (auto& y : ys) y = static_cast<double>(rng.below(5));
    double a = vargha_delaney_a12(xs, ys), b = vargha_delaney_a12(ys, xs);
    if (std::fabs(a + b - 1.0) > 1e-12) ++a12Bad;
    if (std::fabs(vargha_delaney_a12(xs, xs) - 0.5) > 1e-12) ++a12Bad;
    if (std::fabs(a - pair_u(xs, ys) / static_cast<double>(xs.size() * ys.size())) > 1e-12) ++a12Bad;
  }
  if (a12Bad) c.fail(std::to_string(a12Bad) + " A12 identity violations");
  c.notes.push_back(std::to_string(pairs) + " sample pairs in " + fmt(exhaustive, 1) + " s; 1000 A12 pairs");
  return c;
}

double median_cost(std::vector<double> costs) { return median(std::move(costs)); }

}  // namespace

int main(int argc, char** argv) {
  fs::path corpus = argc > 1 ? fs::path(argv[1]) : fs::path("corpus");
  const std::vector<std::string> cases{"sum_fix", "refactor_iterator", "is_any_empty", "support_bound", "linf_norm"};
  constexpr int kSeeds = 10;
  constexpr int kRq4Seeds = 30;

  Criterion truth{"ground-truth-recall", true, {}};
  Criterion refactor{"refactor-null", true, {}};
  Criterion algebra{"delta-algebra", true, {}};
  Criterion soundness{"inference-soundness", true, {}};
  Criterion rq3{"rq3-added-over-preserved", true, {}};
  Criterion rq4{"rq4-median-cost-order", true, {}};
  Criterion determinism{"determinism", true, {}};
  Criterion replay{"kill-witness-replay", true, {}};

  std::map<std::string, std::vector<double>> rq4Costs;  // pool -> costs over (seed, rep)
  int rq3Wins = 0;
  double algebraWorst = 0, slowest = 0;
  ReplayCount replays;

  for (const auto& name : cases) {
    CommitInput commit;
    try {
      commit = load_commit(corpus / name);
    } catch (const Error& e) {
      for (auto* c : {&truth, &refactor, &algebra, &soundness, &determinism, &replay}) c->fail(name + ": " + e.what());
      continue;
    }
    const int seeds = name == "sum_fix" ? kRq4Seeds : kSeeds;
    int perfect = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
      PipelineConfig cfg;
      if (commit.configFile) apply_config_ini(cfg, *commit.configFile);
      apply_config_value(cfg, "seed", std::to_string(seed));
      auto t0 = Clock::now();
      PipelineResult r;
      try {
        r = run_pipeline(commit, cfg);
      } catch (const Error& e) {
        truth.fail(name + " seed " + std::to_string(seed) + ": " + e.what());
        continue;
      }
      double runtime = seconds_since(t0);
      slowest = std::max(slowest, runtime);
      std::cerr << name << " seed " << seed << ": " << fmt(runtime, 1) << " s\n";
      const std::string where = name + " seed " + std::to_string(seed);

      if (seed <= kSeeds) {
        if (r.truthMatch && r.truthMatch->recall == 1.0) ++perfect;
        if (runtime >= 60) truth.fail(where + " took " + fmt(runtime, 1) + " s");
      }
      if (name == "refactor_iterator" && (!r.delta.added.empty() || !r.delta.removed.empty()))
        refactor.fail(where + ": " + std::to_string(r.delta.added.size()) + " added, " +
                      std::to_string(r.delta.removed.size()) + " removed");

      auto ta = Clock::now();
      auto bad = algebra_violations(r);
      algebraWorst = std::max(algebraWorst, seconds_since(ta));
      if (!bad.empty()) algebra.fail(where + ": " + bad.front());

      auto sPre = soundness_violations(r.preInference.table, r.pre, r.preSuite);
      auto sPost = soundness_violations(r.postInference.table, r.post, r.postSuite);
      if (!sPre.empty()) soundness.fail(where + " pre: " + sPre.front());
      if (!sPost.empty()) soundness.fail(where + " post: " + sPost.front());

      const auto budget = r.config.gen.stepBudget;
      replay_matrix(r.preInference.kills, r.preInference.mutants, r.preSuite.tests, budget, replays);
      replay_matrix(r.postInference.kills, r.postInference.mutants, r.postSuite.tests, budget, replays);
      if (r.experiments) replay_matrix(r.experiments->kills, r.experiments->mutants, r.experiments->shared, budget, replays);

      if (name == "sum_fix") {
        if (seed <= kSeeds) {
          const SizeSeries *added = nullptr, *preserved = nullptr;
          if (r.experiments && r.experiments->rq3)
            for (const auto& s : r.experiments->rq3->series) {
              if (s.size != 1) continue;
              if (s.pool == "added") added = &s;
              if (s.pool == "preserved") preserved = &s;
            }
          if (added && preserved && added->mean > preserved->mean) ++rq3Wins;
          else
            rq3.notes.push_back(where + ": " +
                                (added && preserved ? fmt(added->mean) + " <= " + fmt(preserved->mean) : "no series"));
        }
        if (r.experiments && r.experiments->rq4)
          for (const auto& s : r.experiments->rq4->series)
            if (std::fabs(s.target - 0.5) < 1e-12)
              for (const auto& cost : s.costs)
                rq4Costs[s.pool].push_back(cost ? *cost : std::numeric_limits<double>::infinity());
      }

      if (seed == 1) {
        auto first = reports_without_timings(r);
        auto second = reports_without_timings(run_pipeline(commit, cfg));
        std::vector<std::string> differing;
        for (const auto& [file, content] : first) {
          auto it = second.find(file);
          if (it == second.end() || it->second != content) differing.push_back(file);
        }
        if (first.size() != second.size()) differing.push_back("(file set)");
        if (!differing.empty()) determinism.fail(name + ": " + differing.front() + " differs");
      }
    }
    truth.notes.push_back(name + " " + std::to_string(perfect) + "/" + std::to_string(kSeeds));
    if (perfect < 8) truth.pass = false;
  }

  truth.notes.push_back("slowest run " + fmt(slowest, 1) + " s");
  algebra.notes.push_back("slowest check " + fmt(algebraWorst, 2) + " s");
  if (algebraWorst >= 10) algebra.fail("property suite over 10 s");
  rq3.notes.insert(rq3.notes.begin(), std::to_string(rq3Wins) + "/" + std::to_string(kSeeds) + " seeds");
  if (rq3Wins < 8) rq3.pass = false;

  double mAdded = median_cost(rq4Costs["added"]), mAll = median_cost(rq4Costs["allValidPost"]),
         mPreserved = median_cost(rq4Costs["preserved"]);
  rq4.notes.push_back("medians added " + fmt(mAdded, 1) + ", allValidPost " + fmt(mAll, 1) + ", preserved " +
                      fmt(mPreserved, 1));
  if (rq4Costs["added"].empty() || rq4Costs["allValidPost"].empty() || rq4Costs["preserved"].empty())
    rq4.fail("a pool had no costs");
  else if (!(mAdded <= mAll && mAll <= mPreserved))
    rq4.pass = false;

  replay.notes.push_back(std::to_string(replays.replayed) + "/" + std::to_string(replays.killed) + " killed cells");
  if (replays.replayed != replays.killed) replay.pass = false;

  Criterion stats = check_stats();

  bool all = true;
  for (const auto* c : {&truth, &refactor, &algebra, &soundness, &stats, &rq3, &rq4, &determinism, &replay}) {
    std::cout << (c->pass ? "PASS " : "FAIL ") << c->name;
    for (std::size_t i = 0; i < c->notes.size(); ++i) std::cout << (i ? "; " : ": ") << c->notes[i];
    std::cout << '\n';
    all = all && c->pass;
  }
  return all ? 0 : 1;
}
