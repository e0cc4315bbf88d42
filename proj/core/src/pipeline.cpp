#include "deltaspec/pipeline.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"
#include "deltaspec/value.hpp"

#ifndef DELTASPEC_VERSION
#define DELTASPEC_VERSION "0.0.0"
#endif

namespace deltaspec {

namespace fs = std::filesystem;

std::string_view tool_version() { return DELTASPEC_VERSION; }

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path single_dl(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::InputError, "missing directory " + dir.string());
  std::vector<fs::path> found;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".dl") found.push_back(e.path());
  if (found.size() != 1)
    throw Error(ErrorCode::InputError,
                dir.string() + " must contain exactly one .dl file, found " + std::to_string(found.size()));
  return found.front();
}

}  // namespace

CommitInput load_commit(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::InputError, "commit directory " + dir.string() + " not found");
  CommitInput c;
  c.dir = dir;
  c.id = fs::absolute(dir).lexically_normal().filename().string();
  if (c.id.empty()) c.id = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  auto pre = single_dl(dir / "pre");
  auto post = single_dl(dir / "post");
  c.preFile = pre.string();
  c.postFile = post.string();
  c.preSource = read_file(pre);
  c.postSource = read_file(post);
  if (fs::exists(dir / "truth.delta")) c.truth = read_file(dir / "truth.delta");
  if (fs::exists(dir / "config.ini")) c.configFile = dir / "config.ini";
  return c;
}

namespace {

std::vector<std::string> words(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ' ' || ch == ',' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InputError, "config '" + key + "': expected an integer, got '" + v + "'");
}

double to_real(const std::string& key, const std::string& v) {
  if (v == "nan") return std::nan("");
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InputError, "config '" + key + "': expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw Error(ErrorCode::InputError, "config '" + key + "': expected true or false, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> list(const std::string& key, const std::string& v, F conv) {
  std::vector<T> out;
  for (const auto& w : words(v)) out.push_back(static_cast<T>(conv(key, w)));
  return out;
}

}  // namespace

void apply_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "seed") cfg.gen.seed = static_cast<std::uint64_t>(to_int(key, v)), cfg.sim.seed = cfg.gen.seed;
  else if (key == "max-tests") cfg.gen.maxTests = static_cast<int>(to_int(key, v));
  else if (key == "max-calls") cfg.gen.maxCallsPerTest = static_cast<int>(to_int(key, v));
  else if (key == "step-budget") cfg.gen.stepBudget = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "int-pool") cfg.gen.intPool = list<std::int64_t>(key, v, to_int);
  else if (key == "real-pool") cfg.gen.realPool = list<double>(key, v, to_real);
  else if (key == "array-len-min") cfg.gen.arrayLenMin = static_cast<int>(to_int(key, v));
  else if (key == "array-len-max") cfg.gen.arrayLenMax = static_cast<int>(to_int(key, v));
  else if (key == "candidates") cfg.candidates = static_cast<std::size_t>(to_int(key, v));
  else if (key == "max-nodes") cfg.maxNodes = static_cast<int>(to_int(key, v));
  else if (key == "min-support") cfg.spec.minSupport = static_cast<int>(to_int(key, v));
  else if (key == "eval-error") {
    if (v == "falsifies") cfg.spec.evalErrorPolicy = EvalErrorPolicy::Falsifies;
    else if (v == "skips") cfg.spec.evalErrorPolicy = EvalErrorPolicy::Skips;
    else throw Error(ErrorCode::InputError, "config 'eval-error': expected falsifies or skips");
  } else if (key == "mutation-filter") cfg.spec.mutationFilter = to_bool(key, v);
  else if (key == "mode") {
    if (v == "paper") cfg.mode = DeltaMode::Paper;
    else if (v == "strict") cfg.mode = DeltaMode::Strict;
    else throw Error(ErrorCode::InputError, "config 'mode': expected paper or strict");
  } else if (key == "reduce") cfg.reduce = to_bool(key, v);
  else if (key == "relevance") {
    if (v == "literal") cfg.relevance = RelevanceMode::Literal;
    else if (v == "refined") cfg.relevance = RelevanceMode::Refined;
    else throw Error(ErrorCode::InputError, "config 'relevance': expected literal or refined");
  } else if (key == "reps") cfg.sim.reps = static_cast<int>(to_int(key, v));
  else if (key == "sizes") cfg.sim.sizes = list<int>(key, v, to_int);
  else if (key == "targets") cfg.sim.targets = list<double>(key, v, to_real);
  else if (key == "count-untransplantable") cfg.sim.countUntransplantable = to_bool(key, v);
  else if (key == "experiments") cfg.experiments = to_bool(key, v);
  else if (key == "domain-ints") cfg.domain.intDomain = list<std::int64_t>(key, v, to_int);
  else if (key == "domain-reals") cfg.domain.realDomain = list<double>(key, v, to_real);
  else throw Error(ErrorCode::InputError, "unknown config key '" + key + "'");
}

void apply_config_ini(PipelineConfig& cfg, const fs::path& file) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(file.string());
  } catch (const CLI::Error& e) {
    throw Error(ErrorCode::InputError, file.string() + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string joined;
    for (const auto& in : item.inputs) joined += (joined.empty() ? "" : " ") + in;
    apply_config_value(cfg, item.name, joined);
  }
}

std::string PipelineConfig::canonical() const {
  std::ostringstream o;
  auto ints = [&](const auto& v) {
    for (auto x : v) o << ' ' << x;
    o << '\n';
  };
  auto reals = [&](const std::vector<double>& v) {
    for (auto x : v) o << ' ' << format_real(x);
    o << '\n';
  };
  o << "seed " << gen.seed << "\nmax-tests " << gen.maxTests << "\nmax-calls " << gen.maxCallsPerTest
    << "\nstep-budget " << gen.stepBudget << "\nint-pool";
  ints(gen.intPool);
  o << "real-pool";
  reals(gen.realPool);
  o << "array-len " << gen.arrayLenMin << ' ' << gen.arrayLenMax << "\ncandidates " << candidates << "\nmax-nodes "
    << maxNodes << "\nmin-support " << spec.minSupport << "\neval-error "
    << (spec.evalErrorPolicy == EvalErrorPolicy::Falsifies ? "falsifies" : "skips") << "\nmutation-filter "
    << spec.mutationFilter << "\nmode " << delta_mode_name(mode) << "\nreduce " << reduce << "\nrelevance "
    << relevance_mode_name(relevance) << "\nreps " << sim.reps << "\nsizes";
  ints(sim.sizes);
  o << "targets";
  reals(sim.targets);
  o << "count-untransplantable " << sim.countUntransplantable << "\nexperiments " << experiments << "\ndomain-ints";
  ints(domain.intDomain);
  o << "domain-reals";
  reals(domain.realDomain);
  return o.str();
}

Unit parse_unit_file(const std::string& source, const std::string& file) {
  try {
    return parse_unit(source);
  } catch (const Error& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += (msg.empty() ? "" : "\n") + format_diagnostic(file, d);
    if (msg.empty()) msg = file + ": " + e.what();
    throw Error(e.code(), msg, e.diagnostics());
  }
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  void lap(const std::string& stage) {
    auto now = std::chrono::steady_clock::now();
    out_.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

bool in_spec(const StatusTable& t, const std::string& key) {
  const auto* e = t.find(key);
  return e && e->status == Status::Valid && e->bucket == Bucket::Spec;
}

}  // namespace

ExperimentData run_experiments(const PipelineResult& r) {
  const auto& cfg = r.config;
  ExperimentData x;
  x.shared = union_tests(r.pre, r.post, r.preSuite, r.postSuite);
  x.sharedPost = replay_suite(r.post, x.shared, cfg.gen);
  x.mutants = generate_mutants(r.post);
  if (x.shared.empty()) {
    x.note = "no test is type-valid on both versions";
    return x;
  }
  x.relevance = label_relevance(x.mutants, r.pre, r.post, x.shared, cfg.relevance, cfg.gen.stepBudget);

  // Rows: post-spec assertions, one per equivalence class of the reduced delta.
  std::vector<Assertion> rows;
  std::map<std::string, std::size_t> rowOf;
  const auto& postTable = r.postInference.table;
  auto row = [&](const DeltaEntry& e) -> std::optional<std::size_t> {
    const Assertion* pick = nullptr;
    if (in_spec(postTable, e.assertion.key())) pick = &e.assertion;
    for (const auto& m : e.members)
      if (!pick && in_spec(postTable, m)) pick = &postTable.find(m)->assertion;
    if (!pick) return std::nullopt;
    auto [it, fresh] = rowOf.emplace(pick->key(), rows.size());
    if (fresh) rows.push_back(*pick);
    return it->second;
  };
  x.added.name = "added";
  x.preserved.name = "preserved";
  x.allValidPost.name = "allValidPost";
  auto fill = [&](const std::vector<DeltaEntry>& part, Pool& pool) {
    for (const auto& e : part)
      if (auto i = row(e)) pool.rows.push_back(*i);
  };
  fill(r.delta.added, x.added);
  fill(r.delta.preserved, x.preserved);
  x.allValidPost.rows = x.added.rows;
  x.allValidPost.rows.insert(x.allValidPost.rows.end(), x.preserved.rows.begin(), x.preserved.rows.end());
  fill(r.delta.undetermined, x.allValidPost);
  x.kills = kill_matrix(rows, x.mutants, r.post, x.sharedPost.tests, x.sharedPost.records, cfg.gen.stepBudget);

  auto rel = relevant_columns(x.relevance, cfg.sim.countUntransplantable);
  if (std::find(rel.begin(), rel.end(), true) == rel.end()) {
    x.note = "no commit-relevant mutants; rMS is undefined";
    return x;
  }
  x.rq3 = simulate_fixed_size(x.kills, x.relevance, cfg.sim, x.added, x.preserved);
  x.rq4 = simulate_to_target(x.kills, x.relevance, cfg.sim, {x.added, x.allValidPost, x.preserved});
  return x;
}

PipelineResult run_pipeline(const CommitInput& commit, const PipelineConfig& cfg) {
  validate(cfg.gen);
  validate(cfg.spec);
  validate(cfg.sim);
  PipelineResult r;
  Stopwatch clock(r.timings);
  r.commitId = commit.id;
  r.config = cfg;
  r.inputHashes["pre"] = hex64(fnv1a(commit.preSource));
  r.inputHashes["post"] = hex64(fnv1a(commit.postSource));
  if (commit.truth) r.inputHashes["truth"] = hex64(fnv1a(*commit.truth));
  r.inputHashes["config"] = hex64(fnv1a(cfg.canonical()));

  r.pre = parse_unit_file(commit.preSource, commit.preFile);
  r.post = parse_unit_file(commit.postSource, commit.postFile);
  r.common = diff_common_points(r.pre, r.post);
  clock.lap("parse");

  r.preSuite = generate_suite(r.pre, cfg.gen);
  r.postSuite = generate_suite(r.post, cfg.gen);
  clock.lap("testgen");

  for (const auto& point : r.common.shared) {
    auto g = instantiate_grammar(r.pre, r.post, point, cfg.maxNodes);
    auto set = fuzz_candidates(g, cfg.gen.seed, cfg.candidates);
    r.pointCandidates.push_back({point, set.grammarHash, set.items.size(), set.exhausted, set.completeTiers});
    r.candidates.insert(r.candidates.end(), set.items.begin(), set.items.end());
  }
  clock.lap("fuzz");

  r.preInference = infer_spec(r.pre, r.preSuite, r.candidates, cfg.spec, "pre");
  r.postInference = infer_spec(r.post, r.postSuite, r.candidates, cfg.spec, "post");
  clock.lap("infer");

  r.rawDelta = compute_delta(r.preInference.table, r.postInference.table, cfg.mode);
  r.rawDelta.commitId = commit.id;
  auto& prov = r.rawDelta.provenance;
  prov["seed"] = std::to_string(cfg.gen.seed);
  prov["config"] = r.inputHashes["config"];
  prov["preSuite"] = hex64(suite_hash(r.preSuite));
  prov["postSuite"] = hex64(suite_hash(r.postSuite));
  prov["candidates"] = std::to_string(r.candidates.size());
  r.delta = cfg.reduce ? reduce_equivalent(r.rawDelta, cfg.domain) : r.rawDelta;
  clock.lap("delta");

  if (commit.truth) {
    r.truthMatch = match_ground_truth(r.delta, parse_truth(*commit.truth), r.pre, r.post, cfg.domain);
    clock.lap("match-truth");
  }
  if (cfg.experiments) {
    r.experiments = run_experiments(r);
    clock.lap("experiments");
  }
  return r;
}

std::vector<std::string> delta_invariant_violations(const DeltaReport& r, const StatusTable& pre,
                                                    const StatusTable& post, const CommonPoints& common) {
  std::vector<std::string> out;
  auto keys = [](const std::vector<DeltaEntry>& p) {
    std::set<std::string> s;
    for (const auto& e : p) s.insert(e.members.begin(), e.members.end());
    return s;
  };
  auto added = keys(r.added), removed = keys(r.removed), preserved = keys(r.preserved);
  for (const auto& k : added) {
    if (removed.count(k)) out.push_back("in added and removed: " + k);
    if (preserved.count(k)) out.push_back("in added and preserved: " + k);
  }
  for (const auto& k : removed)
    if (preserved.count(k)) out.push_back("in removed and preserved: " + k);
  for (const auto* part : {&r.added, &r.removed, &r.preserved, &r.undetermined})
    for (const auto& e : *part)
      if (std::find(common.shared.begin(), common.shared.end(), e.assertion.point) == common.shared.end())
        out.push_back("not at a shared point: " + e.assertion.key());
  if (r.mode == DeltaMode::Strict) {
    for (const auto& k : added) {
      const auto* e = pre.find(k);
      if (!e || e->status != Status::Invalid || !e->falsifier) out.push_back("added without a pre falsifier: " + k);
    }
    for (const auto& k : removed) {
      const auto* e = post.find(k);
      if (!e || e->status != Status::Invalid || !e->falsifier) out.push_back("removed without a post falsifier: " + k);
    }
  }
  return out;
}

}  // namespace deltaspec
