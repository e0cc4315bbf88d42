#include "deltaspec/inference.hpp"

#include <algorithm>
#include <map>

#include "deltaspec/error.hpp"

namespace deltaspec {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Valid: return "VALID";
    case Status::Invalid: return "INVALID";
    case Status::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

std::string_view bucket_name(Bucket b) {
  switch (b) {
    case Bucket::Spec: return "SPEC";
    case Bucket::DiscardedIrrelevant: return "DISCARDED-IRRELEVANT";
    case Bucket::DiscardedRedundant: return "DISCARDED-REDUNDANT";
    case Bucket::NotValid: return "NONE";
  }
  return "?";
}

const StatusEntry* StatusTable::find(const std::string& key) const {
  if (byKey_.size() != entries.size()) {
    byKey_.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) byKey_.emplace(entries[i].assertion.key(), i);
  }
  auto it = byKey_.find(key);
  return it == byKey_.end() ? nullptr : &entries[it->second];
}

std::vector<std::string> StatusTable::spec_keys() const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (e.status == Status::Valid && e.bucket == Bucket::Spec) out.push_back(e.assertion.key());
  return out;
}

std::vector<Assertion> StatusTable::valid_assertions() const {
  std::vector<Assertion> out;
  for (const auto& e : entries)
    if (e.status == Status::Valid) out.push_back(e.assertion);
  return out;
}

void validate(const SpecConfig& cfg) {
  if (cfg.minSupport < 1) throw Error(ErrorCode::InputError, "minSupport must be at least 1");
}

StatusTable classify(const std::vector<Assertion>& candidates, const Unit& unit, const TestSuite& suite,
                     const SpecConfig& cfg, const std::string& version) {
  validate(cfg);
  StatusTable table;
  table.version = version;
  table.config = cfg;
  ObservationIndex index(unit, suite.tests, suite.records);
  if (index.total() == 0) table.warnings.push_back("suite has no observations; every candidate is UNDETERMINED");
  TruthCache cache(index);
  std::vector<Truth> truths;
  std::vector<bool> guard;
  bool skips = cfg.evalErrorPolicy == EvalErrorPolicy::Skips;
  table.entries.reserve(candidates.size());
  for (const auto& a : candidates) {
    StatusEntry e;
    e.assertion = a;
    const auto& refs = index.refs(a.point);
    cache.evaluate(a, truths, &guard);
    bool falsified = false;
    for (std::size_t i = 0; i < truths.size(); ++i) {
      Truth t = truths[i];
      if (t == Truth::Error && skips) continue;
      if (t == Truth::False || t == Truth::Error) {
        falsified = true;
        if (!e.falsifier || refs[i] < *e.falsifier) e.falsifier = refs[i];
        continue;
      }
      if (guard[i]) ++e.evalCount;
    }
    if (falsified) e.status = Status::Invalid;
    else if (e.evalCount >= cfg.minSupport) e.status = Status::Valid;
    else e.status = Status::Undetermined;
    e.bucket = e.status == Status::Valid ? Bucket::Spec : Bucket::NotValid;
    table.entries.push_back(std::move(e));
  }
  return table;
}

StatusTable filter_by_mutation(StatusTable table, const KillMatrix& km, const SpecConfig& cfg) {
  std::map<std::string, std::size_t> rowOf;
  for (std::size_t r = 0; r < km.rows.size(); ++r) rowOf.emplace(km.rows[r].key(), r);
  std::size_t valid = 0;
  for (const auto& e : table.entries) {
    if (e.status != Status::Valid) continue;
    ++valid;
    if (!rowOf.count(e.assertion.key()))
      throw Error(ErrorCode::MatrixMismatch, "kill matrix has no row for '" + e.assertion.key() + "'");
  }
  if (valid != km.rows.size()) throw Error(ErrorCode::MatrixMismatch, "kill matrix rows differ from the VALID set");
  if (km.cells.size() != km.rows.size()) throw Error(ErrorCode::MatrixMismatch, "kill matrix has no cells for some rows");
  for (const auto& row : km.cells)
    if (row.size() != km.cols.size()) throw Error(ErrorCode::MatrixMismatch, "kill matrix row width differs from columns");

  std::map<std::vector<bool>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    auto& e = table.entries[i];
    if (e.status != Status::Valid) continue;
    std::size_t r = rowOf[e.assertion.key()];
    e.killCount = static_cast<int>(km.killed_count(r));
    if (e.killCount == 0) {
      e.bucket = Bucket::DiscardedIrrelevant;
      continue;
    }
    e.bucket = Bucket::Spec;
    if (cfg.keepRepresentativesOnly) {
      std::vector<bool> vec;
      for (const auto& c : km.cells[r]) vec.push_back(c.killed);
      groups[vec].push_back(i);
    }
  }
  for (auto& [_, members] : groups) {
    auto best = *std::min_element(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      const auto& ka = table.entries[a].assertion;
      const auto& kb = table.entries[b].assertion;
      if (ka.text.size() != kb.text.size()) return ka.text.size() < kb.text.size();
      return ka.key() < kb.key();
    });
    for (auto i : members)
      if (i != best) table.entries[i].bucket = Bucket::DiscardedRedundant;
  }
  return table;
}

InferenceResult infer_spec(const Unit& unit, const TestSuite& suite, const std::vector<Assertion>& candidates,
                           const SpecConfig& cfg, const std::string& version) {
  InferenceResult res;
  res.table = classify(candidates, unit, suite, cfg, version);
  if (!cfg.mutationFilter) return res;
  res.mutants = generate_mutants(unit);
  res.kills = kill_matrix(res.table.valid_assertions(), res.mutants, unit, suite.tests, suite.records,
                          suite.config.stepBudget);
  res.table = filter_by_mutation(std::move(res.table), res.kills, cfg);
  return res;
}

std::vector<std::string> soundness_violations(const StatusTable& table, const Unit& unit, const TestSuite& suite) {
  std::vector<std::string> out;
  bool skips = table.config.evalErrorPolicy == EvalErrorPolicy::Skips;
  for (const auto& e : table.entries) {
    if (e.status != Status::Valid) continue;
    CompiledAssertion compiled(e.assertion.body);
    Binder binder(unit, e.assertion.point, compiled.idents());
    std::vector<const Value*> env;
    for (std::size_t t = 0; t < suite.records.size(); ++t) {
      for (const auto& obs : suite.records[t].observations) {
        if (obs.point != e.assertion.point) continue;
        binder.bind(obs, env);
        Truth r = compiled.eval(env).truth;
        if (r == Truth::False || (r == Truth::Error && !skips)) {
          out.push_back(e.assertion.key() + " is " + std::string(truth_name(r)) + " on test " +
                        std::to_string(suite.tests[t].seedId) + " call " + std::to_string(obs.callIndex));
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace deltaspec
