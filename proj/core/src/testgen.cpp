#include "deltaspec/testgen.hpp"

#include <set>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"

namespace deltaspec {

void validate(const GenConfig& cfg) {
  if (cfg.maxTests < 1) throw Error(ErrorCode::InputError, "maxTests must be at least 1");
  if (cfg.maxCallsPerTest < 1) throw Error(ErrorCode::InputError, "maxCallsPerTest must be at least 1");
  if (cfg.stepBudget < 1) throw Error(ErrorCode::InputError, "stepBudget must be at least 1");
  if (cfg.intPool.empty() || cfg.realPool.empty()) throw Error(ErrorCode::InputError, "value pools must be non-empty");
  if (cfg.arrayLenMin < 0 || cfg.arrayLenMax < cfg.arrayLenMin)
    throw Error(ErrorCode::InputError, "invalid array length range");
}

namespace {

class ArgSource {
 public:
  ArgSource(Rng& rng, const GenConfig& cfg) : rng_(rng), cfg_(cfg) {}

  std::int64_t draw_int() {
    std::int64_t v = cfg_.intPool[rng_.below(cfg_.intPool.size())];
    if (rng_.chance(1, 3)) v += rng_.chance(1, 2) ? 1 : -1;
    return v;
  }

  double draw_real() {
    double v = cfg_.realPool[rng_.below(cfg_.realPool.size())];
    if (rng_.chance(1, 3)) v *= 0.5 + rng_.unit();
    return v;
  }

  Value draw(Type t) {
    switch (t) {
      case Type::Int: return draw_int();
      case Type::Real: return draw_real();
      case Type::Bool: return rng_.chance(1, 2);
      case Type::IntArray: {
        IntArray a(array_len());
        for (auto& x : a) x = draw_int();
        return a;
      }
      case Type::RealArray: {
        RealArray a(array_len());
        for (auto& x : a) x = draw_real();
        return a;
      }
      case Type::Void: break;
    }
    return Value{};
  }

  Call make_call(const Method& m) {
    Call c{m.name, {}};
    for (const auto& p : m.params) c.args.push_back(draw(p.type));
    return c;
  }

 private:
  Rng& rng_;
  const GenConfig& cfg_;

  std::size_t array_len() {
    auto span = static_cast<std::uint64_t>(cfg_.arrayLenMax - cfg_.arrayLenMin + 1);
    return static_cast<std::size_t>(cfg_.arrayLenMin) + static_cast<std::size_t>(rng_.below(span));
  }
};

}  // namespace

TestSuite generate_suite(const Unit& unit, const GenConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  ArgSource src(rng, cfg);
  TestSuite suite;
  suite.unitName = unit.name;
  suite.config = cfg;
  std::set<std::string> seen;
  bool anyCtor = false;

  const int maxAttempts = cfg.maxTests * 20;
  for (int attempt = 0; attempt < maxAttempts && static_cast<int>(suite.tests.size()) < cfg.maxTests; ++attempt) {
    TestCase t;
    if (!suite.tests.empty() && rng.chance(1, 2)) {
      const auto& base = suite.tests[rng.below(suite.tests.size())];
      std::size_t keep = 1 + static_cast<std::size_t>(rng.below(base.calls.size()));
      t.calls.assign(base.calls.begin(), base.calls.begin() + static_cast<std::ptrdiff_t>(keep));
    } else {
      t.calls.push_back(src.make_call(unit.ctor));
    }
    std::size_t target = 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cfg.maxCallsPerTest)));
    while (t.calls.size() < target && !unit.methods.empty())
      t.calls.push_back(src.make_call(unit.methods[rng.below(unit.methods.size())]));

    ExecutionRecord rec = exec_test(unit, t, cfg.stepBudget);
    if (rec.outcome != Outcome::Completed) {
      if (rec.failedCall == 0) continue;
      t.calls.resize(static_cast<std::size_t>(rec.failedCall));
      rec = exec_test(unit, t, cfg.stepBudget);
    }
    anyCtor = true;
    if (!seen.insert(serialize_calls(t)).second) continue;
    t.seedId = suite.tests.size();
    suite.tests.push_back(std::move(t));
    suite.records.push_back(std::move(rec));
  }
  if (!anyCtor)
    throw Error(ErrorCode::GenerationFailure, "no generated test completed a constructor call of '" + unit.name + "'");
  return suite;
}

TestSuite replay_suite(const Unit& unit, const std::vector<TestCase>& tests, const GenConfig& cfg) {
  TestSuite suite;
  suite.unitName = unit.name;
  suite.config = cfg;
  suite.tests = tests;
  for (const auto& t : tests) suite.records.push_back(exec_test(unit, t, cfg.stepBudget));
  return suite;
}

std::vector<TestCase> union_tests(const Unit& pre, const Unit& post, const TestSuite& a, const TestSuite& b) {
  std::vector<TestCase> out;
  std::set<std::string> seen;
  for (const auto* s : {&a, &b}) {
    for (const auto& t : s->tests) {
      if (!test_type_valid(pre, t) || !test_type_valid(post, t)) continue;
      if (!seen.insert(serialize_calls(t)).second) continue;
      TestCase c = t;
      c.seedId = out.size();
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string serialize_calls(const TestCase& t) {
  std::string s;
  for (const auto& c : t.calls) {
    s += c.method;
    s += '(';
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i) s += ',';
      if (auto* d = std::get_if<double>(&c.args[i])) s += format_real17(*d);
      else if (auto* ra = std::get_if<RealArray>(&c.args[i])) {
        s += '[';
        for (std::size_t k = 0; k < ra->size(); ++k) s += (k ? "," : "") + format_real17((*ra)[k]);
        s += ']';
      } else {
        s += format_value(c.args[i]);
      }
    }
    s += ");";
  }
  return s;
}

std::uint64_t suite_hash(const TestSuite& suite) {
  std::uint64_t h = fnv1a(suite.unitName);
  for (const auto& t : suite.tests) h = fnv1a(serialize_calls(t) + "\n", h);
  return h;
}

}  // namespace deltaspec
