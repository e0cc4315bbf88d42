#include "deltaspec/observation_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace deltaspec {

namespace {
bool same_real(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return a == b && std::signbit(a) == std::signbit(b);
}
}  // namespace

bool same_value(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<double>(&a)) return same_real(*x, std::get<double>(b));
  if (auto* x = std::get_if<RealArray>(&a)) {
    const auto& y = std::get<RealArray>(b);
    if (x->size() != y.size()) return false;
    for (std::size_t i = 0; i < x->size(); ++i)
      if (!same_real((*x)[i], y[i])) return false;
    return true;
  }
  return a == b;
}

namespace {
bool same_values(const std::vector<Value>& a, const std::vector<Value>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_value(a[i], b[i])) return false;
  return true;
}
}  // namespace

bool same_observation(const Observation& a, const Observation& b) {
  return a.point == b.point && a.callIndex == b.callIndex && same_value(a.returnValue, b.returnValue) &&
         same_values(a.preState, b.preState) && same_values(a.postState, b.postState) &&
         same_values(a.params, b.params);
}

ObservationIndex::ObservationIndex(const Unit& unit, const std::vector<TestCase>& tests,
                                   const std::vector<ExecutionRecord>& records)
    : unit_(&unit) {
  for (std::size_t i = 0; i < tests.size() && i < records.size(); ++i) add(tests[i].seedId, records[i]);
}

void ObservationIndex::add(std::uint64_t testId, const ExecutionRecord& rec) {
  for (const auto& o : rec.observations) add(testId, o);
}

void ObservationIndex::add(std::uint64_t testId, const Observation& obs) {
  Slot& s = slots_[obs.point];
  ObsRef r{testId, obs.callIndex};
  if (!s.refs.empty() && r < s.refs.back()) s.sorted = false;
  s.refs.push_back(r);
  s.obs.push_back(&obs);
}

void ObservationIndex::sort_slot(Slot& s) const {
  if (s.sorted) return;
  std::vector<std::size_t> order(s.refs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.refs[a] < s.refs[b]; });
  std::vector<ObsRef> refs;
  std::vector<const Observation*> obs;
  for (auto i : order) {
    refs.push_back(s.refs[i]);
    obs.push_back(s.obs[i]);
  }
  s.refs = std::move(refs);
  s.obs = std::move(obs);
  s.sorted = true;
}

const std::vector<const Observation*>& ObservationIndex::observations(const ProgramPoint& p) const {
  Slot& s = slots_[p];
  sort_slot(s);
  return s.obs;
}

const std::vector<ObsRef>& ObservationIndex::refs(const ProgramPoint& p) const {
  Slot& s = slots_[p];
  sort_slot(s);
  return s.refs;
}

std::size_t ObservationIndex::total() const {
  std::size_t n = 0;
  for (const auto& [_, s] : slots_) n += s.obs.size();
  return n;
}

const std::vector<Truth>& TruthCache::truths(const ProgramPoint& point, const APtr& body) {
  auto& byNode = cache_[point];
  auto it = byNode.find(body.get());
  if (it != byNode.end()) return it->second.truths;
  Entry e;
  e.keepAlive = body;
  const auto& obs = index_.observations(point);
  e.truths.reserve(obs.size());
  CompiledAssertion c(body);
  Binder binder(index_.unit(), point, c.idents());
  std::vector<const Value*> env;
  for (const Observation* o : obs) {
    binder.bind(*o, env);
    e.truths.push_back(c.eval(env).truth);
  }
  return byNode.emplace(body.get(), std::move(e)).first->second.truths;
}

void TruthCache::evaluate(const Assertion& a, std::vector<Truth>& out, std::vector<bool>* guardTrue) {
  out.clear();
  if (guardTrue) guardTrue->clear();
  if (a.body->kind != AKind::Implies) {
    out = truths(a.point, a.body);
    if (guardTrue) guardTrue->assign(out.size(), true);
    return;
  }
  const auto& g = truths(a.point, a.body->kids[0]);
  const auto& k = truths(a.point, a.body->kids[1]);
  out.resize(g.size());
  if (guardTrue) guardTrue->resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    // Kleene: !g || k
    Truth r;
    if (g[i] == Truth::False || k[i] == Truth::True) r = Truth::True;
    else if (g[i] == Truth::Error || k[i] == Truth::Error) r = Truth::Error;
    else r = Truth::False;
    out[i] = r;
    if (guardTrue) (*guardTrue)[i] = g[i] == Truth::True;
  }
}

}  // namespace deltaspec
