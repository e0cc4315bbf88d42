#include <algorithm>

#include "deltaspec/assertion.hpp"
#include "deltaspec/error.hpp"

namespace deltaspec {

namespace {

template <typename T>
void arrays_of(const std::vector<T>& elems, int len, std::vector<Value>& out) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
  for (;;) {
    std::vector<T> arr;
    for (auto i : idx) arr.push_back(elems[i]);
    out.emplace_back(std::move(arr));
    int k = len - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == elems.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
}

}  // namespace

std::vector<Value> domain_values(Type t, const DomainConfig& d) {
  std::vector<Value> out;
  switch (t) {
    case Type::Int:
      for (auto v : d.intDomain) out.emplace_back(v);
      break;
    case Type::Real:
      for (auto v : d.realDomain) out.emplace_back(v);
      break;
    case Type::Bool:
      out.emplace_back(false);
      out.emplace_back(true);
      break;
    case Type::IntArray:
      for (int len : d.arrayLens) arrays_of(d.intDomain, len, out);
      break;
    case Type::RealArray:
      for (int len : d.arrayLens) arrays_of(d.realDomain, len, out);
      break;
    case Type::Void: break;
  }
  return out;
}

EquivResult bounded_equiv(const APtr& a, const APtr& b, const DomainConfig& d) {
  if (d.intDomain.empty() || d.realDomain.empty() || d.arrayLens.empty())
    throw Error(ErrorCode::InputError, "equivalence domains must be non-empty");
  CompiledAssertion ca(a);
  CompiledAssertion cb(b);
  std::vector<Ident> ids = ca.idents();
  for (const auto& id : cb.idents())
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  std::sort(ids.begin(), ids.end());

  std::vector<std::vector<Value>> domains;
  std::uint64_t total = 1;
  for (const auto& id : ids) {
    domains.push_back(domain_values(id.type, d));
    total *= domains.back().size();
    if (total > d.cap)
      throw Error(ErrorCode::DomainTooLarge, "bounded equivalence needs more than " + std::to_string(d.cap) +
                                                 " environments");
  }

  auto slots_for = [&](const CompiledAssertion& c) {
    std::vector<std::size_t> m;
    for (const auto& id : c.idents())
      m.push_back(static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin()));
    return m;
  };
  auto mapA = slots_for(ca);
  auto mapB = slots_for(cb);

  std::vector<std::size_t> pos(ids.size(), 0);
  std::vector<const Value*> envA(mapA.size()), envB(mapB.size());
  EquivResult res;
  for (;;) {
    for (std::size_t i = 0; i < mapA.size(); ++i) envA[i] = &domains[mapA[i]][pos[mapA[i]]];
    for (std::size_t i = 0; i < mapB.size(); ++i) envB[i] = &domains[mapB[i]][pos[mapB[i]]];
    EvalResult ra = ca.eval(envA);
    EvalResult rb = cb.eval(envB);
    if (ra.truth != rb.truth) {
      res.equivalent = false;
      for (std::size_t i = 0; i < ids.size(); ++i) res.witness.emplace_back(ids[i], domains[i][pos[i]]);
      res.left = ra;
      res.right = rb;
      return res;
    }
    int k = static_cast<int>(ids.size()) - 1;
    while (k >= 0 && ++pos[static_cast<std::size_t>(k)] == domains[static_cast<std::size_t>(k)].size())
      pos[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return res;
}

}  // namespace deltaspec
