#include "deltaspec/delta.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"

namespace deltaspec {

std::string_view delta_mode_name(DeltaMode m) { return m == DeltaMode::Paper ? "paper" : "strict"; }

std::string_view truth_tag_name(TruthTag t) {
  switch (t) {
    case TruthTag::Added: return "added";
    case TruthTag::Removed: return "removed";
    case TruthTag::Preserved: return "preserved";
  }
  return "?";
}

std::string_view match_status_name(MatchStatus s) {
  switch (s) {
    case MatchStatus::Matched: return "MATCHED";
    case MatchStatus::Unmatched: return "UNMATCHED";
    case MatchStatus::Inexpressible: return "INEXPRESSIBLE";
  }
  return "?";
}

namespace {

bool valid(const StatusEntry* e) { return e && e->status == Status::Valid; }
bool invalid(const StatusEntry* e) { return e && e->status == Status::Invalid; }

void sort_partition(std::vector<DeltaEntry>& p) {
  std::sort(p.begin(), p.end(),
            [](const DeltaEntry& a, const DeltaEntry& b) { return a.assertion.key() < b.assertion.key(); });
}

DeltaEntry single(const Assertion& a) { return DeltaEntry{a, {a.key()}}; }

}  // namespace

DeltaReport compute_delta(const StatusTable& pre, const StatusTable& post, DeltaMode mode) {
  std::set<std::string> preKeys, postKeys;
  for (const auto& e : pre.entries) preKeys.insert(e.assertion.key());
  for (const auto& e : post.entries) postKeys.insert(e.assertion.key());
  if (preKeys != postKeys) throw Error(ErrorCode::CandidateMismatch, "status tables cover different candidates");

  DeltaReport r;
  r.mode = mode;
  for (const auto& e : post.entries) {
    const StatusEntry* p = pre.find(e.assertion.key());
    bool vPost = valid(&e), vPre = valid(p);
    if (vPost && vPre) r.preserved.push_back(single(e.assertion));
    else if (!vPost && !vPre) continue;
    else if (mode == DeltaMode::Paper) (vPost ? r.added : r.removed).push_back(single(e.assertion));
    else if (vPost && invalid(p)) r.added.push_back(single(e.assertion));
    else if (vPre && invalid(&e)) r.removed.push_back(single(e.assertion));
    else r.undetermined.push_back(single(e.assertion));
  }
  for (auto* p : {&r.added, &r.removed, &r.preserved, &r.undetermined}) sort_partition(*p);
  return r;
}

namespace {

bool shorter(const Assertion& a, const Assertion& b) {
  if (a.text.size() != b.text.size()) return a.text.size() < b.text.size();
  return a.key() < b.key();
}

constexpr std::size_t kSignatureSamples = 64;

// Coarse classes from a shared random sample of environments; every class is
// then split exactly with pairwise bounded_equiv.
std::vector<DeltaEntry> reduce_point(std::vector<DeltaEntry> entries, const DomainConfig& d) {
  if (entries.size() < 2) return entries;
  std::vector<Ident> ids;
  std::vector<CompiledAssertion> compiled;
  for (const auto& e : entries) {
    compiled.emplace_back(e.assertion.body);
    for (const auto& id : compiled.back().idents())
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<std::vector<Value>> domains;
  for (const auto& id : ids) domains.push_back(domain_values(id.type, d));

  std::vector<std::vector<std::size_t>> slots(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k)
    for (const auto& id : compiled[k].idents())
      slots[k].push_back(static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin()));

  std::vector<const Value*> env;
  auto truth_at = [&](std::size_t k, const std::vector<std::size_t>& pick) {
    env.clear();
    for (auto s : slots[k]) env.push_back(&domains[s][pick[s]]);
    return static_cast<char>('0' + static_cast<int>(compiled[k].eval(env).truth));
  };

  Rng rng(0x5eed);
  std::vector<std::string> sig(entries.size());
  std::vector<std::size_t> pick(ids.size());
  for (std::size_t s = 0; s < kSignatureSamples; ++s) {
    for (std::size_t i = 0; i < ids.size(); ++i) pick[i] = static_cast<std::size_t>(rng.below(domains[i].size()));
    for (std::size_t k = 0; k < entries.size(); ++k) sig[k] += truth_at(k, pick);
  }

  std::map<std::string, std::vector<std::size_t>> coarse;
  for (std::size_t k = 0; k < entries.size(); ++k) coarse[sig[k]].push_back(k);

  std::vector<DeltaEntry> out;
  for (auto& [_, members] : coarse) {
    std::vector<std::vector<std::size_t>> classes;
    for (auto k : members) {
      bool placed = false;
      for (auto& c : classes) {
        if (bounded_equiv(entries[c.front()].assertion.body, entries[k].assertion.body, d).equivalent) {
          c.push_back(k);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({k});
    }
    for (auto& c : classes) {
      std::size_t best = c.front();
      for (auto k : c)
        if (shorter(entries[k].assertion, entries[best].assertion)) best = k;
      DeltaEntry merged;
      merged.assertion = entries[best].assertion;
      for (auto k : c) merged.members.insert(merged.members.end(), entries[k].members.begin(), entries[k].members.end());
      std::sort(merged.members.begin(), merged.members.end());
      out.push_back(std::move(merged));
    }
  }
  return out;
}

std::vector<DeltaEntry> reduce_partition(const std::vector<DeltaEntry>& part, const DomainConfig& d) {
  std::map<ProgramPoint, std::vector<DeltaEntry>> byPoint;
  for (const auto& e : part) byPoint[e.assertion.point].push_back(e);
  std::vector<DeltaEntry> out;
  for (auto& [_, entries] : byPoint) {
    auto reduced = reduce_point(std::move(entries), d);
    out.insert(out.end(), reduced.begin(), reduced.end());
  }
  sort_partition(out);
  return out;
}

}  // namespace

DeltaReport reduce_equivalent(DeltaReport report, const DomainConfig& d) {
  for (auto* p : {&report.added, &report.removed, &report.preserved, &report.undetermined})
    *p = reduce_partition(*p, d);
  report.reduced = true;
  return report;
}

std::vector<TruthLine> parse_truth(std::string_view content) {
  std::vector<TruthLine> out;
  int lineNo = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string line(content.substr(pos, end - pos));
    pos = end + 1;
    ++lineNo;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      if (end == content.size()) break;
      continue;
    }
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    TruthLine t;
    t.line = lineNo;
    switch (line[0]) {
      case '+': t.tag = TruthTag::Added; break;
      case '-': t.tag = TruthTag::Removed; break;
      case '=': t.tag = TruthTag::Preserved; break;
      default: throw Error(ErrorCode::InputError, "truth line " + std::to_string(lineNo) + ": expected '+', '-' or '='");
    }
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::InputError, "truth line " + std::to_string(lineNo) + ": expected 'point: assertion'");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    t.point = trim(line.substr(1, colon - 1));
    t.text = trim(line.substr(colon + 1));
    out.push_back(std::move(t));
    if (end == content.size()) break;
  }
  return out;
}

MatchResult match_ground_truth(const DeltaReport& report, const std::vector<TruthLine>& truth, const Unit& pre,
                               const Unit& post, const DomainConfig& d) {
  MatchResult res;
  std::set<std::string> matchedReported;
  for (const auto& t : truth) {
    TruthMatch m;
    m.truth = t;
    std::optional<ProgramPoint> point = point_from_label(post, t.point);
    if (!point) point = point_from_label(pre, t.point);
    APtr body;
    if (!point) {
      m.status = MatchStatus::Inexpressible;
      m.reason = "unknown program point '" + t.point + "'";
    } else {
      try {
        body = normalize(parse_assertion(t.text, make_scope(pre, post, *point)));
      } catch (const Error& e) {
        m.status = MatchStatus::Inexpressible;
        m.reason = e.what();
      }
    }
    if (m.status != MatchStatus::Inexpressible) {
      ++res.expressible;
      const auto& part = t.tag == TruthTag::Added     ? report.added
                         : t.tag == TruthTag::Removed ? report.removed
                                                      : report.preserved;
      for (const auto& e : part) {
        if (e.assertion.point != *point) continue;
        bool eq = false;
        try {
          eq = bounded_equiv(body, e.assertion.body, d).equivalent;
        } catch (const Error&) {
          eq = false;
        }
        if (eq) {
          m.status = MatchStatus::Matched;
          m.matchedKey = e.assertion.key();
          matchedReported.insert(m.matchedKey);
          ++res.matched;
          break;
        }
      }
    }
    res.entries.push_back(std::move(m));
  }
  if (res.expressible == 0) {
    res.recall = 1.0;
    res.recallByConvention = true;
  } else {
    res.recall = static_cast<double>(res.matched) / static_cast<double>(res.expressible);
  }
  for (const auto* part : {&report.added, &report.removed})
    for (const auto& e : *part)
      if (!matchedReported.count(e.assertion.key())) res.surplus.push_back(e.assertion.key());
  return res;
}

}  // namespace deltaspec
