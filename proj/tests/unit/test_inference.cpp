#include <deltaspec/error.hpp>
#include <deltaspec/grammar.hpp>
#include <deltaspec/inference.hpp>
#include <deltaspec/testgen.hpp>
#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace deltaspec;

namespace {

struct Fixture {
  Unit pre = fixtures::sum_pre();
  Unit post = fixtures::sum_post();

  Assertion parse(const std::string& label, const std::string& text) const {
    auto p = *point_from_label(post, label);
    return make_assertion(p, normalize(parse_assertion(text, make_scope(pre, post, p))));
  }

  TestSuite suite(const Unit& u, std::uint64_t seed = 1, int maxTests = 100) const {
    GenConfig g;
    g.seed = seed;
    g.maxTests = maxTests;
    g.realPool = {-1.5, -1.0, 0.0, 1.0, 2.5};
    return generate_suite(u, g);
  }

  std::vector<Assertion> candidates(std::size_t perPoint) const {
    std::vector<Assertion> out;
    for (const auto& p : diff_common_points(pre, post).shared) {
      auto s = fuzz_candidates(instantiate_grammar(pre, post, p), 1, perPoint);
      out.insert(out.end(), s.items.begin(), s.items.end());
    }
    return out;
  }
};

SpecConfig no_filter() {
  SpecConfig c;
  c.mutationFilter = false;
  return c;
}

Status status_of(const StatusTable& t, const Assertion& a) {
  const StatusEntry* e = t.find(a.key());
  EXPECT_NE(e, nullptr) << a.key();
  return e ? e->status : Status::Undetermined;
}

}  // namespace

TEST(Inference, ClassifyExamples) {
  Fixture f;
  std::vector<Assertion> cands{f.parse("inv", "n >= 0"), f.parse("inv", "n == 0 ==> isnan(value)"),
                               f.parse("increment", "n == old(n) + 1")};
  auto post = classify(cands, f.post, f.suite(f.post), no_filter(), "post");
  EXPECT_EQ(status_of(post, cands[0]), Status::Valid);
  EXPECT_EQ(status_of(post, cands[1]), Status::Invalid);
  EXPECT_TRUE(post.find(cands[1].key())->falsifier.has_value());
  EXPECT_EQ(status_of(post, cands[2]), Status::Valid);
  auto pre = classify(cands, f.pre, f.suite(f.pre), no_filter(), "pre");
  EXPECT_EQ(status_of(pre, cands[1]), Status::Valid);
  EXPECT_EQ(pre.version, "pre");
}

TEST(Inference, MinSupportGivesUndetermined) {
  Fixture f;
  auto s = f.suite(f.post, 1, 100);
  // Guard reachable only on the first increment of a test.
  auto a = f.parse("increment", "old(n) == 0 && d == 2.5 ==> value == 2.5");
  int support = 0;
  for (const auto& r : s.records)
    for (const auto& o : r.observations)
      if (o.point.label() == "increment" && std::get<std::int64_t>(o.preState[1]) == 0 &&
          std::get<double>(o.params[0]) == 2.5)
        ++support;
  ASSERT_GT(support, 0);
  SpecConfig cfg = no_filter();
  cfg.minSupport = support + 1;
  EXPECT_EQ(status_of(classify({a}, f.post, s, cfg, "post"), a), Status::Undetermined);
  cfg.minSupport = support;
  // Implications count only observations where the guard holds.
  EXPECT_EQ(status_of(classify({a}, f.post, s, cfg, "post"), a), Status::Valid);
}

TEST(Inference, EmptySuiteLeavesEverythingUndetermined) {
  Fixture f;
  TestSuite empty;
  empty.unitName = "Sum";
  auto t = classify({f.parse("inv", "n >= 0")}, f.post, empty, no_filter(), "post");
  EXPECT_EQ(t.entries[0].status, Status::Undetermined);
  EXPECT_EQ(t.entries[0].evalCount, 0);
  EXPECT_FALSE(t.warnings.empty());
  EXPECT_TRUE(t.spec_keys().empty());
}

TEST(Inference, EvalErrorPolicy) {
  Unit u = parse_unit("class Z { field n: int; method set(x: int) { n := x; } }");
  auto p = ProgramPoint::invariant("Z");
  auto a = make_assertion(p, normalize(parse_assertion("n / n == 1", make_scope(u, p))));
  GenConfig g;
  g.maxTests = 30;
  auto s = generate_suite(u, g);
  SpecConfig cfg = no_filter();
  EXPECT_EQ(status_of(classify({a}, u, s, cfg, "post"), a), Status::Invalid);
  cfg.evalErrorPolicy = EvalErrorPolicy::Skips;
  EXPECT_EQ(status_of(classify({a}, u, s, cfg, "post"), a), Status::Valid);
}

TEST(Inference, TableInvariantsAndOrderIndependence) {
  Fixture f;
  auto cands = f.candidates(1500);
  auto s = f.suite(f.post);
  auto t = classify(cands, f.post, s, no_filter(), "post");
  ASSERT_EQ(t.entries.size(), cands.size());
  for (const auto& e : t.entries) {
    if (e.status == Status::Valid) EXPECT_GE(e.evalCount, t.config.minSupport);
    if (e.status == Status::Invalid) EXPECT_TRUE(e.falsifier.has_value());
    if (e.status == Status::Undetermined) EXPECT_LT(e.evalCount, t.config.minSupport);
  }
  TestSuite rev = s;
  std::reverse(rev.tests.begin(), rev.tests.end());
  std::reverse(rev.records.begin(), rev.records.end());
  auto t2 = classify(cands, f.post, rev, no_filter(), "post");
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    EXPECT_EQ(t.entries[i].status, t2.entries[i].status);
    EXPECT_EQ(t.entries[i].evalCount, t2.entries[i].evalCount);
    EXPECT_EQ(t.entries[i].falsifier, t2.entries[i].falsifier);
  }
  EXPECT_TRUE(soundness_violations(t, f.post, s).empty());
}

TEST(Inference, InvalidIsMonotoneInTests) {
  Fixture f;
  auto cands = f.candidates(800);
  auto small = f.suite(f.pre, 3, 20);
  auto big = small;
  auto extra = f.suite(f.pre, 4, 40);
  for (std::size_t i = 0; i < extra.tests.size(); ++i) {
    extra.tests[i].seedId += 1000;
    big.tests.push_back(extra.tests[i]);
    big.records.push_back(extra.records[i]);
  }
  auto a = classify(cands, f.pre, small, no_filter(), "pre");
  auto b = classify(cands, f.pre, big, no_filter(), "pre");
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (a.entries[i].status == Status::Invalid) EXPECT_EQ(b.entries[i].status, Status::Invalid) << cands[i].key();
}

TEST(Inference, MutationFilterDemotesNonKilling) {
  Fixture f;
  auto cands = std::vector<Assertion>{f.parse("inv", "n >= 0"), f.parse("increment", "n == old(n) + 1"),
                                      f.parse("getResult", "result == value"),
                                      f.parse("increment", "value == old(value) + d")};
  auto s = f.suite(f.post);
  SpecConfig cfg;
  auto r = infer_spec(f.post, s, cands, cfg, "post");
  EXPECT_FALSE(r.mutants.empty());
  ASSERT_EQ(r.kills.rows.size(), r.table.valid_assertions().size());
  for (const auto& e : r.table.entries) {
    if (e.status != Status::Valid) {
      EXPECT_EQ(e.bucket, Bucket::NotValid);
      continue;
    }
    EXPECT_EQ(e.bucket == Bucket::Spec, e.killCount > 0) << e.assertion.key();
  }
  const auto* inc = r.table.find(cands[3].key());
  ASSERT_NE(inc, nullptr);
  EXPECT_EQ(inc->bucket, Bucket::Spec);
}

TEST(Inference, FilterEdgeCases) {
  Fixture f;
  auto cands = std::vector<Assertion>{f.parse("inv", "n >= 0"), f.parse("inv", "0 <= n + 1"),
                                      f.parse("increment", "n == old(n) + 1")};
  auto s = f.suite(f.post);
  auto table = classify(cands, f.post, s, SpecConfig{}, "post");
  KillMatrix zero;
  zero.rows = table.valid_assertions();
  zero.cols.resize(2);
  zero.cells.assign(zero.rows.size(), std::vector<KillCell>(2));
  auto filtered = filter_by_mutation(table, zero, SpecConfig{});
  EXPECT_TRUE(filtered.spec_keys().empty());
  for (const auto& e : filtered.entries)
    if (e.status == Status::Valid) EXPECT_EQ(e.bucket, Bucket::DiscardedIrrelevant);

  KillMatrix same;
  same.rows = table.valid_assertions();
  same.cols.resize(1);
  same.cells.assign(same.rows.size(), std::vector<KillCell>{KillCell{true, 0}});
  SpecConfig reps;
  reps.keepRepresentativesOnly = true;
  auto grouped = filter_by_mutation(table, same, reps);
  EXPECT_EQ(grouped.spec_keys().size(), 1u);

  KillMatrix wrong;
  EXPECT_THROW(filter_by_mutation(table, KillMatrix{zero.rows, {}, {}, {}}, SpecConfig{}), Error);
  EXPECT_THROW(
      {
        try {
          filter_by_mutation(table, wrong, SpecConfig{});
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::MatrixMismatch);
          throw;
        }
      },
      Error);
}

TEST(Inference, PostSpecContainsFig5Lines) {
  Fixture f;
  auto cands = f.candidates(20000);
  auto r = infer_spec(f.post, f.suite(f.post), cands, SpecConfig{}, "post");
  auto spec = r.table.spec_keys();
  for (auto [label, text] : std::vector<std::pair<std::string, std::string>>{
           {"inv", "n == 0 ==> value == 0.0"},
           {"inv", "n >= 0"},
           {"increment", "n == old(n) + 1"},
           {"increment", "value == old(value) + d"}}) {
    auto want = f.parse(label, text);
    bool found = false;
    for (const auto& key : spec) {
      const auto* e = r.table.find(key);
      if (e->assertion.point != want.point) continue;
      if (bounded_equiv(e->assertion.body, want.body).equivalent) {
        found = true;
        break;
      }
    }
    EXPECT_TRUE(found) << label << ": " << text;
  }
}

TEST(Inference, RefactorGivesIdenticalValidSets) {
  Unit pre = parse_unit(fixtures::read_corpus("refactor_iterator/pre/SingletonListIterator.dl"));
  Unit post = parse_unit(fixtures::read_corpus("refactor_iterator/post/SingletonListIterator.dl"));
  std::vector<Assertion> cands;
  for (const auto& p : diff_common_points(pre, post).shared) {
    auto s = fuzz_candidates(instantiate_grammar(pre, post, p), 1, 1500);
    cands.insert(cands.end(), s.items.begin(), s.items.end());
  }
  GenConfig g;
  auto a = classify(cands, pre, generate_suite(pre, g), no_filter(), "pre");
  auto b = classify(cands, post, generate_suite(post, g), no_filter(), "post");
  std::vector<std::string> va, vb;
  for (const auto& x : a.valid_assertions()) va.push_back(x.key());
  for (const auto& x : b.valid_assertions()) vb.push_back(x.key());
  EXPECT_EQ(va, vb);
}
