#include <deltaspec/delta.hpp>
#include <deltaspec/error.hpp>
#include <deltaspec/grammar.hpp>
#include <deltaspec/inference.hpp>
#include <deltaspec/testgen.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"

using namespace deltaspec;

namespace {

struct Tables {
  Unit pre = fixtures::sum_pre();
  Unit post = fixtures::sum_post();
  StatusTable a, b;

  Assertion parse(const std::string& label, const std::string& text) const {
    auto p = *point_from_label(post, label);
    return make_assertion(p, normalize(parse_assertion(text, make_scope(pre, post, p))));
  }

  void add(const std::string& label, const std::string& text, Status sPre, Status sPost) {
    auto as = parse(label, text);
    auto entry = [&](Status s) {
      StatusEntry e;
      e.assertion = as;
      e.status = s;
      e.evalCount = s == Status::Undetermined ? 1 : 10;
      if (s == Status::Invalid) e.falsifier = ObsRef{0, 1};
      e.bucket = s == Status::Valid ? Bucket::Spec : Bucket::NotValid;
      return e;
    };
    a.entries.push_back(entry(sPre));
    b.entries.push_back(entry(sPost));
  }
};

std::set<std::string> keys(const std::vector<DeltaEntry>& p) {
  std::set<std::string> out;
  for (const auto& e : p) out.insert(e.assertion.key());
  return out;
}

Tables fig5() {
  Tables t;
  t.a.version = "pre";
  t.b.version = "post";
  t.add("inv", "n == 0 ==> value == 0.0", Status::Invalid, Status::Valid);
  t.add("inv", "n == 0 ==> isnan(value)", Status::Valid, Status::Invalid);
  t.add("increment", "n == old(n) + 1", Status::Valid, Status::Valid);
  t.add("inv", "value <= 2.5", Status::Undetermined, Status::Valid);
  t.add("inv", "n <= 7", Status::Valid, Status::Undetermined);
  t.add("inv", "n == 1", Status::Invalid, Status::Invalid);
  return t;
}

}  // namespace

TEST(Delta, StrictModeExamples) {
  auto t = fig5();
  auto d = compute_delta(t.a, t.b, DeltaMode::Strict);
  EXPECT_EQ(keys(d.added), std::set<std::string>{t.parse("inv", "n == 0 ==> value == 0.0").key()});
  EXPECT_EQ(keys(d.removed), std::set<std::string>{t.parse("inv", "n == 0 ==> isnan(value)").key()});
  EXPECT_EQ(keys(d.preserved), std::set<std::string>{t.parse("increment", "n == old(n) + 1").key()});
  EXPECT_EQ(keys(d.undetermined),
            (std::set<std::string>{t.parse("inv", "value <= 2.5").key(), t.parse("inv", "n <= 7").key()}));
  EXPECT_EQ(d.mode, DeltaMode::Strict);
}

TEST(Delta, PaperModeUsesSetDifference) {
  auto t = fig5();
  auto d = compute_delta(t.a, t.b, DeltaMode::Paper);
  EXPECT_EQ(keys(d.added), (std::set<std::string>{t.parse("inv", "n == 0 ==> value == 0.0").key(),
                                                   t.parse("inv", "value <= 2.5").key()}));
  EXPECT_EQ(keys(d.removed), (std::set<std::string>{t.parse("inv", "n == 0 ==> isnan(value)").key(),
                                                     t.parse("inv", "n <= 7").key()}));
  EXPECT_TRUE(d.undetermined.empty());
}

TEST(Delta, SwapDuality) {
  auto t = fig5();
  for (auto mode : {DeltaMode::Strict, DeltaMode::Paper}) {
    auto fwd = compute_delta(t.a, t.b, mode);
    auto bwd = compute_delta(t.b, t.a, mode);
    EXPECT_EQ(keys(fwd.added), keys(bwd.removed));
    EXPECT_EQ(keys(fwd.removed), keys(bwd.added));
    EXPECT_EQ(keys(fwd.preserved), keys(bwd.preserved));
    EXPECT_EQ(keys(fwd.undetermined), keys(bwd.undetermined));
  }
}

TEST(Delta, IdenticalValidSetsGiveEmptyDelta) {
  Tables t;
  t.add("inv", "n >= 0", Status::Valid, Status::Valid);
  t.add("inv", "n == 3", Status::Invalid, Status::Invalid);
  for (auto mode : {DeltaMode::Strict, DeltaMode::Paper}) {
    auto d = compute_delta(t.a, t.b, mode);
    EXPECT_TRUE(d.added.empty());
    EXPECT_TRUE(d.removed.empty());
    EXPECT_EQ(d.preserved.size(), 1u);
  }
}

TEST(Delta, CandidateMismatch) {
  auto t = fig5();
  t.b.entries.pop_back();
  try {
    compute_delta(t.a, t.b, DeltaMode::Strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CandidateMismatch);
  }
}

TEST(Delta, ReduceMergesEquivalentWithinPartitionsOnly) {
  Tables t;
  t.add("inv", "n == 0 ==> value == 0.0", Status::Invalid, Status::Valid);
  t.add("inv", "n != 0 || value == 0.0", Status::Invalid, Status::Valid);
  t.add("inv", "n >= 0", Status::Valid, Status::Valid);
  t.add("inv", "-1 < n", Status::Valid, Status::Valid);
  t.add("inv", "0 < n + 1", Status::Invalid, Status::Valid);
  auto raw = compute_delta(t.a, t.b, DeltaMode::Strict);
  auto r = reduce_equivalent(raw);
  EXPECT_TRUE(r.reduced);
  ASSERT_EQ(r.added.size(), 2u);  // `0 < n + 1` stays apart from the preserved `n >= 0`
  ASSERT_EQ(r.preserved.size(), 1u);
  EXPECT_EQ(r.preserved[0].members.size(), 2u);
  for (const auto& e : r.added) {
    if (e.members.size() == 2) {
      EXPECT_LE(e.assertion.text.size(), t.parse("inv", "n != 0 || value == 0.0").text.size());
      EXPECT_TRUE(std::is_sorted(e.members.begin(), e.members.end()));
    }
  }
  DeltaReport single;
  single.added.push_back(DeltaEntry{t.parse("inv", "n >= 0"), {t.parse("inv", "n >= 0").key()}});
  auto s = reduce_equivalent(single);
  ASSERT_EQ(s.added.size(), 1u);
  EXPECT_EQ(s.added[0].assertion.key(), single.added[0].assertion.key());
}

TEST(Delta, ReduceNeverMergesAcrossPoints) {
  Tables t;
  t.add("inv", "n >= 0", Status::Invalid, Status::Valid);
  t.add("increment", "n >= 0", Status::Invalid, Status::Valid);
  auto r = reduce_equivalent(compute_delta(t.a, t.b, DeltaMode::Strict));
  EXPECT_EQ(r.added.size(), 2u);
}

TEST(Delta, ParseTruth) {
  auto lines = parse_truth("# comment\n\n+ inv: n >= 0\n- increment: value == d\n= getResult: result == value\n");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].tag, TruthTag::Added);
  EXPECT_EQ(lines[0].point, "inv");
  EXPECT_EQ(lines[0].text, "n >= 0");
  EXPECT_EQ(lines[0].line, 3);
  EXPECT_EQ(lines[1].tag, TruthTag::Removed);
  EXPECT_EQ(lines[2].tag, TruthTag::Preserved);
  EXPECT_THROW(parse_truth("* inv: n >= 0\n"), Error);
  EXPECT_THROW(parse_truth("+ no colon here\n"), Error);
}

TEST(Delta, MatchTruthPartitionsAndExpressibility) {
  auto t = fig5();
  auto d = reduce_equivalent(compute_delta(t.a, t.b, DeltaMode::Strict));
  auto truth = parse_truth(
      "+ inv: n != 0 || value == 0.0\n"
      "- inv: n == 0 ==> isnan(value)\n"
      "+ increment: n == old(n) + 1\n"
      "= increment: n == old(n) + 1\n"
      "+ inv: value.equals(0)\n"
      "- nowhere: n == 0\n");
  auto m = match_ground_truth(d, truth, t.pre, t.post);
  ASSERT_EQ(m.entries.size(), 6u);
  EXPECT_EQ(m.entries[0].status, MatchStatus::Matched);
  EXPECT_EQ(m.entries[1].status, MatchStatus::Matched);
  EXPECT_EQ(m.entries[2].status, MatchStatus::Unmatched);  // preserved, not added
  EXPECT_EQ(m.entries[3].status, MatchStatus::Matched);
  EXPECT_EQ(m.entries[4].status, MatchStatus::Inexpressible);
  EXPECT_EQ(m.entries[5].status, MatchStatus::Inexpressible);
  EXPECT_EQ(m.expressible, 4);
  EXPECT_EQ(m.matched, 3);
  EXPECT_DOUBLE_EQ(m.recall, 0.75);
  EXPECT_FALSE(m.recallByConvention);
  EXPECT_TRUE(m.surplus.empty());
}

TEST(Delta, MatchEmptyTruthByConvention) {
  DeltaReport empty;
  auto m = match_ground_truth(empty, {}, fixtures::sum_pre(), fixtures::sum_post());
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_TRUE(m.recallByConvention);
  EXPECT_EQ(m.expressible, 0);
}

TEST(Delta, SurplusListsUnmatchedDeltaEntries) {
  auto t = fig5();
  auto d = compute_delta(t.a, t.b, DeltaMode::Strict);
  auto m = match_ground_truth(d, parse_truth("+ inv: n == 0 ==> value == 0.0\n"), t.pre, t.post);
  EXPECT_EQ(m.surplus, std::vector<std::string>{t.parse("inv", "n == 0 ==> isnan(value)").key()});
}

TEST(Delta, RealTablesSatisfyInvariants) {
  Unit pre = fixtures::sum_pre(), post = fixtures::sum_post();
  std::vector<Assertion> cands;
  for (const auto& p : diff_common_points(pre, post).shared) {
    auto s = fuzz_candidates(instantiate_grammar(pre, post, p), 2, 2000);
    cands.insert(cands.end(), s.items.begin(), s.items.end());
  }
  GenConfig g;
  g.realPool = {-1.5, -1.0, 0.0, 1.0, 2.5};
  auto tp = infer_spec(pre, generate_suite(pre, g), cands, SpecConfig{}, "pre").table;
  auto tq = infer_spec(post, generate_suite(post, g), cands, SpecConfig{}, "post").table;
  auto d = compute_delta(tp, tq, DeltaMode::Strict);
  auto A = keys(d.added), R = keys(d.removed), P = keys(d.preserved);
  for (const auto& k : A) {
    EXPECT_FALSE(R.count(k));
    EXPECT_FALSE(P.count(k));
    EXPECT_EQ(tp.find(k)->status, Status::Invalid);
    EXPECT_TRUE(tp.find(k)->falsifier.has_value());
  }
  for (const auto& k : R) {
    EXPECT_FALSE(P.count(k));
    EXPECT_EQ(tq.find(k)->status, Status::Invalid);
  }
  EXPECT_FALSE(A.empty());
  EXPECT_FALSE(R.empty());
}
