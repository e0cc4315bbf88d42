#include <deltaspec/assertion.hpp>
#include <deltaspec/error.hpp>
#include <deltaspec/mutation.hpp>
#include <deltaspec/testgen.hpp>
#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace deltaspec;

namespace {

std::vector<Mutant> of(const std::vector<Mutant>& all, MutOp op, const std::string& method) {
  std::vector<Mutant> out;
  for (const auto& m : all)
    if (m.id.op == op && m.id.method == method) out.push_back(m);
  return out;
}

Assertion parse(const Unit& u, const std::string& label, const std::string& text) {
  auto p = *point_from_label(u, label);
  return make_assertion(p, normalize(parse_assertion(text, make_scope(u, p))));
}

TestCase make_test(std::vector<Call> calls, std::uint64_t id = 0) { return TestCase{id, std::move(calls)}; }

}  // namespace

TEST(Mutation, AorOnAccumulate) {
  auto ms = of(generate_mutants(fixtures::sum_post()), MutOp::AOR, "increment");
  // `value + d` (real): -, *, /, %; `n + 1` (int): four more.
  std::vector<std::string> bodies;
  for (const auto& m : ms) bodies.push_back(print_unit(m.unit));
  bool minus = std::any_of(bodies.begin(), bodies.end(),
                           [](const std::string& b) { return b.find("value := value - d;") != std::string::npos; });
  EXPECT_TRUE(minus);
  int onValue = 0;
  for (const auto& m : ms) onValue += print_unit(m.unit).find("value := value + d;") == std::string::npos ? 1 : 0;
  EXPECT_EQ(onValue, 4);
}

TEST(Mutation, RorOnEqualityHasFiveVariants) {
  auto ms = of(generate_mutants(fixtures::sum_pre()), MutOp::ROR, "increment");
  EXPECT_EQ(ms.size(), 5u);
  std::set<int> variants;
  for (const auto& m : ms) variants.insert(m.id.variant);
  EXPECT_EQ(variants.size(), 5u);
}

TEST(Mutation, EmptyBodyHasNoMutants) {
  Unit u = parse_unit("class E { method m() { } }");
  EXPECT_TRUE(generate_mutants(u).empty());
}

TEST(Mutation, OperatorFamilies) {
  Unit u = parse_unit(R"(class M {
    field f: int;
    field b: bool;
    method m(x: int) {
      if (x > 2 && b) { f := 3; }
      while (f < x) { f := f + 1; }
    }
  })");
  auto all = generate_mutants(u);
  auto count = [&](MutOp op) { return of(all, op, "m").size(); };
  EXPECT_EQ(count(MutOp::ROR), 10u);
  EXPECT_EQ(count(MutOp::LOR), 1u);
  EXPECT_EQ(count(MutOp::NEG), 2u);
  EXPECT_EQ(count(MutOp::SDL), 2u);
  EXPECT_EQ(count(MutOp::AOR), 4u);
  EXPECT_GE(count(MutOp::CRP), 5u);  // 2 -> {3,1,0}, 3 -> {4,2,0}, 1 -> {2,0} after dedup of 1 - 1
  auto again = generate_mutants(u);
  ASSERT_EQ(all.size(), again.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].id, again[i].id);
  EXPECT_EQ(generate_mutants(u, {MutOp::LOR}).size(), 1u);
}

TEST(Mutation, MutantIdText) {
  auto ms = generate_mutants(fixtures::sum_post());
  ASSERT_FALSE(ms.empty());
  EXPECT_EQ(ms[0].id.text().substr(0, 4), std::string(mut_op_name(ms[0].id.op)) + ":");
  EXPECT_EQ(mut_op_from_name("SDL"), MutOp::SDL);
  EXPECT_FALSE(mut_op_from_name("XYZ").has_value());
}

TEST(Mutation, Transplant) {
  Unit pre = fixtures::sum_pre(), post = fixtures::sum_post();
  auto ms = generate_mutants(post);
  int getResult = 0, increment = 0;
  for (const auto& m : ms) {
    auto t = transplant(m, post, pre);
    if (m.id.method == "getResult") {
      ++getResult;
      ASSERT_TRUE(t.has_value());
      EXPECT_EQ(t->id, m.id);
    }
    if (m.id.method == "increment") {
      ++increment;
      EXPECT_FALSE(t.has_value());
    }
    auto self = transplant(m, post, post);
    ASSERT_TRUE(self.has_value());
    EXPECT_EQ(print_unit(self->unit), print_unit(m.unit));
  }
  EXPECT_GT(increment, 0);
  EXPECT_EQ(getResult, 0);  // `return value;` has no mutable node
}

TEST(Mutation, RelevanceLabels) {
  Unit pre = fixtures::sum_pre(), post = fixtures::sum_post();
  auto ms = generate_mutants(post);
  std::vector<TestCase> shared{make_test({{"init", {}}, {"getResult", {}}}, 0),
                               make_test({{"init", {}}, {"increment", {1.0}}, {"increment", {2.5}}}, 1)};
  auto labels = label_relevance(ms, pre, post, shared, RelevanceMode::Literal);
  ASSERT_EQ(labels.size(), ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].id.method == "increment" || ms[i].id.method == "init")
      EXPECT_EQ(labels[i].value, Relevance::UntransplantableInChangedCode);
    if (labels[i].value == Relevance::Relevant) EXPECT_TRUE(labels[i].witnessTestId.has_value());
    EXPECT_TRUE(labels[i].counts(true) == (labels[i].value != Relevance::NotRelevant));
  }
  EXPECT_THROW(label_relevance(ms, pre, post, {}, RelevanceMode::Literal), Error);
}

TEST(Mutation, LiteralRelevanceDefinition) {
  // getResult is unchanged; the ctor differs (nan vs 0.0), so a getResult
  // mutant shows the version difference through its own output.
  Unit pre = parse_unit("class G { field v: real; init() { v := nan; } method get(): real { return v + 1.0; } }");
  Unit post = parse_unit("class G { field v: real; init() { v := 0.0; } method get(): real { return v + 1.0; } }");
  std::vector<TestCase> shared{make_test({{"init", {}}, {"get", {}}}, 7)};
  auto ms = generate_mutants(post);
  auto lit = label_relevance(ms, pre, post, shared, RelevanceMode::Literal);
  auto ref = label_relevance(ms, pre, post, shared, RelevanceMode::Refined);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].id.method != "get") continue;
    EXPECT_EQ(lit[i].value, Relevance::Relevant) << ms[i].id.text();
    EXPECT_EQ(lit[i].witnessTestId, std::optional<std::uint64_t>{7});
    // Refined: on pre the nan output hides every mutant; on post it is visible.
    auto mPre = transplant(ms[i], post, pre);
    ASSERT_TRUE(mPre.has_value());
    bool killedPost = observable(exec_test(ms[i].unit, shared[0])) != observable(exec_test(post, shared[0]));
    bool killedPre = observable(exec_test(mPre->unit, shared[0])) != observable(exec_test(pre, shared[0]));
    EXPECT_EQ(ref[i].value == Relevance::Relevant, killedPost != killedPre) << ms[i].id.text();
  }
}

TEST(Mutation, UnchangedOutputsAreNotRelevant) {
  Unit u = parse_unit("class S { field v: int; method inc() { v := v + 1; } }");
  auto ms = generate_mutants(u);
  std::vector<TestCase> shared{make_test({{"init", {}}, {"inc", {}}})};
  for (const auto& l : label_relevance(ms, u, u, shared, RelevanceMode::Literal))
    EXPECT_EQ(l.value, Relevance::NotRelevant);
}

TEST(Mutation, KillMatrixAccumulateMinus) {
  // Hand replay: from value = 0.0, increment(2.0) under `value := value - d`
  // leaves value = -2.0, so `value == old(value) + d` reads -2.0 == 2.0.
  Unit post = fixtures::sum_post();
  auto all = generate_mutants(post);
  auto it = std::find_if(all.begin(), all.end(), [](const Mutant& m) {
    return print_unit(m.unit).find("value := value - d;") != std::string::npos;
  });
  ASSERT_NE(it, all.end());
  TestCase t = make_test({{"init", {}}, {"increment", {2.0}}}, 4);
  auto orig = exec_test(post, t);
  auto mutRun = exec_test(it->unit, t);
  EXPECT_EQ(std::get<double>(mutRun.finalState[0]), -2.0);

  auto a = parse(post, "increment", "value == old(value) + d");
  auto b = parse(post, "increment", "n == old(n) + 1");
  auto km = kill_matrix({a, b}, {*it}, post, {t}, {orig});
  EXPECT_TRUE(km.cells[0][0].killed);
  EXPECT_EQ(km.cells[0][0].witnessTestId, 4u);
  EXPECT_FALSE(km.cells[1][0].killed);
  EXPECT_FALSE(km.killedByImplicitOracle[0]);
  EXPECT_TRUE(replay_kill(a, *it, t));
  EXPECT_FALSE(replay_kill(b, *it, t));
  EXPECT_EQ(km.killed_count(0), 1u);
  EXPECT_TRUE(km.column_killed(0));
  EXPECT_DOUBLE_EQ(mutation_score(km), 1.0);
}

TEST(Mutation, NonterminationIsImplicitOnly) {
  Unit u = parse_unit(R"(class L {
    field k: int;
    method run(x: int) { var i: int := 0; while (i < x) { i := i + 1; } k := i; }
  })");
  auto all = generate_mutants(u);
  auto it = std::find_if(all.begin(), all.end(), [](const Mutant& m) {
    return m.id.op == MutOp::SDL && print_unit(m.unit).find("i := i + 1;") == std::string::npos;
  });
  ASSERT_NE(it, all.end());
  TestCase t = make_test({{"init", {}}, {"run", {std::int64_t{3}}}});
  auto orig = exec_test(u, t, 500);
  auto a = parse(u, "run", "k == x");
  auto km = kill_matrix({a}, {*it}, u, {t}, {orig}, 500);
  EXPECT_TRUE(km.killedByImplicitOracle[0]);
  EXPECT_FALSE(km.cells[0][0].killed);
  EXPECT_DOUBLE_EQ(mutation_score(km), 1.0);
}

TEST(Mutation, EveryKillReplays) {
  Unit post = fixtures::sum_post();
  GenConfig g;
  g.maxTests = 30;
  auto s = generate_suite(post, g);
  std::vector<Assertion> rows;
  for (auto [l, t] : std::vector<std::pair<std::string, std::string>>{{"inv", "n >= 0"},
                                                                      {"inv", "n == 0 ==> value == 0.0"},
                                                                      {"increment", "n == old(n) + 1"},
                                                                      {"increment", "value == old(value) + d"},
                                                                      {"getResult", "result == value"}})
    rows.push_back(parse(post, l, t));
  auto ms = generate_mutants(post);
  auto km = kill_matrix(rows, ms, post, s.tests, s.records, g.stepBudget);
  int killed = 0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ms.size(); ++c) {
      if (!km.cells[r][c].killed) continue;
      ++killed;
      const auto& w = *std::find_if(s.tests.begin(), s.tests.end(),
                                    [&](const TestCase& t) { return t.seedId == km.cells[r][c].witnessTestId; });
      EXPECT_TRUE(replay_kill(rows[r], ms[c], w, g.stepBudget));
    }
  EXPECT_GT(killed, 0);
  double ms_ = mutation_score(km);
  EXPECT_GE(ms_, 0.0);
  EXPECT_LE(ms_, 1.0);
}
