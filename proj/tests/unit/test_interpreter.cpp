#include <deltaspec/interpreter.hpp>
#include <deltaspec/minilang.hpp>
#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace deltaspec;

namespace {

TestCase make_test(std::vector<Call> calls) { return TestCase{0, std::move(calls)}; }

}  // namespace

TEST(Interpreter, SumPostIncrementThenGet) {
  auto rec = exec_test(fixtures::sum_post(), make_test({{"init", {}}, {"increment", {2.0}}, {"getResult", {}}}));
  EXPECT_EQ(rec.outcome, Outcome::Completed);
  ASSERT_EQ(rec.calls.size(), 3u);
  EXPECT_EQ(std::get<double>(rec.calls[2].returnValue), 2.0);
  ASSERT_EQ(rec.finalState.size(), 2u);
  EXPECT_EQ(std::get<double>(rec.finalState[0]), 2.0);
  EXPECT_EQ(std::get<std::int64_t>(rec.finalState[1]), 1);
  EXPECT_EQ(rec.observations.size(), 6u);
}

TEST(Interpreter, SumPreCtorLeavesNan) {
  auto rec = exec_test(fixtures::sum_pre(), make_test({{"init", {}}}));
  EXPECT_EQ(rec.outcome, Outcome::Completed);
  EXPECT_TRUE(std::isnan(std::get<double>(rec.finalState[0])));
  EXPECT_EQ(std::get<std::int64_t>(rec.finalState[1]), 0);
}

TEST(Interpreter, ObservationsCarryOldStateAndParams) {
  auto rec = exec_test(fixtures::sum_post(), make_test({{"init", {}}, {"increment", {1.5}}}));
  const Observation* inc = nullptr;
  for (const auto& o : rec.observations)
    if (o.point.label() == "increment") inc = &o;
  ASSERT_NE(inc, nullptr);
  EXPECT_EQ(std::get<std::int64_t>(inc->preState[1]), 0);
  EXPECT_EQ(std::get<std::int64_t>(inc->postState[1]), 1);
  ASSERT_EQ(inc->params.size(), 1u);
  EXPECT_EQ(std::get<double>(inc->params[0]), 1.5);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(inc->returnValue));
  EXPECT_EQ(inc->callIndex, 1);
}

TEST(Interpreter, BudgetExhaustion) {
  Unit u = parse_unit("class L { method spin() { while (true) { } } }");
  auto rec = exec_test(u, make_test({{"init", {}}, {"spin", {}}}), 1000);
  EXPECT_EQ(rec.outcome, Outcome::BudgetExhausted);
  EXPECT_EQ(rec.failedCall, 1);
  EXPECT_EQ(rec.observations.size(), 2u);  // only the constructor's two points
}

TEST(Interpreter, RuntimeErrorKinds) {
  Unit u = parse_unit(R"(class E {
    field a: int[];
    init() { a := new int[2]; }
    method div(x: int): int { return 10 / x; }
    method at(i: int): int { return a[i]; }
    method boom() { fail; }
    method big(x: int): int { return x * 4611686018427387904; }
    method rdiv(x: real): real { return 1.0 / x; }
  })");
  auto kind = [&](Call c) {
    auto rec = exec_test(u, make_test({{"init", {}}, std::move(c)}));
    return rec.errorKind;
  };
  EXPECT_EQ(kind({"div", {std::int64_t{0}}}), RuntimeErrorKind::DivByZero);
  EXPECT_EQ(kind({"at", {std::int64_t{2}}}), RuntimeErrorKind::IndexOutOfBounds);
  EXPECT_EQ(kind({"boom", {}}), RuntimeErrorKind::Fail);
  EXPECT_EQ(kind({"big", {std::int64_t{2}}}), RuntimeErrorKind::Overflow);
  EXPECT_EQ(kind({"div", {std::int64_t{5}}}), RuntimeErrorKind::None);
  auto rec = exec_test(u, make_test({{"init", {}}, {"rdiv", {0.0}}}));
  EXPECT_EQ(rec.outcome, Outcome::Completed);
  EXPECT_TRUE(std::isinf(std::get<double>(rec.calls[1].returnValue)));
}

TEST(Interpreter, IntArithmeticWithoutOverflow) {
  Unit u = parse_unit(R"(class A {
    field n: int;
    method f(x: int): int { n := n + 1; return x * 3 - n % 2 + x / 2; }
  })");
  auto rec = exec_test(u, make_test({{"init", {}}, {"f", {std::int64_t{7}}}, {"f", {std::int64_t{-4}}}}));
  ASSERT_EQ(rec.outcome, Outcome::Completed);
  EXPECT_EQ(std::get<std::int64_t>(rec.calls[1].returnValue), 21 - 1 + 3);
  EXPECT_EQ(std::get<std::int64_t>(rec.calls[2].returnValue), -12 - 0 - 2);
  EXPECT_EQ(std::get<std::int64_t>(rec.finalState[0]), 2);
}

TEST(Interpreter, LoopsAndArrays) {
  Unit u = parse_unit(R"(class V {
    field data: real[];
    init(v: real[]) { data := v; }
    method norm(): real {
      var m: real := 0.0;
      for a in data { m := max(m, abs(a)); }
      return m;
    }
    method count(): int {
      var i: int := 0;
      while (i < len(data)) { i := i + 1; }
      return i;
    }
  })");
  auto rec = exec_test(u, make_test({{"init", {RealArray{1.0, -3.5, 2.0}}}, {"norm", {}}, {"count", {}}}));
  ASSERT_EQ(rec.outcome, Outcome::Completed);
  EXPECT_EQ(std::get<double>(rec.calls[1].returnValue), 3.5);
  EXPECT_EQ(std::get<std::int64_t>(rec.calls[2].returnValue), 3);
}

TEST(Interpreter, ObservableDeterministicAndDistinguishing) {
  TestCase t = make_test({{"init", {}}, {"getResult", {}}});
  auto a = observable(exec_test(fixtures::sum_pre(), t));
  EXPECT_EQ(a, observable(exec_test(fixtures::sum_pre(), t)));
  EXPECT_NE(a, observable(exec_test(fixtures::sum_post(), t)));
  EXPECT_NE(a.find("nan"), std::string::npos);
}

TEST(Interpreter, RefactorIsObservablyEqual) {
  Unit pre = parse_unit(fixtures::read_corpus("refactor_iterator/pre/SingletonListIterator.dl"));
  Unit post = parse_unit(fixtures::read_corpus("refactor_iterator/post/SingletonListIterator.dl"));
  std::vector<TestCase> tests{
      make_test({{"init", {std::int64_t{4}}}, {"next", {}}, {"remove", {}}, {"hasNext", {}}}),
      make_test({{"init", {std::int64_t{1}}}, {"remove", {}}}),
      make_test({{"init", {std::int64_t{2}}}, {"next", {}}, {"remove", {}}, {"remove", {}}}),
      make_test({{"init", {std::int64_t{0}}}, {"hasNext", {}}, {"next", {}}, {"next", {}}}),
  };
  for (const auto& t : tests) EXPECT_EQ(observable(exec_test(pre, t)), observable(exec_test(post, t)));
}

TEST(Interpreter, BudgetMonotonicity) {
  Unit u = parse_unit(R"(class W {
    field k: int;
    method run(x: int) { var i: int := 0; while (i < x) { i := i + 1; k := k + i; } }
  })");
  TestCase t = make_test({{"init", {}}, {"run", {std::int64_t{20}}}});
  std::uint64_t smallest = 0;
  for (std::uint64_t b = 1; b < 1000; ++b)
    if (exec_test(u, t, b).outcome == Outcome::Completed) {
      smallest = b;
      break;
    }
  ASSERT_GT(smallest, 1u);
  std::string ref = observable(exec_test(u, t, smallest));
  for (std::uint64_t b : {smallest + 1, smallest * 2, std::uint64_t{100000}})
    EXPECT_EQ(observable(exec_test(u, t, b)), ref);
  EXPECT_EQ(exec_test(u, t, smallest - 1).outcome, Outcome::BudgetExhausted);
}

TEST(Interpreter, TypeValidity) {
  Unit u = fixtures::sum_post();
  EXPECT_TRUE(test_type_valid(u, make_test({{"init", {}}, {"increment", {1.0}}})));
  EXPECT_FALSE(test_type_valid(u, make_test({{"increment", {1.0}}})));
  EXPECT_FALSE(test_type_valid(u, make_test({{"init", {}}, {"increment", {std::int64_t{1}}}})));
  EXPECT_FALSE(test_type_valid(u, make_test({{"init", {}}, {"nope", {}}})));
}
