#include <benchmark/benchmark.h>
#include <deltaspec/delta.hpp>
#include <deltaspec/grammar.hpp>
#include <deltaspec/inference.hpp>
#include <deltaspec/minilang.hpp>
#include <deltaspec/mutation.hpp>
#include <deltaspec/rng.hpp>
#include <deltaspec/stats.hpp>
#include <deltaspec/testgen.hpp>

#include <fstream>
#include <sstream>

using namespace deltaspec;

namespace {

std::string read_corpus(const std::string& rel) {
  std::ifstream in(std::string(DELTASPEC_CORPUS_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Unit& sum_pre() {
  static const Unit u = parse_unit(read_corpus("sum_fix/pre/Sum.dl"));
  return u;
}

const Unit& sum_post() {
  static const Unit u = parse_unit(read_corpus("sum_fix/post/Sum.dl"));
  return u;
}

GenConfig sum_gen() {
  GenConfig g;
  g.realPool = {-1.5, -1.0, 0.0, 1.0, 2.5};
  return g;
}

std::vector<Assertion> sum_candidates(std::size_t perPoint) {
  std::vector<Assertion> out;
  for (const auto& p : diff_common_points(sum_pre(), sum_post()).shared) {
    auto s = fuzz_candidates(instantiate_grammar(sum_pre(), sum_post(), p), 1, perPoint);
    out.insert(out.end(), s.items.begin(), s.items.end());
  }
  return out;
}

}  // namespace

static void BM_ParseUnit(benchmark::State& state) {
  const std::string src = read_corpus("support_bound/post/BinomialDistribution.dl");
  for (auto _ : state) benchmark::DoNotOptimize(parse_unit(src));
}
BENCHMARK(BM_ParseUnit);

static void BM_GenerateSuite(benchmark::State& state) {
  auto g = sum_gen();
  for (auto _ : state) benchmark::DoNotOptimize(generate_suite(sum_post(), g));
}
BENCHMARK(BM_GenerateSuite)->Unit(benchmark::kMillisecond);

static void BM_FuzzCandidates(benchmark::State& state) {
  auto point = *point_from_label(sum_post(), "increment");
  auto g = instantiate_grammar(sum_pre(), sum_post(), point);
  for (auto _ : state) benchmark::DoNotOptimize(fuzz_candidates(g, 1, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FuzzCandidates)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& state) {
  auto cands = sum_candidates(static_cast<std::size_t>(state.range(0)));
  auto suite = generate_suite(sum_post(), sum_gen());
  SpecConfig cfg;
  cfg.mutationFilter = false;
  for (auto _ : state) benchmark::DoNotOptimize(classify(cands, sum_post(), suite, cfg, "post"));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cands.size()));
}
BENCHMARK(BM_Classify)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_KillMatrix(benchmark::State& state) {
  auto cands = sum_candidates(2000);
  auto suite = generate_suite(sum_post(), sum_gen());
  SpecConfig cfg;
  cfg.mutationFilter = false;
  auto rows = classify(cands, sum_post(), suite, cfg, "post").valid_assertions();
  auto mutants = generate_mutants(sum_post());
  for (auto _ : state)
    benchmark::DoNotOptimize(kill_matrix(rows, mutants, sum_post(), suite.tests, suite.records, suite.config.stepBudget));
}
BENCHMARK(BM_KillMatrix)->Unit(benchmark::kMillisecond);

static void BM_BoundedEquiv(benchmark::State& state) {
  auto p = *point_from_label(sum_post(), "increment");
  auto scope = make_scope(sum_pre(), sum_post(), p);
  auto a = normalize(parse_assertion("old(n) > 0 ==> value == old(value) + d", scope));
  auto b = normalize(parse_assertion("old(n) <= 0 || value == d + old(value)", scope));
  for (auto _ : state) benchmark::DoNotOptimize(bounded_equiv(a, b));
}
BENCHMARK(BM_BoundedEquiv);

static void BM_MannWhitney(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> xs(static_cast<std::size_t>(state.range(0))), ys(xs.size());
  for (auto& x : xs) x = rng.unit();
  for (auto& y : ys) y = rng.unit();
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(xs, ys));
}
BENCHMARK(BM_MannWhitney)->Arg(6)->Arg(100);
BENCHMARK_MAIN();
