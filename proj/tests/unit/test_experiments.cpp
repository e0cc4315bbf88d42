#include <deltaspec/error.hpp>
#include <deltaspec/experiments.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace deltaspec;

namespace {

// Row 0 kills {0,1}, row 1 kills {2}, row 2 kills nothing, row 3 kills all four.
KillMatrix matrix() {
  KillMatrix km;
  km.rows.resize(4);
  km.cols.resize(4);
  km.killedByImplicitOracle.assign(4, false);
  std::vector<std::vector<int>> kills{{0, 1}, {2}, {}, {0, 1, 2, 3}};
  km.cells.assign(4, std::vector<KillCell>(4));
  for (std::size_t r = 0; r < 4; ++r)
    for (int c : kills[r]) km.cells[r][static_cast<std::size_t>(c)] = KillCell{true, r};
  return km;
}

std::vector<RelevanceLabel> labels(Relevance last = Relevance::Relevant) {
  std::vector<RelevanceLabel> out(4);
  for (auto& l : out) l.value = Relevance::Relevant;
  out[3].value = last;
  return out;
}

}  // namespace

TEST(Experiments, RmsExamples) {
  EXPECT_DOUBLE_EQ(rms(3, 4).value(), 0.75);
  EXPECT_THROW(rms(0, 0), Error);
  auto km = matrix();
  std::vector<bool> all(4, true);
  EXPECT_DOUBLE_EQ(selection_rms(km, all, {0}).value(), 0.5);
  EXPECT_DOUBLE_EQ(selection_rms(km, all, {0, 1}).value(), 0.75);
  EXPECT_DOUBLE_EQ(selection_rms(km, all, {2}).value(), 0.0);
  EXPECT_DOUBLE_EQ(selection_rms(km, all, {}).value(), 0.0);
  EXPECT_DOUBLE_EQ(selection_rms(km, {true, false, true, false}, {0}).value(), 0.5);
  EXPECT_THROW(selection_rms(km, {false, false, false, false}, {0}), Error);
}

TEST(Experiments, UntransplantableColumnsFollowTheSwitch) {
  auto l = labels(Relevance::UntransplantableInChangedCode);
  EXPECT_EQ(relevant_columns(l, true), (std::vector<bool>{true, true, true, true}));
  EXPECT_EQ(relevant_columns(l, false), (std::vector<bool>{true, true, true, false}));
  EXPECT_EQ(relevant_columns(labels(Relevance::NotRelevant)), (std::vector<bool>{true, true, true, false}));
}

TEST(Experiments, FixedSizeSimulation) {
  auto km = matrix();
  SimConfig cfg;
  cfg.sizes = {1, 3, 4};
  cfg.reps = 50;
  auto r = simulate_fixed_size(km, labels(), cfg, Pool{"strong", {3}}, Pool{"weak", {0, 1, 2}});
  ASSERT_EQ(r.series.size(), 6u);
  EXPECT_EQ(r.series[0].pool, "strong");
  EXPECT_DOUBLE_EQ(r.series[0].mean, 1.0);
  EXPECT_TRUE(r.series[1].exhausted);  // size 3 exceeds a one-row pool
  for (double s : r.series[3].samples) EXPECT_TRUE(s == 0.5 || s == 0.25 || s == 0.0) << s;
  EXPECT_FALSE(r.series[4].exhausted);
  for (double s : r.series[4].samples) EXPECT_DOUBLE_EQ(s, 0.75);
  EXPECT_TRUE(r.series[5].exhausted);
  ASSERT_EQ(r.stats.size(), 3u);
  EXPECT_DOUBLE_EQ(r.stats[0].a12, 1.0);
  EXPECT_LT(r.stats[0].p, 1e-6);
  EXPECT_DOUBLE_EQ(r.stats[1].a12, 1.0);
}

TEST(Experiments, FixedSizeDeterministicAndAbsentPools) {
  auto km = matrix();
  SimConfig cfg;
  cfg.reps = 20;
  auto a = simulate_fixed_size(km, labels(), cfg, Pool{"x", {0, 1, 2, 3}}, Pool{"y", {0, 2}});
  auto b = simulate_fixed_size(km, labels(), cfg, Pool{"x", {0, 1, 2, 3}}, Pool{"y", {0, 2}});
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) EXPECT_EQ(a.series[i].samples, b.series[i].samples);
  cfg.seed = 2;
  auto c = simulate_fixed_size(km, labels(), cfg, Pool{"x", {0, 1, 2, 3}}, Pool{"y", {0, 2}});
  EXPECT_NE(a.series[0].samples, c.series[0].samples);

  auto e = simulate_fixed_size(km, labels(), cfg, Pool{"x", {0}}, Pool{"none", {}});
  EXPECT_EQ(e.absentPools, std::vector<std::string>{"none"});
  for (const auto& s : e.stats) EXPECT_TRUE(s.skipped);
  EXPECT_THROW(simulate_fixed_size(km, labels(), cfg, Pool{"x", {9}}, Pool{"y", {0}}), Error);
  std::vector<RelevanceLabel> none(4);
  EXPECT_THROW(simulate_fixed_size(km, none, cfg, Pool{"x", {0}}, Pool{"y", {0}}), Error);
}

TEST(Experiments, MeanRmsIsMonotoneInSize) {
  auto km = matrix();
  SimConfig cfg;
  cfg.sizes = {1, 2, 3, 4};
  cfg.reps = 200;
  auto r = simulate_fixed_size(km, labels(), cfg, Pool{"all", {0, 1, 2, 3}}, Pool{"low", {0, 1, 2}});
  for (std::size_t i = 1; i < 4; ++i) EXPECT_GE(r.series[i].mean, r.series[i - 1].mean);
  EXPECT_DOUBLE_EQ(r.series[3].mean, 1.0);
}

TEST(Experiments, CostToTarget) {
  auto km = matrix();
  SimConfig cfg;
  cfg.reps = 30;
  cfg.targets = {0.25, 0.75, 1.0};
  auto r = simulate_to_target(km, labels(), cfg, {Pool{"strong", {3}}, Pool{"weak", {0, 1, 2}}, Pool{"gone", {}}});
  EXPECT_EQ(r.absentPools, std::vector<std::string>{"gone"});
  ASSERT_EQ(r.series.size(), 6u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(r.series[i].meanCost, 1.0);
    EXPECT_DOUBLE_EQ(r.series[i].reachRate, 1.0);
  }
  // weak, 0.25: row 0 or row 1 reaches it; only row 2 drawn first costs one more.
  for (const auto& c : r.series[3].costs) EXPECT_TRUE(c == 1 || c == 2);
  // weak, 0.75: needs rows 0 and 1.
  for (const auto& c : r.series[4].costs) EXPECT_TRUE(c == 2 || c == 3);
  EXPECT_DOUBLE_EQ(r.series[5].reachRate, 0.0);
  EXPECT_TRUE(std::isnan(r.series[5].meanCost));
  EXPECT_TRUE(std::isinf(r.series[5].medianCost));
}

TEST(Experiments, ValidateConfig) {
  SimConfig c;
  EXPECT_NO_THROW(validate(c));
  c.reps = 0;
  EXPECT_THROW(validate(c), Error);
  c = SimConfig{};
  c.targets = {1.5};
  EXPECT_THROW(validate(c), Error);
  c = SimConfig{};
  c.sizes = {0};
  EXPECT_THROW(validate(c), Error);
}

TEST(Experiments, Rq3Aggregation) {
  SimResult a, b;
  a.series.push_back(SizeSeries{"p", 1, false, {1.0, 0.0}, 0.5});
  b.series.push_back(SizeSeries{"p", 1, false, {1.0, 1.0, 1.0, 1.0}, 1.0});
  auto agg = aggregate_rq3({a, b});
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_DOUBLE_EQ(agg[0].meanOfCommitMeans, 0.75);
  EXPECT_DOUBLE_EQ(agg[0].pooledMean, 5.0 / 6.0);
  auto one = aggregate_rq3({a});
  EXPECT_DOUBLE_EQ(one[0].meanOfCommitMeans, one[0].pooledMean);
}
