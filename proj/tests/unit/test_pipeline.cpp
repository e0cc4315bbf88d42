#include <deltaspec/error.hpp>
#include <deltaspec/pipeline.hpp>
#include <deltaspec/serialize.hpp>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"

using namespace deltaspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("deltaspec_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << s;
}

PipelineConfig quick(const CommitInput& c) {
  PipelineConfig cfg;
  if (c.configFile) apply_config_ini(cfg, *c.configFile);
  cfg.candidates = 3000;
  cfg.sim.reps = 10;
  return cfg;
}

}  // namespace

TEST(Pipeline, ConfigValues) {
  PipelineConfig cfg;
  apply_config_value(cfg, "seed", "9");
  EXPECT_EQ(cfg.gen.seed, 9u);
  EXPECT_EQ(cfg.sim.seed, 9u);
  apply_config_value(cfg, "real-pool", "-1.5, 0.0 2.5");
  EXPECT_EQ(cfg.gen.realPool, (std::vector<double>{-1.5, 0.0, 2.5}));
  apply_config_value(cfg, "mode", "paper");
  EXPECT_EQ(cfg.mode, DeltaMode::Paper);
  apply_config_value(cfg, "mutation-filter", "false");
  EXPECT_FALSE(cfg.spec.mutationFilter);
  EXPECT_THROW(apply_config_value(cfg, "no-such-key", "1"), Error);
  EXPECT_THROW(apply_config_value(cfg, "seed", "abc"), Error);
  EXPECT_THROW(apply_config_value(cfg, "mode", "loose"), Error);
  PipelineConfig other;
  EXPECT_NE(cfg.canonical(), other.canonical());
  EXPECT_EQ(PipelineConfig{}.canonical(), other.canonical());
}

TEST(Pipeline, ConfigIni) {
  auto dir = scratch("ini");
  write(dir / "c.ini", "# comment\nmax-tests = 12\nint-pool = 0 1 2\ncandidates = 77\n");
  PipelineConfig cfg;
  apply_config_ini(cfg, dir / "c.ini");
  EXPECT_EQ(cfg.gen.maxTests, 12);
  EXPECT_EQ(cfg.gen.intPool, (std::vector<std::int64_t>{0, 1, 2}));
  EXPECT_EQ(cfg.candidates, 77u);
  write(dir / "bad.ini", "colour = blue\n");
  EXPECT_THROW(apply_config_ini(cfg, dir / "bad.ini"), Error);
}

TEST(Pipeline, LoadCommit) {
  auto c = load_commit(fixtures::corpus_path("sum_fix"));
  EXPECT_EQ(c.id, "sum_fix");
  EXPECT_TRUE(c.truth.has_value());
  EXPECT_TRUE(c.configFile.has_value());
  EXPECT_NE(c.preSource, c.postSource);

  auto dir = scratch("load");
  EXPECT_THROW(load_commit(dir / "absent"), Error);
  write(dir / "pre" / "A.dl", "class A { }");
  EXPECT_THROW(load_commit(dir), Error);  // no post
  write(dir / "post" / "A.dl", "class A { }");
  write(dir / "post" / "B.dl", "class B { }");
  EXPECT_THROW(load_commit(dir), Error);  // two post files
  fs::remove(dir / "post" / "B.dl");
  EXPECT_NO_THROW(load_commit(dir));
}

TEST(Pipeline, ParseErrorsNameTheFile) {
  try {
    parse_unit_file("class { }", "x/pre/A.dl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("x/pre/A.dl:1:"), std::string::npos) << e.what();
  }
}

TEST(Pipeline, SumFixRunIsConsistentAndDeterministic) {
  auto c = load_commit(fixtures::corpus_path("sum_fix"));
  auto cfg = quick(c);
  auto r = run_pipeline(c, cfg);
  EXPECT_EQ(r.commitId, "sum_fix");
  EXPECT_TRUE(delta_invariant_violations(r.rawDelta, r.preInference.table, r.postInference.table, r.common).empty());
  EXPECT_FALSE(r.delta.added.empty());
  EXPECT_TRUE(r.delta.reduced);
  ASSERT_TRUE(r.experiments.has_value());
  EXPECT_EQ(r.experiments->relevance.size(), r.experiments->mutants.size());
  ASSERT_TRUE(r.truthMatch.has_value());
  EXPECT_GT(r.truthMatch->expressible, 0);

  auto files = render_reports(r);
  for (const char* name : {"delta.json", "statuses.json", "manifest.json", "summary.md"})
    EXPECT_TRUE(files.count(name)) << name;
  auto again = render_reports(run_pipeline(c, cfg));
  for (const auto& [name, content] : files)
    if (name != "manifest.json") EXPECT_EQ(content, again[name]) << name;
  EXPECT_EQ(manifest_json(r, false), manifest_json(run_pipeline(c, cfg), false));
}

TEST(Pipeline, InvariantCheckerFlagsBrokenDeltas) {
  auto c = load_commit(fixtures::corpus_path("sum_fix"));
  auto cfg = quick(c);
  cfg.experiments = false;
  auto r = run_pipeline(c, cfg);
  auto broken = r.rawDelta;
  ASSERT_FALSE(broken.added.empty());
  broken.removed.push_back(broken.added.front());
  EXPECT_FALSE(delta_invariant_violations(broken, r.preInference.table, r.postInference.table, r.common).empty());
  EXPECT_FALSE(r.experiments.has_value());
}
