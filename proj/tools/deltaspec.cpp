#include <CLI11.hpp>
#include <deltaspec/error.hpp>
#include <deltaspec/pipeline.hpp>
#include <deltaspec/serialize.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace deltaspec;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags that mirror configuration keys; unset flags leave the file values alone.
struct Flags {
  std::map<std::string, std::string> values;
  std::map<const CLI::App*, std::map<std::string, CLI::Option*>> options;
  const CLI::App* active = nullptr;
  std::string configFile;
  std::string out;
  bool svg = false;
  bool noExperiments = false;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    options[app][key] = app->add_option("--" + key, values[key], help);
  }

  void add_common(CLI::App* app) {
    add(app, "seed", "random seed for generation, fuzzing and simulation");
    add(app, "candidates", "candidate budget per program point");
    add(app, "max-nodes", "largest candidate size in AST nodes");
    add(app, "min-support", "observations needed before an assertion is VALID");
    add(app, "max-tests", "tests per generated suite");
    add(app, "max-calls", "method calls per test after the constructor");
    add(app, "int-pool", "integer argument pool, space separated");
    add(app, "real-pool", "real argument pool, space separated");
    add(app, "eval-error", "falsifies|skips");
    add(app, "mutation-filter", "true|false");
    add(app, "mode", "paper|strict");
    add(app, "relevance", "literal|refined");
    add(app, "reps", "repetitions per simulated selection");
    add(app, "sizes", "selection sizes, space separated");
    add(app, "targets", "rMS targets, space separated");
    app->add_option("--config", configFile, "INI file with the same keys as the flags");
  }

  PipelineConfig resolve(const std::optional<fs::path>& commitConfig) const {
    PipelineConfig cfg;
    if (commitConfig) apply_config_ini(cfg, *commitConfig);
    if (!configFile.empty()) apply_config_ini(cfg, configFile);
    if (options.count(active))
      for (const auto& [key, opt] : options.at(active))
        if (opt->count() > 0) apply_config_value(cfg, key, values.at(key));
    if (noExperiments) cfg.experiments = false;
    return cfg;
  }
};

fs::path out_dir(const Flags& f, const CommitInput& c) {
  return f.out.empty() ? fs::path("deltaspec-out") / c.id : fs::path(f.out);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_run(const PipelineResult& r) {
  auto delta = delta_invariant_violations(r.rawDelta, r.preInference.table, r.postInference.table, r.common);
  auto pre = soundness_violations(r.preInference.table, r.pre, r.preSuite);
  auto post = soundness_violations(r.postInference.table, r.post, r.postSuite);
  std::string msg;
  for (const auto* v : {&delta, &pre, &post})
    for (const auto& s : *v) msg += "\n  " + s;
  if (!msg.empty()) throw InternalError("internal invariant violated:" + msg);
}

void print_delta(const DeltaReport& d) {
  std::cout << "added " << d.added.size() << ", removed " << d.removed.size() << ", preserved "
            << d.preserved.size() << ", undetermined " << d.undetermined.size() << "\n";
  for (const auto& e : d.removed) std::cout << "- " << e.assertion.key() << "\n";
  for (const auto& e : d.added) std::cout << "+ " << e.assertion.key() << "\n";
}

// Rebuilds a report from delta.json; texts are parsed against the units.
DeltaReport load_delta(const fs::path& file, const Unit& pre, const Unit& post) {
  Json j;
  try {
    j = Json::parse(read_text(file));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InputError, file.string() + ": " + e.what());
  }
  DeltaReport d;
  d.commitId = j.value("commit", "");
  d.mode = j.value("mode", "strict") == "paper" ? DeltaMode::Paper : DeltaMode::Strict;
  d.reduced = j.value("reduced", false);
  auto part = [&](const char* name, std::vector<DeltaEntry>& out) {
    for (const auto& e : j.at(name)) {
      auto label = e.at("point").get<std::string>();
      auto point = point_from_label(post, label);
      if (!point) point = point_from_label(pre, label);
      if (!point) throw Error(ErrorCode::InputError, file.string() + ": unknown point " + label);
      DeltaEntry entry;
      entry.assertion = make_assertion(*point, parse_assertion(e.at("assertion").get<std::string>(),
                                                               make_scope(pre, post, *point)));
      entry.members = e.at("members").get<std::vector<std::string>>();
      out.push_back(std::move(entry));
    }
  };
  part("added", d.added);
  part("removed", d.removed);
  part("preserved", d.preserved);
  part("undetermined", d.undetermined);
  return d;
}

int cmd_run(const std::string& dir, const Flags& f) {
  auto commit = load_commit(dir);
  auto r = run_pipeline(commit, f.resolve(commit.configFile));
  check_run(r);
  auto out = out_dir(f, commit);
  write_reports(render_reports(r, f.svg), out);
  print_delta(r.delta);
  std::cout << "reports written to " << out.string() << "\n";
  return 0;
}

int cmd_parse(const std::string& file) {
  auto unit = parse_unit_file(read_text(file), file);
  std::cout << print_unit(unit);
  auto points = program_points(unit);
  std::cerr << unit.name << ": " << unit.fields.size() << " fields, " << points.size() << " program points\n";
  return 0;
}

int cmd_testgen(const std::string& file, const Flags& f) {
  auto unit = parse_unit_file(read_text(file), file);
  auto cfg = f.resolve(std::nullopt);
  auto suite = generate_suite(unit, cfg.gen);
  std::cout << suite_json(suite).dump(1) << "\n";
  return 0;
}

int cmd_mutants(const std::string& file) {
  auto unit = parse_unit_file(read_text(file), file);
  std::cout << mutants_json(generate_mutants(unit)).dump(1) << "\n";
  return 0;
}

int cmd_infer(const std::string& dir, const std::string& side, const Flags& f) {
  auto commit = load_commit(dir);
  auto cfg = f.resolve(commit.configFile);
  cfg.experiments = false;
  auto r = run_pipeline(commit, cfg);
  check_run(r);
  const auto& table = side == "pre" ? r.preInference.table : r.postInference.table;
  auto out = out_dir(f, commit);
  write_reports({{"statuses_" + side + ".json", statuses_json(table).dump(1) + "\n"}}, out);
  std::size_t spec = 0;
  for (const auto& e : table.entries)
    if (e.status == Status::Valid && e.bucket == Bucket::Spec) {
      std::cout << e.assertion.key() << "\n";
      ++spec;
    }
  std::cerr << spec << " assertions in the " << side << " spec\n";
  return 0;
}

int cmd_experiment(const std::string& dir, const Flags& f, const std::string& what) {
  auto commit = load_commit(dir);
  auto cfg = f.resolve(commit.configFile);
  cfg.experiments = true;
  auto r = run_pipeline(commit, cfg);
  check_run(r);
  const auto& x = *r.experiments;
  std::map<std::string, std::string> files;
  if (what == "relevance") {
    files["mutants.json"] = mutants_json(x.mutants, x.relevance.empty() ? nullptr : &x.relevance).dump(1) + "\n";
    std::size_t relevant = 0;
    for (const auto& l : x.relevance) relevant += l.counts(cfg.sim.countUntransplantable);
    std::cout << relevant << " of " << x.mutants.size() << " mutants are commit-relevant\n";
  } else if (what == "kills") {
    files["kills.csv"] = kills_csv(x.kills);
    auto j = kills_json(x.kills, x.relevance.empty() ? nullptr : &x.relevance, cfg.sim.countUntransplantable);
    files["kills.json"] = j.dump(1) + "\n";
    std::cout << j.dump() << "\n";
  } else if (what == "rq3") {
    if (!x.rq3) throw Error(ErrorCode::UndefinedScore, x.note);
    files["rq3.csv"] = rq3_csv(*x.rq3);
    files["rq3_stats.csv"] = rq3_stats_csv(*x.rq3);
    if (f.svg) files["rq3.svg"] = rq3_svg(*x.rq3);
    std::cout << rq3_stats_csv(*x.rq3);
  } else {
    if (!x.rq4) throw Error(ErrorCode::UndefinedScore, x.note);
    files["rq4.csv"] = rq4_csv(*x.rq4);
    for (const auto& s : x.rq4->series)
      std::cout << s.pool << " target " << s.target << ": mean " << s.meanCost << ", median " << s.medianCost
                << ", reach " << s.reachRate << "\n";
  }
  files["summary.md"] = summary_markdown(r);
  write_reports(files, out_dir(f, commit));
  return 0;
}

int cmd_match_truth(const std::string& dir, const std::string& report, const Flags& f) {
  auto commit = load_commit(dir);
  if (!commit.truth) throw Error(ErrorCode::MissingTruth, dir + " has no truth.delta");
  auto cfg = f.resolve(commit.configFile);
  fs::path reportDir = report.empty() ? out_dir(f, commit) : fs::path(report);
  DeltaReport delta;
  Unit pre = parse_unit_file(commit.preSource, commit.preFile);
  Unit post = parse_unit_file(commit.postSource, commit.postFile);
  if (fs::exists(reportDir / "delta.json")) {
    delta = load_delta(reportDir / "delta.json", pre, post);
  } else {
    cfg.experiments = false;
    delta = run_pipeline(commit, cfg).delta;
  }
  auto m = match_ground_truth(delta, parse_truth(*commit.truth), pre, post, cfg.domain);
  write_reports({{"truth_match.json", truth_match_json(m).dump(1) + "\n"}}, reportDir);
  for (const auto& e : m.entries)
    std::cout << match_status_name(e.status) << "  " << (e.truth.tag == TruthTag::Added     ? '+'
                                                         : e.truth.tag == TruthTag::Removed ? '-'
                                                                                            : '=')
              << ' ' << e.truth.point << ": " << e.truth.text << "\n";
  std::cout << "recall " << m.matched << "/" << m.expressible << (m.recallByConvention ? " (by convention)" : "")
            << ", surplus " << m.surplus.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infers commit-relevant specifications for DL classes."};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  Flags f;
  std::string target, side = "post", report;

  auto* run = app.add_subcommand("run", "full pipeline over a commit directory");
  run->add_option("commit", target, "directory with pre/ and post/")->required();
  f.add_common(run);
  run->add_option("--out", f.out, "report directory (default deltaspec-out/<commit>)");
  run->add_flag("--svg", f.svg, "also write rq3.svg");
  run->add_flag("--no-experiments", f.noExperiments, "skip relevance, kill matrix and simulations");

  auto* parse = app.add_subcommand("parse", "parse, check and pretty-print a .dl file");
  parse->add_option("file", target)->required();

  auto* testgen = app.add_subcommand("testgen", "generate a test suite for a .dl file");
  testgen->add_option("file", target)->required();
  f.add_common(testgen);

  auto* infer = app.add_subcommand("infer", "infer the spec of one version of a commit");
  infer->add_option("commit", target)->required();
  infer->add_option("--version", side, "pre|post")->check(CLI::IsMember({"pre", "post"}));
  f.add_common(infer);
  infer->add_option("--out", f.out);

  auto* mutants = app.add_subcommand("mutants", "list the mutants of a .dl file");
  mutants->add_option("file", target)->required();

  std::map<std::string, CLI::App*> experiments;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"relevance", "label post mutants as commit-relevant or not"},
           {"kills", "kill matrix of post spec assertions against post mutants"},
           {"rq3", "rMS of fixed-size selections from added and preserved assertions"},
           {"rq4", "assertions needed to reach rMS targets"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("commit", target)->required();
    f.add_common(sub);
    sub->add_option("--out", f.out);
    if (name == "rq3") sub->add_flag("--svg", f.svg);
    experiments[name] = sub;
  }

  auto* match = app.add_subcommand("match-truth", "compare a delta with truth.delta");
  match->add_option("commit", target)->required();
  match->add_option("--report", report, "directory holding delta.json (default: the run output directory)");
  f.add_common(match);
  match->add_option("--out", f.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  for (const auto* sub : app.get_subcommands()) f.active = sub;

  try {
    if (*run) return cmd_run(target, f);
    if (*parse) return cmd_parse(target);
    if (*testgen) return cmd_testgen(target, f);
    if (*infer) return cmd_infer(target, side, f);
    if (*mutants) return cmd_mutants(target);
    if (*match) return cmd_match_truth(target, report, f);
    for (const auto& [name, sub] : experiments)
      if (*sub) return cmd_experiment(target, f, name);
  } catch (const InternalError& e) {
    std::cerr << "deltaspec: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "deltaspec: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::InvariantViolation ? kExitInternal : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "deltaspec: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
