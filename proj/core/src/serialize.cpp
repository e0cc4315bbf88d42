#include "deltaspec/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"

namespace deltaspec {

namespace fs = std::filesystem;

namespace {

std::string fixed(double x, int digits = 4) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

Json value_json(const Value& v) { return format_value(v); }

Json suite_json(const TestSuite& suite) {
  Json tests = Json::array();
  for (std::size_t i = 0; i < suite.tests.size(); ++i) {
    const auto& t = suite.tests[i];
    Json calls = Json::array();
    for (const auto& c : t.calls) {
      Json args = Json::array();
      for (const auto& a : c.args) args.push_back(value_json(a));
      calls.push_back(Json{{"method", c.method}, {"args", args}});
    }
    Json tj{{"id", t.seedId}, {"calls", calls}};
    if (i < suite.records.size()) {
      const auto& rec = suite.records[i];
      tj["outcome"] = outcome_name(rec.outcome);
      tj["observations"] = rec.observations.size();
    }
    tests.push_back(std::move(tj));
  }
  return Json{{"unit", suite.unitName},
              {"seed", suite.config.seed},
              {"hash", hex64(suite_hash(suite))},
              {"tests", tests}};
}

Json statuses_json(const StatusTable& table) {
  Json entries = Json::array();
  for (const auto& e : table.entries) {
    Json j{{"assertion", e.assertion.key()},
           {"status", status_name(e.status)},
           {"evalCount", e.evalCount},
           {"killCount", e.killCount},
           {"bucket", bucket_name(e.bucket)}};
    if (e.falsifier) j["falsifier"] = Json{{"test", e.falsifier->testId}, {"call", e.falsifier->callIndex}};
    entries.push_back(std::move(j));
  }
  const auto& c = table.config;
  return Json{{"version", table.version},
              {"config",
               {{"minSupport", c.minSupport},
                {"evalErrorPolicy", c.evalErrorPolicy == EvalErrorPolicy::Skips ? "skips" : "falsifies"},
                {"mutationFilter", c.mutationFilter},
                {"keepRepresentativesOnly", c.keepRepresentativesOnly}}},
              {"warnings", table.warnings},
              {"entries", std::move(entries)}};
}

Json candidates_json(const PipelineResult& r) {
  Json points = Json::array();
  for (const auto& p : r.pointCandidates)
    points.push_back(Json{{"point", p.point.label()},
                          {"grammarHash", hex64(p.grammarHash)},
                          {"count", p.count},
                          {"exhausted", p.exhausted},
                          {"completeTiers", p.completeTiers}});
  Json items = Json::array();
  for (const auto& a : r.candidates) items.push_back(a.key());
  return Json{{"maxNodes", r.config.maxNodes}, {"requested", r.config.candidates}, {"points", points}, {"items", items}};
}

Json delta_json(const DeltaReport& report) {
  auto part = [](const std::vector<DeltaEntry>& p) {
    Json arr = Json::array();
    for (const auto& e : p)
      arr.push_back(Json{{"point", e.assertion.point.label()}, {"assertion", e.assertion.text}, {"members", e.members}});
    return arr;
  };
  Json prov = Json::object();
  for (const auto& [k, v] : report.provenance) prov[k] = v;
  return Json{{"commit", report.commitId},       {"mode", delta_mode_name(report.mode)},
              {"reduced", report.reduced},       {"added", part(report.added)},
              {"removed", part(report.removed)}, {"preserved", part(report.preserved)},
              {"undetermined", part(report.undetermined)}, {"provenance", prov}};
}

Json mutants_json(const std::vector<Mutant>& mutants, const std::vector<RelevanceLabel>* labels) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    const auto& m = mutants[i];
    Json j{{"id", m.id.text()},
           {"operator", mut_op_name(m.id.op)},
           {"method", m.id.method},
           {"line", m.loc.line},
           {"column", m.loc.column},
           {"description", m.description}};
    if (labels && i < labels->size()) {
      j["relevance"] = relevance_name((*labels)[i].value);
      j["witness"] = (*labels)[i].witnessTestId ? Json(*(*labels)[i].witnessTestId) : Json(nullptr);
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

Json kills_json(const KillMatrix& km, const std::vector<RelevanceLabel>* labels, bool countUntransplantable) {
  std::size_t killedCols = 0;
  for (std::size_t c = 0; c < km.cols.size(); ++c) killedCols += km.column_killed(c) ? 1 : 0;
  Json j{{"rows", km.rows.size()},
         {"mutants", km.cols.size()},
         {"killed", killedCols},
         {"ms", km.cols.empty() ? Json(nullptr) : Json(mutation_score(km))}};
  if (labels) {
    std::size_t rel = 0, relKilled = 0;
    for (std::size_t c = 0; c < km.cols.size() && c < labels->size(); ++c) {
      if (!(*labels)[c].counts(countUntransplantable)) continue;
      ++rel;
      for (std::size_t r = 0; r < km.rows.size(); ++r)
        if (km.cells[r][c].killed) {
          ++relKilled;
          break;
        }
    }
    j["relevant"] = rel;
    j["relevantKilled"] = relKilled;
    j["rms"] = rel ? Json(static_cast<double>(relKilled) / static_cast<double>(rel)) : Json(nullptr);
  }
  Json implicit = Json::array();
  for (std::size_t c = 0; c < km.cols.size(); ++c)
    if (c < km.killedByImplicitOracle.size() && km.killedByImplicitOracle[c]) implicit.push_back(km.cols[c].text());
  j["implicitOracle"] = implicit;
  return j;
}

Json truth_match_json(const MatchResult& m) {
  Json entries = Json::array();
  for (const auto& e : m.entries)
    entries.push_back(Json{{"line", e.truth.line},
                           {"tag", truth_tag_name(e.truth.tag)},
                           {"point", e.truth.point},
                           {"assertion", e.truth.text},
                           {"status", match_status_name(e.status)},
                           {"matched", e.matchedKey.empty() ? Json(nullptr) : Json(e.matchedKey)},
                           {"reason", e.reason.empty() ? Json(nullptr) : Json(e.reason)}});
  return Json{{"expressible", m.expressible},
              {"matched", m.matched},
              {"recall", m.recall},
              {"recallByConvention", m.recallByConvention},
              {"entries", entries},
              {"surplus", m.surplus}};
}

Json manifest_json(const PipelineResult& r, bool withTimings) {
  Json hashes = Json::object();
  for (const auto& [k, v] : r.inputHashes) hashes[k] = v;
  Json j{{"tool", "deltaspec"},
         {"version", tool_version()},
         {"commit", r.commitId},
         {"seeds", Json{{"testgen", r.config.gen.seed}, {"fuzz", r.config.gen.seed}, {"simulation", r.config.sim.seed}}},
         {"config", r.config.canonical()},
         {"hashes", hashes},
         {"suites", Json{{"pre", hex64(suite_hash(r.preSuite))}, {"post", hex64(suite_hash(r.postSuite))}}}};
  if (withTimings) {
    Json t = Json::object();
    for (const auto& [stage, secs] : r.timings) t[stage] = secs;
    j["timings"] = t;
  }
  return j;
}

std::string delta_markdown(const DeltaReport& report) {
  std::ostringstream o;
  o << "# Delta: " << report.commitId << "\n\n";
  o << "mode: " << delta_mode_name(report.mode) << "\n\n";
  o << "added " << report.added.size() << ", removed " << report.removed.size() << ", preserved "
    << report.preserved.size() << ", undetermined " << report.undetermined.size() << "\n\n";
  o << "```diff\n";
  if (report.added.empty() && report.removed.empty()) o << "  (empty)\n";
  for (const auto& e : report.removed) o << "- " << e.assertion.key() << "\n";
  for (const auto& e : report.added) o << "+ " << e.assertion.key() << "\n";
  o << "```\n";
  auto block = [&](const char* title, const std::vector<DeltaEntry>& p) {
    o << "\n## " << title << "\n\n";
    if (p.empty()) {
      o << "(none)\n";
      return;
    }
    o << "```\n";
    for (const auto& e : p) o << "  " << e.assertion.key() << "\n";
    o << "```\n";
  };
  block("Preserved", report.preserved);
  block("Undetermined", report.undetermined);
  auto classes = [&](const std::vector<DeltaEntry>& p, char tag) {
    for (const auto& e : p)
      if (e.members.size() > 1) {
        o << tag << ' ' << e.assertion.key() << "\n";
        for (const auto& m : e.members)
          if (m != e.assertion.key()) o << "    ~ " << m << "\n";
      }
  };
  if (report.reduced) {
    bool any = false;
    for (const auto* p : {&report.added, &report.removed})
      for (const auto& e : *p) any = any || e.members.size() > 1;
    if (any) {
      o << "\n## Equivalent forms\n\n```\n";
      classes(report.removed, '-');
      classes(report.added, '+');
      o << "```\n";
    }
  }
  return o.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string kills_csv(const KillMatrix& km) {
  std::ostringstream o;
  o << "assertion";
  for (const auto& c : km.cols) o << ',' << c.text();
  o << '\n';
  for (std::size_t r = 0; r < km.rows.size(); ++r) {
    o << csv_field(km.rows[r].key());
    for (std::size_t c = 0; c < km.cols.size(); ++c) o << ',' << (km.cells[r][c].killed ? 1 : 0);
    o << '\n';
  }
  return o.str();
}

std::string rq3_csv(const SimResult& s) {
  std::ostringstream o;
  o << "pool,size,rep,rms\n";
  for (const auto& series : s.series)
    for (std::size_t rep = 0; rep < series.samples.size(); ++rep)
      o << series.pool << ',' << series.size << ',' << rep << ',' << fixed(series.samples[rep], 6) << '\n';
  return o.str();
}

std::string rq3_stats_csv(const SimResult& s) {
  std::ostringstream o;
  o << "size,U,p,a12\n";
  for (const auto& st : s.stats) {
    if (st.skipped) o << st.size << ",,,\n";
    else o << st.size << ',' << fixed(st.u, 1) << ',' << fixed(st.p, 6) << ',' << fixed(st.a12, 6) << '\n';
  }
  return o.str();
}

std::string rq4_csv(const CostResult& c) {
  std::ostringstream o;
  o << "pool,target,rep,cost\n";
  for (const auto& s : c.series)
    for (std::size_t rep = 0; rep < s.costs.size(); ++rep)
      o << s.pool << ',' << fixed(s.target, 2) << ',' << rep << ','
        << (s.costs[rep] ? std::to_string(*s.costs[rep]) : std::string("UNREACHED")) << '\n';
  return o.str();
}

std::string summary_markdown(const PipelineResult& r) {
  std::ostringstream o;
  o << "# Summary: " << r.commitId << "\n\n";
  o << "| stage | value |\n|---|---|\n";
  o << "| tests (pre / post) | " << r.preSuite.tests.size() << " / " << r.postSuite.tests.size() << " |\n";
  o << "| candidates | " << r.candidates.size() << " |\n";
  auto valid = [](const StatusTable& t) {
    std::size_t v = 0, s = 0;
    for (const auto& e : t.entries) {
      v += e.status == Status::Valid;
      s += e.status == Status::Valid && e.bucket == Bucket::Spec;
    }
    return std::to_string(v) + " valid, " + std::to_string(s) + " in spec";
  };
  o << "| pre | " << valid(r.preInference.table) << " |\n";
  o << "| post | " << valid(r.postInference.table) << " |\n";
  o << "| delta | +" << r.delta.added.size() << " -" << r.delta.removed.size() << " =" << r.delta.preserved.size()
    << " ?" << r.delta.undetermined.size() << " |\n";
  if (r.truthMatch)
    o << "| truth recall | " << r.truthMatch->matched << "/" << r.truthMatch->expressible << " ("
      << fixed(r.truthMatch->recall, 3) << (r.truthMatch->recallByConvention ? ", by convention" : "") << ") |\n";

  if (!r.experiments) return o.str();
  const auto& x = *r.experiments;
  std::size_t relevant = 0;
  for (const auto& l : x.relevance) relevant += l.counts(r.config.sim.countUntransplantable);
  o << "| mutants (relevant) | " << x.mutants.size() << " (" << relevant << ") |\n";
  if (!x.note.empty()) o << "\nExperiments skipped: " << x.note << "\n";

  if (x.rq3) {
    o << "\n## Mean rMS by selection size\n\n| size |";
    std::vector<std::string> pools;
    for (const auto& s : x.rq3->series)
      if (std::find(pools.begin(), pools.end(), s.pool) == pools.end()) pools.push_back(s.pool);
    for (const auto& p : pools) o << ' ' << p << " |";
    o << " U | p | A12 |\n|---|";
    for (std::size_t i = 0; i < pools.size() + 3; ++i) o << "---|";
    o << '\n';
    for (const auto& st : x.rq3->stats) {
      o << "| " << st.size << " |";
      for (const auto& p : pools)
        for (const auto& s : x.rq3->series)
          if (s.pool == p && s.size == st.size) o << ' ' << fixed(s.mean) << (s.exhausted ? "*" : "") << " |";
      if (st.skipped) o << " - | - | - |\n";
      else o << ' ' << fixed(st.u, 1) << " | " << fixed(st.p) << " | " << fixed(st.a12) << " |\n";
    }
    o << "\n`*` the size exceeds the pool; every rep used the whole pool.\n";
    for (const auto& p : x.rq3->absentPools) o << "\nPool `" << p << "` is empty.\n";
    auto agg = aggregate_rq3({*x.rq3});
    o << "\nAggregations (mean of commit means / pooled samples) coincide for a single commit:";
    for (const auto& a : agg)
      if (a.size == 1) o << ' ' << a.pool << ' ' << fixed(a.meanOfCommitMeans) << '/' << fixed(a.pooledMean) << ';';
    o << '\n';
  }
  if (x.rq4) {
    o << "\n## Assertions needed to reach an rMS target\n\n| pool | target | mean cost | median cost | reach rate |\n"
         "|---|---|---|---|---|\n";
    for (const auto& s : x.rq4->series)
      o << "| " << s.pool << " | " << fixed(s.target, 2) << " | " << fixed(s.meanCost, 2) << " | "
        << fixed(s.medianCost, 1) << " | " << fixed(s.reachRate, 2) << " |\n";
    for (const auto& p : x.rq4->absentPools) o << "\nPool `" << p << "` is empty.\n";
  }
  return o.str();
}

std::string rq3_svg(const SimResult& s) {
  const double w = 480, h = 300, left = 50, right = 20, top = 20, bottom = 40;
  int maxSize = 1;
  for (const auto& series : s.series) maxSize = std::max(maxSize, series.size);
  auto xpos = [&](int size) { return left + (maxSize > 1 ? (size - 1) * (w - left - right) / (maxSize - 1) : 0); };
  auto ypos = [&](double v) { return top + (1 - v) * (h - top - bottom); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  o << "<line x1=\"" << left << "\" y1=\"" << ypos(0) << "\" x2=\"" << w - right << "\" y2=\"" << ypos(0)
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << ypos(0) << "\" x2=\"" << left << "\" y2=\"" << ypos(1)
    << "\" stroke=\"black\"/>\n";
  for (double v : {0.0, 0.5, 1.0})
    o << "<text x=\"" << left - 30 << "\" y=\"" << ypos(v) + 4 << "\" font-size=\"11\">" << fixed(v, 1)
      << "</text>\n";
  o << "<text x=\"" << w / 2 - 40 << "\" y=\"" << h - 8 << "\" font-size=\"12\">selection size</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::vector<std::string> pools;
  for (const auto& series : s.series)
    if (std::find(pools.begin(), pools.end(), series.pool) == pools.end()) pools.push_back(series.pool);
  for (std::size_t i = 0; i < pools.size(); ++i) {
    o << "<polyline fill=\"none\" stroke=\"" << colors[i % 4] << "\" points=\"";
    for (const auto& series : s.series)
      if (series.pool == pools[i]) o << fixed(xpos(series.size), 1) << ',' << fixed(ypos(series.mean), 1) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << w - right - 90 << "\" y=\"" << top + 14 * (i + 1) << "\" font-size=\"12\" fill=\""
      << colors[i % 4] << "\">" << pools[i] << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::map<std::string, std::string> render_reports(const PipelineResult& r, bool svg) {
  std::map<std::string, std::string> f;
  auto json = [](const Json& j) { return j.dump(1) + "\n"; };
  auto compact = [](const Json& j) { return j.dump() + "\n"; };
  f["suites.json"] = json(Json{{"pre", suite_json(r.preSuite)}, {"post", suite_json(r.postSuite)}});
  f["statuses.json"] =
      compact(Json{{"pre", statuses_json(r.preInference.table)}, {"post", statuses_json(r.postInference.table)}});
  f["candidates.json"] = compact(candidates_json(r));
  f["delta.json"] = json(delta_json(r.delta));
  f["delta.md"] = delta_markdown(r.delta);
  f["summary.md"] = summary_markdown(r);
  f["manifest.json"] = json(manifest_json(r));
  if (r.truthMatch) f["truth_match.json"] = json(truth_match_json(*r.truthMatch));
  if (r.experiments) {
    const auto& x = *r.experiments;
    f["mutants.json"] = json(mutants_json(x.mutants, x.relevance.empty() ? nullptr : &x.relevance));
    f["kills.csv"] = kills_csv(x.kills);
    f["kills.json"] =
        json(kills_json(x.kills, x.relevance.empty() ? nullptr : &x.relevance, r.config.sim.countUntransplantable));
    if (x.rq3) {
      f["rq3.csv"] = rq3_csv(*x.rq3);
      f["rq3_stats.csv"] = rq3_stats_csv(*x.rq3);
      if (svg) f["rq3.svg"] = rq3_svg(*x.rq3);
    }
    if (x.rq4) f["rq4.csv"] = rq4_csv(*x.rq4);
  }
  return f;
}

void write_reports(const std::map<std::string, std::string>& files, const fs::path& outDir) {
  std::error_code ec;
  fs::create_directories(outDir, ec);
  if (ec) throw Error(ErrorCode::InputError, "cannot create " + outDir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) {
    std::ofstream out(outDir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::InputError, "cannot write " + (outDir / name).string());
    out << content;
  }
}

}  // namespace deltaspec
