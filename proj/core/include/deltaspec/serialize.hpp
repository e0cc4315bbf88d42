#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "deltaspec/pipeline.hpp"

namespace deltaspec {

using Json = nlohmann::ordered_json;

/// Values are written as DL literal text (`3`, `2.5`, `nan`, `true`, `[1, 2]`).
Json value_json(const Value& v);
Json suite_json(const TestSuite& suite);
Json statuses_json(const StatusTable& table);
Json candidates_json(const PipelineResult& r);
Json delta_json(const DeltaReport& report);
Json mutants_json(const std::vector<Mutant>& mutants, const std::vector<RelevanceLabel>* labels = nullptr);
Json kills_json(const KillMatrix& km, const std::vector<RelevanceLabel>* labels, bool countUntransplantable = true);
Json truth_match_json(const MatchResult& m);
Json manifest_json(const PipelineResult& r, bool withTimings = true);

std::string delta_markdown(const DeltaReport& report);
std::string kills_csv(const KillMatrix& km);
std::string rq3_csv(const SimResult& s);
std::string rq3_stats_csv(const SimResult& s);
std::string rq4_csv(const CostResult& c);
std::string summary_markdown(const PipelineResult& r);
std::string rq3_svg(const SimResult& s);

/// File name to contents for every report of a run. `manifest.json` is the
/// only file carrying timings.
std::map<std::string, std::string> render_reports(const PipelineResult& r, bool svg = false);

void write_reports(const std::map<std::string, std::string>& files, const std::filesystem::path& outDir);

}  // namespace deltaspec
