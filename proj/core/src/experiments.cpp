#include "deltaspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"
#include "deltaspec/stats.hpp"

namespace deltaspec {

Ratio rms(std::uint64_t killedRelevant, std::uint64_t relevant) {
  if (relevant == 0) throw Error(ErrorCode::UndefinedScore, "rMS is undefined without relevant mutants");
  return Ratio{killedRelevant, relevant};
}

std::vector<bool> relevant_columns(const std::vector<RelevanceLabel>& labels, bool countUntransplantable) {
  std::vector<bool> out;
  for (const auto& l : labels) out.push_back(l.counts(countUntransplantable));
  return out;
}

Ratio selection_rms(const KillMatrix& km, const std::vector<bool>& relevant, const std::vector<std::size_t>& rows) {
  if (relevant.size() != km.cols.size()) throw Error(ErrorCode::MatrixMismatch, "relevance labels do not match columns");
  std::uint64_t total = 0, killed = 0;
  for (std::size_t c = 0; c < km.cols.size(); ++c) {
    if (!relevant[c]) continue;
    ++total;
    for (auto r : rows)
      if (km.cells[r][c].killed) {
        ++killed;
        break;
      }
  }
  return rms(killed, total);
}

void validate(const SimConfig& cfg) {
  if (cfg.reps < 1) throw Error(ErrorCode::InputError, "reps must be at least 1");
  for (int k : cfg.sizes)
    if (k < 1) throw Error(ErrorCode::InputError, "selection sizes must be positive");
  for (double t : cfg.targets)
    if (!(t > 0 && t <= 1)) throw Error(ErrorCode::InputError, "rMS targets must lie in (0, 1]");
}

namespace {

void check_pool(const KillMatrix& km, const Pool& p) {
  for (auto r : p.rows)
    if (r >= km.rows.size()) throw Error(ErrorCode::MatrixMismatch, "pool '" + p.name + "' names a missing row");
}

// The first k entries of a seeded Fisher-Yates pass.
std::vector<std::size_t> sample(std::vector<std::size_t> rows, std::size_t k, Rng& rng) {
  k = std::min(k, rows.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(rows.size() - i));
    std::swap(rows[i], rows[j]);
  }
  rows.resize(k);
  return rows;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SimResult simulate_fixed_size(const KillMatrix& km, const std::vector<RelevanceLabel>& labels, const SimConfig& cfg,
                              const Pool& a, const Pool& b) {
  validate(cfg);
  check_pool(km, a);
  check_pool(km, b);
  auto relevant = relevant_columns(labels, cfg.countUntransplantable);
  if (relevant.size() != km.cols.size()) throw Error(ErrorCode::MatrixMismatch, "relevance labels do not match columns");
  rms(0, static_cast<std::uint64_t>(std::count(relevant.begin(), relevant.end(), true)));

  SimResult res;
  for (const Pool* p : {&a, &b}) {
    if (p->rows.empty()) {
      res.absentPools.push_back(p->name);
      continue;
    }
    for (int k : cfg.sizes) {
      SizeSeries s;
      s.pool = p->name;
      s.size = k;
      s.exhausted = static_cast<std::size_t>(k) > p->rows.size();
      for (int rep = 0; rep < cfg.reps; ++rep) {
        Rng rng({cfg.seed, fnv1a(p->name), static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(rep)});
        s.samples.push_back(selection_rms(km, relevant, sample(p->rows, static_cast<std::size_t>(k), rng)).value());
      }
      s.mean = mean(s.samples);
      res.series.push_back(std::move(s));
    }
  }
  for (int k : cfg.sizes) {
    SizeStats st;
    st.size = k;
    const SizeSeries *sa = nullptr, *sb = nullptr;
    for (const auto& s : res.series) {
      if (s.size != k) continue;
      if (s.pool == a.name && !sa) sa = &s;
      else if (s.pool == b.name) sb = &s;
    }
    if (!sa || !sb) {
      st.skipped = true;
    } else {
      auto mw = mann_whitney_u(sa->samples, sb->samples);
      st.u = mw.u;
      st.p = mw.p;
      st.a12 = vargha_delaney_a12(sa->samples, sb->samples);
    }
    res.stats.push_back(st);
  }
  return res;
}

CostResult simulate_to_target(const KillMatrix& km, const std::vector<RelevanceLabel>& labels, const SimConfig& cfg,
                              const std::vector<Pool>& pools) {
  validate(cfg);
  auto relevant = relevant_columns(labels, cfg.countUntransplantable);
  if (relevant.size() != km.cols.size()) throw Error(ErrorCode::MatrixMismatch, "relevance labels do not match columns");
  const auto total = static_cast<std::uint64_t>(std::count(relevant.begin(), relevant.end(), true));
  rms(0, total);

  CostResult res;
  for (const auto& p : pools) {
    check_pool(km, p);
    if (p.rows.empty()) {
      res.absentPools.push_back(p.name);
      continue;
    }
    // Cumulative killed-relevant counts along one random draw order per rep.
    std::vector<std::vector<std::uint64_t>> curves;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      Rng rng({cfg.seed, fnv1a(p.name), static_cast<std::uint64_t>(rep)});
      auto order = sample(p.rows, p.rows.size(), rng);
      std::vector<bool> hit(km.cols.size(), false);
      std::uint64_t killed = 0;
      std::vector<std::uint64_t> curve;
      for (auto r : order) {
        for (std::size_t c = 0; c < km.cols.size(); ++c)
          if (relevant[c] && !hit[c] && km.cells[r][c].killed) {
            hit[c] = true;
            ++killed;
          }
        curve.push_back(killed);
      }
      curves.push_back(std::move(curve));
    }
    for (double target : cfg.targets) {
      CostSeries s;
      s.pool = p.name;
      s.target = target;
      std::vector<double> reached, all;
      for (const auto& curve : curves) {
        std::optional<int> cost;
        for (std::size_t i = 0; i < curve.size(); ++i)
          if (static_cast<double>(curve[i]) >= target * static_cast<double>(total) - 1e-9) {
            cost = static_cast<int>(i + 1);
            break;
          }
        s.costs.push_back(cost);
        if (cost) reached.push_back(*cost);
        all.push_back(cost ? *cost : std::numeric_limits<double>::infinity());
      }
      s.meanCost = mean(reached);
      s.reachRate = static_cast<double>(reached.size()) / static_cast<double>(curves.size());
      s.medianCost = median(all);
      res.series.push_back(std::move(s));
    }
  }
  return res;
}

std::vector<Rq3Aggregate> aggregate_rq3(const std::vector<SimResult>& perCommit) {
  struct Acc {
    double sumMeans = 0;
    int commits = 0;
    double sumSamples = 0;
    std::size_t samples = 0;
  };
  std::map<std::pair<std::string, int>, Acc> acc;
  std::vector<std::pair<std::string, int>> order;
  for (const auto& r : perCommit)
    for (const auto& s : r.series) {
      auto key = std::make_pair(s.pool, s.size);
      if (!acc.count(key)) order.push_back(key);
      auto& a = acc[key];
      a.sumMeans += s.mean;
      ++a.commits;
      a.sumSamples += std::accumulate(s.samples.begin(), s.samples.end(), 0.0);
      a.samples += s.samples.size();
    }
  std::vector<Rq3Aggregate> out;
  for (const auto& key : order) {
    const auto& a = acc[key];
    out.push_back({key.first, key.second, a.sumMeans / a.commits, a.sumSamples / static_cast<double>(a.samples)});
  }
  return out;
}

}  // namespace deltaspec
