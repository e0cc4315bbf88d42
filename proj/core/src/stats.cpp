#include "deltaspec/stats.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace deltaspec {

std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pooled[a] < pooled[b]; });
  std::vector<double> ranks(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Counts splits whose rank sum is at least as far from the mean as the observed one.
void enumerate(const std::vector<double>& ranks, std::size_t start, std::size_t left, double sum, double mean,
               double threshold, double& extreme, double& total) {
  if (left == 0) {
    total += 1;
    if (std::fabs(sum - mean) >= threshold - 1e-9) extreme += 1;
    return;
  }
  for (std::size_t i = start; i + left <= ranks.size(); ++i)
    enumerate(ranks, i + 1, left - 1, sum + ranks[i], mean, threshold, extreme, total);
}

}  // namespace

MannWhitney mann_whitney_u(const std::vector<double>& xs, const std::vector<double>& ys, bool approximate) {
  std::vector<double> pooled(xs);
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  auto ranks = midranks(pooled);
  const double nx = static_cast<double>(xs.size()), ny = static_cast<double>(ys.size());
  const double n = nx + ny;
  double rx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) rx += ranks[i];
  MannWhitney r;
  r.u = rx - nx * (nx + 1) / 2;
  const double mu = nx * ny / 2;

  if (!approximate && xs.size() + ys.size() <= 12) {
    double extreme = 0, total = 0;
    const double rankMean = nx * (n + 1) / 2;
    enumerate(ranks, 0, xs.size(), 0.0, rankMean, std::fabs(rx - rankMean), extreme, total);
    r.p = extreme / total;
    r.exact = true;
    return r;
  }

  std::vector<double> sorted(pooled);
  std::sort(sorted.begin(), sorted.end());
  double tieTerm = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    double t = static_cast<double>(j - i);
    tieTerm += t * t * t - t;
    i = j;
  }
  double var = nx * ny / 12.0 * ((n + 1) - (n > 1 ? tieTerm / (n * (n - 1)) : 0.0));
  if (var <= 0) {
    r.p = 1;
    return r;
  }
  double z = std::max(0.0, std::fabs(r.u - mu) - 0.5) / std::sqrt(var);
  r.p = std::clamp(std::erfc(z / std::sqrt(2.0)), DBL_MIN, 1.0);
  return r;
}

double vargha_delaney_a12(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [&] {
    std::vector<double> pooled(xs);
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    return midranks(pooled);
  }();
  const double nx = static_cast<double>(xs.size()), ny = static_cast<double>(ys.size());
  double rx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) rx += ranks[i];
  return (rx / nx - (nx + 1) / 2) / ny;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

}  // namespace deltaspec
