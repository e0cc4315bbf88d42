#pragma once

#include <vector>

namespace deltaspec {

struct MannWhitney {
  double u = 0;  // U for xs
  double p = 1;  // two-sided, in (0, 1]
  bool exact = false;
};

/// Exact enumeration when |xs| + |ys| <= 12 unless `approximate` is set;
/// otherwise the normal approximation with tie and continuity correction.
MannWhitney mann_whitney_u(const std::vector<double>& xs, const std::vector<double>& ys, bool approximate = false);

/// P(X > Y) + 0.5 P(X = Y).
double vargha_delaney_a12(const std::vector<double>& xs, const std::vector<double>& ys);

/// Midranks of the pooled sample, xs first.
std::vector<double> midranks(const std::vector<double>& pooled);

double median(std::vector<double> v);

}  // namespace deltaspec
