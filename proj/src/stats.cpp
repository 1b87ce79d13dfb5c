#include "mirrorsim/stats.hpp"

#include <algorithm>
#include <cmath>

namespace mirrorsim {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double spread =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // At the boundary counts the score interval touches 0 or 1 exactly;
  // keep it free of rounding dust there.
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - spread);
  const double high = successes == trials ? 1.0 : std::min(1.0, center + spread);
  return {low, high};
}

ZTestResult two_proportion_test(std::uint64_t successes1, std::uint64_t trials1,
                                std::uint64_t successes2, std::uint64_t trials2) {
  if (trials1 == 0 || trials2 == 0) return {};
  const double n1 = double(trials1);
  const double n2 = double(trials2);
  const double p1 = double(successes1) / n1;
  const double p2 = double(successes2) / n2;
  const double pooled = double(successes1 + successes2) / (n1 + n2);
  if (pooled <= 0.0 || pooled >= 1.0) return {};
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  ZTestResult r;
  r.z = (p1 - p2) / se;
  r.p_value = 2.0 * (1.0 - normal_cdf(std::fabs(r.z)));
  return r;
}

double round2(double x) {
  // 29/40 computes as 0.7249999...8 in binary; the guard keeps such exact
  // halves rounding away from zero instead of down.
  const double guarded = std::fabs(x) * 100.0 + 0.5 + 1e-9;
  return std::copysign(std::floor(guarded) / 100.0, x);
}

}  // namespace mirrorsim
