#pragma once

#include <cstdint>

namespace mirrorsim {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

double normal_cdf(double x);

struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion. trials == 0 yields the
/// vacuous [0, 1].
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z = kZ95);

struct ZTestResult {
  double z = 0.0;
  double p_value = 1.0;
};

/// Pooled two-proportion z-test, two-sided. Degenerate inputs (an empty
/// sample, or a pooled proportion of exactly 0 or 1, where the null cannot
/// be rejected) report z = 0, p = 1.
ZTestResult two_proportion_test(std::uint64_t successes1, std::uint64_t trials1,
                                std::uint64_t successes2, std::uint64_t trials2);

/// Round to two decimals, halves away from zero, with a one-part-per-1e9
/// guard so values sitting a few ulps below an exact half still round up.
double round2(double x);

}  // namespace mirrorsim
