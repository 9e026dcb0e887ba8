#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace techconv::stats {

struct OlsFit {
  double intercept = 0.0;
  double slope = 0.0;
  double ssr = 0.0;  // sum of squared residuals
};

/// Least-squares line through (x, y). Needs >= 3 points and non-constant x.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

struct BreakTestResult {
  double f_statistic = 0.0;  // +inf when both segments fit exactly
  double p_value = 1.0;
  std::size_t breakpoint_index = 0;
  int k = 2;  // regressors: intercept and slope
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double ssr_pooled = 0.0;
  double ssr_segments = 0.0;
};

/// Chow test for a break at a known index: segment one is [0, breakpoint),
/// segment two is [breakpoint, n). Each segment needs more than k = 2
/// points.
///
///   F = ((SSR_p - (SSR_1 + SSR_2)) / k) / ((SSR_1 + SSR_2) / (n1 + n2 - 2k))
///
/// Sums of squares below 1e-20 of the total sum of squares are treated as
/// exact zeros: a pooled fit with no residual gives F = 0, p = 1; exact
/// segment fits under a residual pooled fit give F = inf, p = 0.
BreakTestResult chow_test(std::span<const double> x, std::span<const double> y,
                          std::size_t breakpoint);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

double f_cdf(double f, double d1, double d2);
/// Upper tail 1 - CDF, computed directly rather than by subtraction.
double f_survival(double f, double d1, double d2);

/// Pearson correlation. Equal lengths >= 2, neither series constant.
double pearson(std::span<const double> a, std::span<const double> b);

/// 4 significant digits; anything below 1e-12 prints as "<1e-12".
std::string format_p_value(double p);

}  // namespace techconv::stats
