#include "techconv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "techconv/error.hpp"
#include "techconv/kernels.hpp"

namespace techconv::stats {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("breakcheck", message); }

bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::vector<double> centered(std::span<const double> v, double mean) {
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x -= mean;
  return out;
}

double total_sum_squares(std::span<const double> y) {
  const double mean = kernels::sum(y) / static_cast<double>(y.size());
  const auto dy = centered(y, mean);
  return kernels::dot(dy, dy);
}

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail("x and y differ in length");
  if (x.size() < 3) fail("least squares needs at least 3 points, got " + std::to_string(x.size()));
  if (all_equal(x)) fail("least squares undefined: all x values are equal");
  const auto n = static_cast<double>(x.size());
  const double mx = kernels::sum(x) / n;
  const double my = kernels::sum(y) / n;
  const auto dx = centered(x, mx);
  const auto dy = centered(y, my);
  OlsFit fit;
  fit.slope = kernels::dot(dx, dy) / kernels::dot(dx, dx);
  fit.intercept = my - fit.slope * mx;
  fit.ssr = kernels::sum_sq_residuals(x, y, fit.intercept, fit.slope);
  return fit;
}

BreakTestResult chow_test(std::span<const double> x, std::span<const double> y,
                          std::size_t breakpoint) {
  constexpr int k = 2;
  if (x.size() != y.size()) fail("x and y differ in length");
  BreakTestResult r;
  r.breakpoint_index = breakpoint;
  r.k = k;
  r.n1 = std::min(breakpoint, x.size());
  r.n2 = x.size() - r.n1;
  if (r.n1 <= static_cast<std::size_t>(k) || r.n2 <= static_cast<std::size_t>(k))
    fail("each segment needs at least " + std::to_string(k + 1) + " points; breakpoint " +
         std::to_string(breakpoint) + " leaves " + std::to_string(r.n1) + " and " +
         std::to_string(r.n2));

  r.ssr_pooled = ols_fit(x, y).ssr;
  r.ssr_segments = ols_fit(x.first(r.n1), y.first(r.n1)).ssr +
                   ols_fit(x.subspan(r.n1), y.subspan(r.n1)).ssr;

  const double zero = 1e-20 * total_sum_squares(y);
  if (r.ssr_pooled <= zero) {
    r.f_statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const auto dof = static_cast<double>(r.n1 + r.n2 - 2 * k);
  if (r.ssr_segments <= zero) {
    r.f_statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  const double gain = std::max(0.0, r.ssr_pooled - r.ssr_segments);
  r.f_statistic = (gain / k) / (r.ssr_segments / dof);
  r.p_value = f_survival(r.f_statistic, k, dof);
  return r;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete_beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double f, double d1, double d2) {
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  return incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
}

double f_survival(double f, double d1, double d2) {
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail("correlation needs series of equal length");
  if (a.size() < 2) fail("correlation needs at least 2 points");
  if (all_equal(a) || all_equal(b)) fail("correlation undefined: constant series");
  const auto n = static_cast<double>(a.size());
  const auto da = centered(a, kernels::sum(a) / n);
  const auto db = centered(b, kernels::sum(b) / n);
  const double r = kernels::dot(da, db) / std::sqrt(kernels::dot(da, da) * kernels::dot(db, db));
  return std::clamp(r, -1.0, 1.0);
}

std::string format_p_value(double p) {
  if (p < 1e-12) return "<1e-12";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", p);
  return buf;
}

}  // namespace techconv::stats
