#include <bit>

#include "kernels_internal.hpp"

namespace techconv::kernels::detail {
namespace {

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i]);
  return total;
}

std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

double combine(const double lane[4]) { return (lane[0] + lane[1]) + (lane[2] + lane[3]); }

double sum_scalar(const double* a, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) lane[k] += a[i + k];
  for (int k = 0; i < n; ++i, ++k) lane[k] += a[i];
  return combine(lane);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) {
      const double p = a[i + k] * b[i + k];
      lane[k] += p;
    }
  for (int k = 0; i < n; ++i, ++k) {
    const double p = a[i] * b[i];
    lane[k] += p;
  }
  return combine(lane);
}

double ssr_scalar(const double* x, const double* y, std::size_t n, double intercept,
                  double slope) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  auto residual_sq = [&](std::size_t j) {
    const double fit = slope * x[j];
    const double r = y[j] - (intercept + fit);
    return r * r;
  };
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) lane[k] += residual_sq(i + k);
  for (int k = 0; i < n; ++i, ++k) lane[k] += residual_sq(i);
  return combine(lane);
}

}  // namespace

const KernelTable kScalarTable{Isa::scalar,  popcount_scalar, and_popcount_scalar,
                               sum_scalar,   dot_scalar,      ssr_scalar};

}  // namespace techconv::kernels::detail
