#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops used by the similarity matrix (bitset overlap
// counts) and the regression statistics (sums, dot products, residuals).
//
// Every kernel has a scalar reference and, on x86-64, an AVX2 variant picked
// at runtime. The floating-point kernels accumulate in four interleaved lanes
// combined as (l0 + l1) + (l2 + l3) in both variants, so the two paths agree
// bit for bit.

namespace techconv::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t words);
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);
  double (*sum)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum of (y - intercept - slope * x)^2
  double (*sum_sq_residuals)(const double* x, const double* y, std::size_t n,
                             double intercept, double slope);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Best table for this CPU. Setting TECHCONV_ISA=scalar in the environment
/// before first use forces the reference kernels.
const KernelTable& active();

inline std::uint64_t popcount(std::span<const std::uint64_t> a) {
  return active().popcount(a.data(), a.size());
}

/// |a AND b| in bits; both spans must have the same length.
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

double dot(std::span<const double> a, std::span<const double> b);

double sum_sq_residuals(std::span<const double> x, std::span<const double> y, double intercept,
                        double slope);

}  // namespace techconv::kernels
