#pragma once

#include <cstddef>
#include <cstdint>

namespace enf {

// Per-frame timing of the structured Capon path (Levinson, generators,
// FFT grid) against the dense path (explicit inverse, per-bin quadratic
// form), both starting from the same random positive-definite Toeplitz
// covariance.
struct BenchReport {
  std::size_t order = 0;
  std::size_t grid_size = 0;
  std::size_t trials = 0;
  double fast_median_s = 0.0;
  double dense_median_s = 0.0;
  double speedup = 0.0;
  // Largest relative PSD disagreement between the two paths.
  double max_rel_diff = 0.0;
};

// Throws InvalidArgument when grid_size < 2 * order - 1 or trials == 0.
BenchReport run_bench(std::size_t order, std::size_t grid_size,
                      std::size_t trials, std::uint64_t seed = 1);

}  // namespace enf
