#include "enf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "enf/capon.hpp"
#include "enf/error.hpp"

namespace enf {
namespace {

// Autocovariance of a few random sinusoids in white noise; always positive
// definite.
ToeplitzCovariance random_covariance(std::size_t order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ToeplitzCovariance cov{std::vector<double>(order, 0.0)};
  for (int s = 0; s < 3; ++s) {
    const double power = 0.1 + unit(rng);
    const double omega = std::numbers::pi * unit(rng);
    for (std::size_t k = 0; k < order; ++k) {
      cov.first_column[k] += power * std::cos(omega * static_cast<double>(k));
    }
  }
  cov.first_column[0] += 0.05 + 0.1 * unit(rng);
  return cov;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BenchReport run_bench(std::size_t order, std::size_t grid_size, std::size_t trials,
                      std::uint64_t seed) {
  if (order < 2) throw InvalidArgument("bench order must be >= 2");
  if (trials == 0) throw InvalidArgument("bench needs at least one trial");
  if (grid_size < 2 * order - 1) {
    throw InvalidArgument("grid size Q = " + std::to_string(grid_size) +
                          " is below 2M - 1 = " + std::to_string(2 * order - 1));
  }
  using clock = std::chrono::steady_clock;
  std::mt19937_64 rng(seed);
  std::vector<double> fast_times;
  std::vector<double> dense_times;
  fast_times.reserve(trials);
  dense_times.reserve(trials);
  double max_rel = 0.0;
  const double fs = 1.0;

  for (std::size_t t = 0; t < trials; ++t) {
    const auto cov = random_covariance(order, rng);

    const auto f0 = clock::now();
    const auto lev = levinson_solve(cov);
    const auto fast = capon_psd(denom_coeffs(gs_factors(lev.w, lev.alpha)), grid_size, fs);
    const auto f1 = clock::now();

    const auto d0 = clock::now();
    const auto dense = dense_capon_psd(dense_inverse(cov.dense()), grid_size, fs);
    const auto d1 = clock::now();

    fast_times.push_back(std::chrono::duration<double>(f1 - f0).count());
    dense_times.push_back(std::chrono::duration<double>(d1 - d0).count());
    for (std::size_t q = 0; q < grid_size; ++q) {
      max_rel = std::max(max_rel, std::abs(fast.values[q] - dense.values[q]) / dense.values[q]);
    }
  }

  BenchReport report;
  report.order = order;
  report.grid_size = grid_size;
  report.trials = trials;
  report.fast_median_s = median(fast_times);
  report.dense_median_s = median(dense_times);
  report.speedup = report.fast_median_s > 0.0 ? report.dense_median_s / report.fast_median_s
                                              : std::numeric_limits<double>::infinity();
  report.max_rel_diff = max_rel;
  return report;
}

}  // namespace enf
