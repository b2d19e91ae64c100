#pragma once

#include <cstddef>
#include <span>

namespace enf {

struct MatchResult {
  std::size_t best_lag = 0;  // 0-based start of the best segment of g
  double correlation = 0.0;
  bool centered = false;
  std::size_t n_used = 0;  // pairs left after dropping gaps at best_lag

  // Lag as reported to users, counting from 1.
  std::size_t lag_one_based() const noexcept { return best_lag + 1; }
};

struct FisherTest {
  double z1 = 0.0;
  double z2 = 0.0;
  double q = 0.0;
  std::size_t n = 0;
  double alpha = 0.05;
  double critical = 1.96;
  bool reject = false;
};

// Normalised inner product of f and g. Uncentered mode is f.g / (|f| |g|);
// centered mode subtracts each mean first (Pearson). NaN entries in either
// vector drop the pair. Throws UndefinedCorrelation on a zero norm and
// InvalidArgument on length mismatch or fewer than two pairs.
double correlation(std::span<const double> f, std::span<const double> g,
                   bool centered);

// Slides f along g (|g| >= |f|) and keeps the lag with the largest
// correlation; ties go to the smallest lag. Lags where the correlation is
// undefined are skipped; if no lag is usable UndefinedCorrelation is thrown.
MatchResult best_lag(std::span<const double> f, std::span<const double> g,
                     bool centered, unsigned threads = 1);

// q = sqrt(n - 3) (atanh c1 - atanh c2), rejecting equality when |q| reaches
// the two-sided normal critical value for `alpha`.
FisherTest fisher_test(double c1, double c2, std::size_t n, double alpha = 0.05);

// Two-sided standard normal quantile z_{1 - alpha/2}.
double normal_critical_value(double alpha);

}  // namespace enf
