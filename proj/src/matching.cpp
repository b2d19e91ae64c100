#include "enf/matching.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "enf/error.hpp"

namespace enf {
namespace {

struct PairStats {
  double value = 0.0;
  std::size_t n = 0;
};

// Correlation over the pairs where both entries are finite.
PairStats correlate(const double* f, const double* g, std::size_t len, bool centered) {
  std::size_t n = 0;
  double mf = 0.0;
  double mg = 0.0;
  if (centered) {
    for (std::size_t i = 0; i < len; ++i) {
      if (std::isfinite(f[i]) && std::isfinite(g[i])) {
        mf += f[i];
        mg += g[i];
        ++n;
      }
    }
    if (n == 0) throw InvalidArgument("correlation needs at least two valid pairs");
    mf /= static_cast<double>(n);
    mg /= static_cast<double>(n);
    n = 0;
  }
  double fg = 0.0;
  double ff = 0.0;
  double gg = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    if (!std::isfinite(f[i]) || !std::isfinite(g[i])) continue;
    const double a = f[i] - mf;
    const double b = g[i] - mg;
    fg += a * b;
    ff += a * a;
    gg += b * b;
    ++n;
  }
  if (n < 2) throw InvalidArgument("correlation needs at least two valid pairs");
  if (!(ff > 0.0) || !(gg > 0.0)) {
    throw UndefinedCorrelation(centered ? "correlation undefined: a sequence has zero variance"
                                        : "correlation undefined: a sequence has zero norm");
  }
  const double c = fg / std::sqrt(ff * gg);
  return {std::clamp(c, -1.0, 1.0), n};
}

}  // namespace

double correlation(std::span<const double> f, std::span<const double> g, bool centered) {
  if (f.size() != g.size()) {
    throw InvalidArgument("correlation of sequences with lengths " + std::to_string(f.size()) +
                          " and " + std::to_string(g.size()));
  }
  if (f.size() < 2) throw InvalidArgument("correlation needs at least two samples");
  return correlate(f.data(), g.data(), f.size(), centered).value;
}

MatchResult best_lag(std::span<const double> f, std::span<const double> g, bool centered,
                     unsigned threads) {
  const std::size_t k = f.size();
  if (k < 2) throw InvalidArgument("extracted track needs at least two entries");
  if (g.size() < k) {
    throw InvalidArgument("reference track (" + std::to_string(g.size()) +
                          " entries) is shorter than the extracted track (" +
                          std::to_string(k) + ")");
  }
  const std::size_t lags = g.size() - k + 1;
  std::vector<PairStats> scores(lags);
  std::vector<char> usable(lags, 0);

  auto scan = [&](std::size_t begin, std::size_t end) {
    for (std::size_t l = begin; l < end; ++l) {
      try {
        scores[l] = correlate(f.data(), g.data() + l, k, centered);
        usable[l] = 1;
      } catch (const InvalidArgument&) {
      } catch (const UndefinedCorrelation&) {
      }
    }
  };
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, lags));
  if (threads == 1) {
    scan(0, lags);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (lags + threads - 1) / threads;
    for (std::size_t begin = 0; begin < lags; begin += chunk) {
      workers.emplace_back(scan, begin, std::min(lags, begin + chunk));
    }
  }

  MatchResult result;
  result.centered = centered;
  bool found = false;
  for (std::size_t l = 0; l < lags; ++l) {
    if (!usable[l]) continue;
    if (!found || scores[l].value > result.correlation) {
      result.best_lag = l;
      result.correlation = scores[l].value;
      result.n_used = scores[l].n;
      found = true;
    }
  }
  if (!found) throw UndefinedCorrelation("correlation is undefined at every lag");
  return result;
}

double normal_critical_value(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(boost::math::complement(normal, alpha / 2.0));
  // Two decimals, as in printed z tables (1.96 at alpha = 0.05).
  return std::round(z * 100.0) / 100.0;
}

FisherTest fisher_test(double c1, double c2, std::size_t n, double alpha) {
  if (!(std::abs(c1) < 1.0) || !(std::abs(c2) < 1.0)) {
    throw InvalidArgument("Fisher transform needs |c| < 1");
  }
  if (n <= 3) throw InvalidArgument("Fisher test needs n > 3");
  FisherTest t;
  t.z1 = std::atanh(c1);
  t.z2 = std::atanh(c2);
  t.n = n;
  t.alpha = alpha;
  t.critical = normal_critical_value(alpha);
  t.q = std::sqrt(static_cast<double>(n - 3)) * (t.z1 - t.z2);
  t.reject = std::abs(t.q) >= t.critical;
  return t;
}

}  // namespace enf
