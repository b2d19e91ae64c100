#include "enf/capon.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "enf/error.hpp"
#include "enf/fft.hpp"

namespace enf {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix ToeplitzCovariance::dense() const {
  const std::size_t n = order();
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r(i, j) = first_column[i > j ? i - j : j - i];
  }
  return r;
}

std::vector<double> CaponDenomCoeffs::full() const {
  const std::size_t m = half_.size();
  std::vector<double> out(2 * m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    out[m - 1 + i] = half_[i];
    out[m - 1 - i] = half_[i];
  }
  return out;
}

double CaponDenomCoeffs::evaluate(double omega) const noexcept {
  double acc = 0.0;
  for (std::size_t i = half_.size() - 1; i >= 1; --i) {
    acc += half_[i] * std::cos(static_cast<double>(i) * omega);
  }
  return half_[0] + 2.0 * acc;
}

ToeplitzCovariance estimate_autocovariance(std::span<const double> frame, std::size_t m) {
  const std::size_t n = frame.size();
  if (m < 1) throw InvalidArgument("Capon order m must be >= 1");
  if (n <= m) {
    throw InvalidArgument("frame of " + std::to_string(n) +
                          " samples is too short for order m = " + std::to_string(m));
  }
  ToeplitzCovariance cov{std::vector<double>(m + 1)};
  for (std::size_t k = 0; k <= m; ++k) {
    double acc = 0.0;
    for (std::size_t t = k; t < n; ++t) acc += frame[t] * frame[t - k];
    cov.first_column[k] = acc / static_cast<double>(n);
  }
  return cov;
}

LevinsonSolution levinson_solve(const ToeplitzCovariance& cov) {
  const auto& rho = cov.first_column;
  const std::size_t order = rho.size();
  if (order < 1) throw InvalidArgument("empty covariance");
  if (!(rho[0] > 0.0)) throw NotPositiveDefinite("rho_0 is not positive", 0);

  std::vector<double> a;
  a.reserve(order - 1);
  std::vector<double> next;
  double err = rho[0];
  for (std::size_t k = 1; k < order; ++k) {
    double acc = rho[k];
    for (std::size_t j = 1; j < k; ++j) acc += a[j - 1] * rho[k - j];
    const double kappa = -acc / err;
    next.assign(k, 0.0);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = a[j - 1] + kappa * a[k - j - 1];
    next[k - 1] = kappa;
    a.swap(next);
    err *= (1.0 - kappa) * (1.0 + kappa);
    if (!(err > 0.0)) {
      throw NotPositiveDefinite(
          "covariance is not positive definite (prediction error " + std::to_string(err) +
              " at order " + std::to_string(k) + ")",
          k);
    }
  }
  return LevinsonSolution{std::move(a), err};
}

GsFactors gs_factors(std::span<const double> w, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("prediction error alpha must be positive");
  const std::size_t order = w.size() + 1;
  const double s = 1.0 / std::sqrt(alpha);
  GsFactors f;
  f.gamma.assign(order, 0.0);
  f.delta.assign(order, 0.0);
  f.gamma[0] = s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    f.gamma[i + 1] = w[i] * s;
    f.delta[i + 1] = w[w.size() - 1 - i] * s;
  }
  f.alpha = alpha;
  f.w.assign(w.begin(), w.end());
  return f;
}

DenseMatrix inverse_from_gs(const GsFactors& factors) {
  const std::size_t n = factors.order();
  const auto& g = factors.gamma;
  const auto& d = factors.delta;
  DenseMatrix inv(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s <= r; ++s) {
      double acc = 0.0;
      for (std::size_t c = 0; c <= s; ++c) acc += g[r - c] * g[s - c] - d[r - c] * d[s - c];
      inv(r, s) = acc;
      inv(s, r) = acc;
    }
  }
  return inv;
}

CaponDenomCoeffs denom_coeffs(const GsFactors& factors) {
  const std::size_t n = factors.order();
  const auto& g = factors.gamma;
  const auto& d = factors.delta;
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t u = 0; u + i < n; ++u) {
      acc += static_cast<double>(n - i - u) * (g[u] * g[u + i] - d[u] * d[u + i]);
    }
    x[i] = acc;
  }
  return CaponDenomCoeffs(std::move(x));
}

PsdEstimate capon_psd(const CaponDenomCoeffs& x, std::size_t grid_size, double sample_rate_hz) {
  const std::size_t m = x.order();
  if (grid_size < 2 * m - 1) {
    throw InvalidArgument("grid size Q = " + std::to_string(grid_size) +
                          " is below 2M - 1 = " + std::to_string(2 * m - 1));
  }
  std::vector<double> shifted(grid_size, 0.0);
  shifted[0] = x[0];
  for (std::size_t i = 1; i < m; ++i) {
    shifted[i] = x[static_cast<long>(i)];
    shifted[grid_size - i] = x[static_cast<long>(i)];
  }
  // The sequence is even, so its transform is real and the sign of the
  // exponent does not matter.
  const auto spectrum = fft::real_forward(shifted, grid_size);

  PsdEstimate psd{std::vector<double>(grid_size), sample_rate_hz};
  const double numerator = static_cast<double>(m);
  for (std::size_t q = 0; q < grid_size; ++q) {
    const std::size_t src = q < spectrum.size() ? q : grid_size - q;
    const double den = spectrum[src].real();
    if (!(den > 0.0)) {
      throw NumericalDegeneracy("Capon denominator is not positive at bin " + std::to_string(q),
                                q);
    }
    psd.values[q] = numerator / den;
  }
  return psd;
}

namespace {

// Repeated three-point fits on log PSD = log(m+1) - log(phi_den), evaluated
// from the coefficients rather than the grid, halving the spacing each time
// until it drops below `tol_bins`.
std::optional<double> polish_peak(const CaponDenomCoeffs& x, std::size_t grid_size,
                                  std::size_t q_max, double tol_bins = 1e-7) {
  const double to_omega = 2.0 * std::numbers::pi / static_cast<double>(grid_size);
  auto log_psd = [&](double v) {
    const double den = x.evaluate(v * to_omega);
    return den > 0.0 ? -std::log(den) : -HUGE_VAL;
  };
  const double start = static_cast<double>(q_max);
  double v = start;
  double h = 1.0;
  for (int iter = 0; iter < 400 && h > tol_bins; ++iter) {
    const double a = log_psd(v - h);
    const double b = log_psd(v);
    const double c = log_psd(v + h);
    if (!std::isfinite(b)) return std::nullopt;
    if (a > b || c > b) {
      v += a > c ? -h : h;
      if (std::abs(v - start) > 1.0) return std::nullopt;
      continue;
    }
    v += parabolic_offset(a, b, c) * h;
    h *= 0.5;
  }
  return v;
}

}  // namespace

std::optional<PeakEstimate> capon_estimate_frame(std::span<const double> frame,
                                                 double sample_rate_hz, FrequencyBand band,
                                                 const CaponOptions& options) {
  if (options.pad_factor == 0) throw InvalidArgument("pad factor must be >= 1");
  const auto cov = estimate_autocovariance(frame, options.order);
  if (cov.degenerate()) return std::nullopt;

  PsdEstimate psd;
  std::optional<CaponDenomCoeffs> coeffs;
  try {
    const auto lev = levinson_solve(cov);
    coeffs.emplace(denom_coeffs(gs_factors(lev.w, lev.alpha)));
    psd = capon_psd(*coeffs, options.pad_factor * frame.size(), sample_rate_hz);
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }

  const std::size_t q = peak_search(psd, band);
  PeakEstimate est{psd.frequency_hz(static_cast<double>(q)), q, 0.0, false};
  switch (options.refine) {
    case CaponRefine::none:
      break;
    case CaponRefine::quadratic:
      est = refine_quadratic(psd, q);
      break;
    case CaponRefine::polished:
      if (auto v = polish_peak(*coeffs, psd.grid_size(), q)) {
        est.offset_bins = *v - static_cast<double>(q);
        est.freq_hz = psd.frequency_hz(*v);
        est.refined = true;
      } else {
        est = refine_quadratic(psd, q);
      }
      break;
  }
  return est;
}

DenseMatrix literal_covariance(std::span<const double> frame, std::size_t m) {
  const std::size_t n = frame.size();
  if (n <= m) throw InvalidArgument("frame too short for the requested order");
  DenseMatrix r(m + 1);
  for (std::size_t t = m; t < n; ++t) {
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 0; j <= m; ++j) r(i, j) += frame[t - i] * frame[t - j];
    }
  }
  const double scale = 1.0 / static_cast<double>(n - m);
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= m; ++j) r(i, j) *= scale;
  }
  return r;
}

DenseMatrix dense_inverse(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  DenseMatrix work = a;
  DenseMatrix inv = DenseMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    }
    if (work(pivot, col) == 0.0) throw DegenerateInput("matrix is singular");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(work(col, c), work(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    }
    const double p = work(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      work(col, c) /= p;
      inv(col, c) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        work(r, c) -= f * work(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

PsdEstimate dense_capon_psd(const DenseMatrix& inverse, std::size_t grid_size,
                            double sample_rate_hz) {
  const std::size_t m = inverse.rows();
  PsdEstimate psd{std::vector<double>(grid_size), sample_rate_hz};
  std::vector<std::complex<double>> a(m);
  for (std::size_t q = 0; q < grid_size; ++q) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(q) /
                         static_cast<double>(grid_size);
    for (std::size_t k = 0; k < m; ++k) a[k] = std::polar(1.0, omega * static_cast<double>(k));
    std::complex<double> quad{0.0, 0.0};
    for (std::size_t r = 0; r < m; ++r) {
      std::complex<double> row{0.0, 0.0};
      for (std::size_t c = 0; c < m; ++c) row += inverse(r, c) * a[c];
      quad += std::conj(a[r]) * row;
    }
    if (!(quad.real() > 0.0)) {
      throw NumericalDegeneracy("Capon denominator is not positive at bin " + std::to_string(q),
                                q);
    }
    psd.values[q] = static_cast<double>(m) / quad.real();
  }
  return psd;
}

}  // namespace enf
