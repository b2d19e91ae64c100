#include "enf/stft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "enf/error.hpp"
#include "enf/fft.hpp"

namespace enf {

PsdEstimate periodogram(std::span<const double> frame, double sample_rate_hz,
                        std::size_t pad_factor) {
  if (frame.empty()) throw InvalidArgument("periodogram of an empty frame");
  if (pad_factor == 0) throw InvalidArgument("pad factor must be >= 1");
  const std::size_t n = frame.size();
  const std::size_t q = pad_factor * n;
  const auto spectrum = fft::real_forward(frame, q);

  PsdEstimate psd{std::vector<double>(q), sample_rate_hz};
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    psd.values[i] = std::norm(spectrum[i]) * scale;
  }
  for (std::size_t i = spectrum.size(); i < q; ++i) psd.values[i] = psd.values[q - i];
  return psd;
}

std::size_t peak_search(const PsdEstimate& psd, FrequencyBand band) {
  const std::size_t q = psd.grid_size();
  if (q < 2) throw InvalidArgument("PSD grid too small");
  const std::size_t last = q / 2 - 1;
  const double bin = psd.bin_hz();
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(band.lo_hz / bin)));
  const auto hi_raw = std::floor(band.hi_hz / bin);
  if (!(band.hi_hz >= band.lo_hz) || hi_raw < 0.0 || lo > last) {
    throw InvalidArgument("search band contains no grid points");
  }
  const std::size_t hi = std::min(last, static_cast<std::size_t>(hi_raw));
  if (lo > hi) throw InvalidArgument("search band contains no grid points");

  std::size_t best = lo;
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (psd.values[i] > psd.values[best]) best = i;
  }
  return best;
}

double parabolic_offset(double a, double b, double c) noexcept {
  const double denom = a - 2.0 * b + c;
  if (denom == 0.0 || !std::isfinite(denom)) return 0.0;
  const double d = 0.5 * (a - c) / denom;
  if (!std::isfinite(d)) return 0.0;
  return std::clamp(d, -0.5, 0.5);
}

PeakEstimate refine_quadratic(const PsdEstimate& psd, std::size_t q_max) {
  const std::size_t q = psd.grid_size();
  if (q < 4 || q_max < 1 || q_max + 2 > q / 2) {
    throw InvalidArgument("peak bin " + std::to_string(q_max) +
                          " has no neighbours inside [0, Q/2 - 1]");
  }
  PeakEstimate est;
  est.bin = q_max;
  est.freq_hz = psd.frequency_hz(static_cast<double>(q_max));
  const double lo = psd.values[q_max - 1];
  const double mid = psd.values[q_max];
  const double hi = psd.values[q_max + 1];
  if (!(lo > 0.0) || !(mid > 0.0) || !(hi > 0.0)) return est;
  est.offset_bins = parabolic_offset(std::log(lo), std::log(mid), std::log(hi));
  est.freq_hz = psd.frequency_hz(static_cast<double>(q_max) + est.offset_bins);
  est.refined = true;
  return est;
}

PeakEstimate stft_estimate_frame(std::span<const double> frame, double sample_rate_hz,
                                 FrequencyBand band, std::size_t pad_factor,
                                 bool interpolate) {
  const auto psd = periodogram(frame, sample_rate_hz, pad_factor);
  const std::size_t q = peak_search(psd, band);
  if (!interpolate) {
    return PeakEstimate{psd.frequency_hz(static_cast<double>(q)), q, 0.0, false};
  }
  return refine_quadratic(psd, q);
}

}  // namespace enf
