#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "enf/signal_io.hpp"

namespace enf {

// Odd-length linear-phase FIR. center_hz and passband_hz describe the band
// the filter was designed for (a low-pass has center 0).
struct FirFilter {
  std::vector<double> coeffs;
  double center_hz = 0.0;
  double passband_hz = 0.0;
  double sample_rate_hz = 0.0;

  std::size_t size() const noexcept { return coeffs.size(); }
  std::size_t group_delay() const noexcept { return (coeffs.size() - 1) / 2; }

  // H(f) = sum_k h[k] exp(-j 2 pi f k / Fs), by direct summation.
  std::complex<double> response(double freq_hz) const;

  // Approximate transition width of a Hamming-window design, 3.3 Fs / C.
  double transition_width_hz() const noexcept;
};

// Hamming-window band-pass with edges center +/- passband/2, scaled so that
// |H(center)| = 1.
FirFilter design_bandpass(double sample_rate_hz, double center_hz,
                          double passband_hz, std::size_t taps);

// Hamming-window low-pass with unit DC gain.
FirFilter design_lowpass(double sample_rate_hz, double cutoff_hz,
                         std::size_t taps);

// One-pass convolution with the group delay removed. Output sample t lines up
// with input sample t + (C-1)/2; (C-1)/2 samples are lost at each end and the
// origin offset moves forward by (C-1)/2 / Fs.
SampledSignal apply_zero_phase(const FirFilter& filter,
                               const SampledSignal& signal);

}  // namespace enf
