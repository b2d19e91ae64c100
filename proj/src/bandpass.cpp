#include "enf/bandpass.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "enf/error.hpp"
#include "enf/window.hpp"

namespace enf {
namespace {

// Ideal low-pass impulse response 2 fc sinc(2 fc t) at normalised cutoff fc
// (cycles per sample).
double ideal_lowpass(double fc, double t) {
  if (t == 0.0) return 2.0 * fc;
  const double x = 2.0 * std::numbers::pi * fc * t;
  return std::sin(x) / (std::numbers::pi * t);
}

void require_odd_taps(std::size_t taps) {
  if (taps < 3 || taps % 2 == 0) {
    throw InvalidArgument("FIR length must be odd and >= 3, got " + std::to_string(taps));
  }
}

}  // namespace

std::complex<double> FirFilter::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    acc += coeffs[k] * std::polar(1.0, -w * static_cast<double>(k));
  }
  return acc;
}

double FirFilter::transition_width_hz() const noexcept {
  return 3.3 * sample_rate_hz / static_cast<double>(coeffs.size());
}

FirFilter design_bandpass(double sample_rate_hz, double center_hz,
                          double passband_hz, std::size_t taps) {
  require_odd_taps(taps);
  if (!(sample_rate_hz > 0.0)) throw InvalidArgument("sample rate must be positive");
  if (!(passband_hz > 0.0)) throw InvalidArgument("passband width must be positive");
  const double nyquist = sample_rate_hz / 2.0;
  const double lo = center_hz - passband_hz / 2.0;
  const double hi = center_hz + passband_hz / 2.0;
  if (!(lo > 0.0) || !(hi < nyquist)) {
    throw InvalidArgument("band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] Hz is outside (0, " + std::to_string(nyquist) + ") Hz");
  }

  const auto window = make_window(WindowKind::hamming, taps);
  const double mid = static_cast<double>(taps - 1) / 2.0;
  const double f1 = lo / sample_rate_hz;
  const double f2 = hi / sample_rate_hz;

  FirFilter filter{std::vector<double>(taps), center_hz, passband_hz, sample_rate_hz};
  for (std::size_t k = 0; k < taps; ++k) {
    const double t = static_cast<double>(k) - mid;
    filter.coeffs[k] = window[k] * (ideal_lowpass(f2, t) - ideal_lowpass(f1, t));
  }
  // The passband is far narrower than the window's main lobe, so the raw
  // design has a centre gain well below one.
  const double gain = std::abs(filter.response(center_hz));
  if (!(gain > 0.0)) throw DegenerateInput("band-pass design has zero centre gain");
  for (double& c : filter.coeffs) c /= gain;
  for (std::size_t k = 0; k < taps / 2; ++k) filter.coeffs[taps - 1 - k] = filter.coeffs[k];
  return filter;
}

FirFilter design_lowpass(double sample_rate_hz, double cutoff_hz, std::size_t taps) {
  require_odd_taps(taps);
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw InvalidArgument("low-pass cutoff must lie in (0, Nyquist)");
  }
  const auto window = make_window(WindowKind::hamming, taps);
  const double mid = static_cast<double>(taps - 1) / 2.0;
  const double fc = cutoff_hz / sample_rate_hz;

  FirFilter filter{std::vector<double>(taps), 0.0, cutoff_hz, sample_rate_hz};
  double sum = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    filter.coeffs[k] = window[k] * ideal_lowpass(fc, static_cast<double>(k) - mid);
    sum += filter.coeffs[k];
  }
  for (double& c : filter.coeffs) c /= sum;
  for (std::size_t k = 0; k < taps / 2; ++k) filter.coeffs[taps - 1 - k] = filter.coeffs[k];
  return filter;
}

SampledSignal apply_zero_phase(const FirFilter& filter, const SampledSignal& signal) {
  const std::size_t taps = filter.size();
  const std::size_t n = signal.size();
  if (n <= taps) {
    throw InvalidArgument("signal of " + std::to_string(n) + " samples is shorter than the " +
                          std::to_string(taps) + "-tap filter");
  }
  const auto x = signal.samples();
  const auto& h = filter.coeffs;
  const std::size_t out_len = n - (taps - 1);
  std::vector<double> y(out_len);
  for (std::size_t t = 0; t < out_len; ++t) {
    // y[t] = sum_k h[k] x[t + C - 1 - k], centred on x[t + (C-1)/2]
    const double* xp = x.data() + t + taps - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc += h[k] * xp[-static_cast<std::ptrdiff_t>(k)];
    y[t] = acc;
  }
  const double delay_s = static_cast<double>(filter.group_delay()) / signal.sample_rate_hz();
  return SampledSignal(std::move(y), signal.sample_rate_hz(), signal.origin_offset_s() + delay_s);
}

}  // namespace enf
