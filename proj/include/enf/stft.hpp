#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace enf {

// Power on the grid omega_q = 2 pi q / Q, q = 0..Q-1.
struct PsdEstimate {
  std::vector<double> values;
  double sample_rate_hz = 0.0;

  std::size_t grid_size() const noexcept { return values.size(); }
  double bin_hz() const noexcept {
    return sample_rate_hz / static_cast<double>(values.size());
  }
  double frequency_hz(double q) const noexcept { return q * bin_hz(); }
};

struct FrequencyBand {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

struct PeakEstimate {
  double freq_hz = 0.0;
  std::size_t bin = 0;
  double offset_bins = 0.0;
  // False when the three-point fit could not be used and freq_hz is the bin
  // frequency.
  bool refined = false;
};

inline constexpr std::size_t kDefaultPadFactor = 4;

// |DFT(frame zero-padded to pad_factor * N)|^2 / N over the full grid.
PsdEstimate periodogram(std::span<const double> frame, double sample_rate_hz,
                        std::size_t pad_factor = kDefaultPadFactor);

// Index of the largest value among bins whose frequency lies in `band`,
// searching q in [0, Q/2 - 1]. Ties resolve to the lowest index.
std::size_t peak_search(const PsdEstimate& psd, FrequencyBand band);

// Vertex offset of the parabola through (-1, a), (0, b), (1, c), clamped to
// [-0.5, 0.5]; a flat top (a - 2b + c == 0) gives 0.
double parabolic_offset(double a, double b, double c) noexcept;

// Three-point parabolic refinement on log power around q_max. Falls back to
// the bin frequency (refined == false) when a fit point has zero power.
PeakEstimate refine_quadratic(const PsdEstimate& psd, std::size_t q_max);

// Periodogram, in-band peak and quadratic refinement of one windowed frame.
PeakEstimate stft_estimate_frame(std::span<const double> frame,
                                 double sample_rate_hz, FrequencyBand band,
                                 std::size_t pad_factor = kDefaultPadFactor,
                                 bool interpolate = true);

}  // namespace enf
