#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "enf/signal_io.hpp"
#include "enf/window.hpp"

namespace enf {

struct FramePlan {
  std::size_t frame_len = 0;  // N
  std::size_t shift = 0;
  std::size_t frame_count = 0;  // K
  double sample_rate_hz = 0.0;

  std::size_t frame_start(std::size_t k) const noexcept { return k * shift; }
};

// N = round(L Fs), shift = round(shift_s Fs), K = floor((len - N)/shift) + 1
// when len >= N and 0 otherwise. A trailing partial frame is dropped.
FramePlan plan_frames(std::size_t signal_len, double frame_len_s,
                      double shift_s, double sample_rate_hz);

using FrameVector = std::vector<double>;

// Samples [k*shift, k*shift + N) multiplied tap-by-tap by `window`.
FrameVector windowed_frame(std::span<const double> signal,
                           const FramePlan& plan, std::size_t k,
                           const WindowVector& window);

}  // namespace enf
