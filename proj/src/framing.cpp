#include "enf/framing.hpp"

#include <cmath>
#include <string>

#include "enf/error.hpp"

namespace enf {

FramePlan plan_frames(std::size_t signal_len, double frame_len_s, double shift_s,
                      double sample_rate_hz) {
  if (!(frame_len_s > 0.0)) throw InvalidArgument("frame length must be positive");
  if (!(shift_s > 0.0)) throw InvalidArgument("frame shift must be positive");
  if (!(sample_rate_hz > 0.0)) throw InvalidArgument("sample rate must be positive");

  FramePlan plan;
  plan.sample_rate_hz = sample_rate_hz;
  plan.frame_len = static_cast<std::size_t>(std::llround(frame_len_s * sample_rate_hz));
  plan.shift = static_cast<std::size_t>(std::llround(shift_s * sample_rate_hz));
  if (plan.frame_len == 0 || plan.shift == 0) {
    throw InvalidArgument("frame length and shift must each cover at least one sample");
  }
  plan.frame_count =
      signal_len >= plan.frame_len ? (signal_len - plan.frame_len) / plan.shift + 1 : 0;
  return plan;
}

FrameVector windowed_frame(std::span<const double> signal, const FramePlan& plan,
                           std::size_t k, const WindowVector& window) {
  if (k >= plan.frame_count) {
    throw InvalidArgument("frame " + std::to_string(k) + " out of range (K = " +
                          std::to_string(plan.frame_count) + ")");
  }
  if (window.size() != plan.frame_len) {
    throw InvalidArgument("window length " + std::to_string(window.size()) +
                          " does not match frame length " + std::to_string(plan.frame_len));
  }
  const std::size_t start = plan.frame_start(k);
  if (start + plan.frame_len > signal.size()) {
    throw InvalidArgument("frame plan does not fit the signal");
  }
  FrameVector frame(plan.frame_len);
  const auto taps = window.taps();
  for (std::size_t i = 0; i < plan.frame_len; ++i) frame[i] = signal[start + i] * taps[i];
  return frame;
}

}  // namespace enf
