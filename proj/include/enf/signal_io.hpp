#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "enf/track.hpp"

namespace enf {

// Uniformly sampled real series. origin_offset_s is the time of samples()[0]
// relative to the start of the original recording.
class SampledSignal {
 public:
  SampledSignal(std::vector<double> samples, double sample_rate_hz,
                double origin_offset_s = 0.0);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double origin_offset_s() const noexcept { return origin_offset_s_; }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  // Drops the first `seconds` of signal and advances the origin.
  SampledSignal skip_seconds(double seconds) const;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
  double origin_offset_s_;
};

// PCM 16-bit WAV, mono or stereo; stereo is averaged to mono and samples are
// scaled by 1/32768.
SampledSignal read_wav(const std::filesystem::path& path);

// Mono PCM16 writer. Samples are clipped to [-1, 32767/32768].
void write_wav(const SampledSignal& signal, const std::filesystem::path& path);

// Anti-aliased integer decimation. A Hamming-window low-pass with
// 10*factor + 1 taps and cutoff 0.45 * (rate / factor) is evaluated only at
// the retained samples. Outputs whose filter support would leave the input
// are dropped, and origin_offset_s is advanced so that output sample j sits
// at the same absolute time as the input sample it was computed around.
// factor == 1 returns the input unchanged.
SampledSignal decimate(const SampledSignal& signal, int factor);

// Number of taps decimate() uses for a given factor.
std::size_t decimation_filter_length(int factor);

enum class TrackFormat { csv, json };

void write_track(const EnfTrack& track, const std::filesystem::path& path,
                 TrackFormat format);

// Format is chosen from the extension (.json, anything else is CSV).
EnfTrack read_track(const std::filesystem::path& path);

}  // namespace enf
