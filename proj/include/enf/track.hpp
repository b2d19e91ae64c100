#pragma once

#include <cstddef>
#include <vector>

namespace enf {

struct TrackEntry {
  std::size_t frame_index = 0;
  double time_s = 0.0;  // frame start, absolute recording time
  double freq_hz = 0.0;
  bool valid = true;
};

struct EnfTrack {
  std::vector<TrackEntry> entries;
  double frame_len_s = 1.0;
  double shift_s = 1.0;
  int harmonic = 1;
  double nominal_hz = 60.0;

  std::size_t size() const noexcept { return entries.size(); }

  // Frequencies with gaps as NaN, for the matching routines.
  std::vector<double> frequencies() const;
  std::size_t valid_count() const noexcept;
};

}  // namespace enf
