#pragma once

#include <cstdint>
#include <vector>

#include "enf/signal_io.hpp"
#include "enf/track.hpp"

namespace enf::synth {

// Seeded stand-in for a mains recording. The grid frequency is
// nominal + walk(t), where walk is a reflected Gaussian random walk with one
// knot per second, bounded by +/- walk_bound_hz and linearly interpolated
// between knots. The recording contains the listed harmonics of that
// frequency plus white Gaussian noise at snr_db relative to the power of the
// first listed harmonic.
struct PowerSignalSpec {
  double duration_s = 1800.0;
  double sample_rate_hz = 441.0;
  double nominal_hz = 60.0;
  double walk_bound_hz = 0.02;
  double walk_step_hz = 0.002;  // std of the per-second increment
  std::vector<int> harmonics{3};
  std::vector<double> amplitudes{1.0};
  double snr_db = 10.0;
  std::uint64_t seed = 2026;
};

class GridFrequency {
 public:
  GridFrequency(double nominal_hz, std::vector<double> knots_hz);

  double nominal_hz() const noexcept { return nominal_hz_; }
  double at(double t) const noexcept;
  // Exact mean of the instantaneous frequency over [t0, t1].
  double mean(double t0, double t1) const noexcept;
  // Exact integral of the instantaneous frequency from 0 to t (cycles).
  double cycles(double t) const noexcept;
  double duration_s() const noexcept {
    return static_cast<double>(knots_.size() - 1);
  }

 private:
  double nominal_hz_;
  std::vector<double> knots_;  // deviation from nominal at t = 0, 1, 2, ...
  std::vector<double> cumulative_;  // walk integral up to each knot
};

struct PowerFixture {
  SampledSignal signal;
  GridFrequency truth;

  // Ground truth aligned to a track: mean fundamental frequency over each
  // entry's frame [time_s, time_s + frame_len_s).
  std::vector<double> truth_for(const EnfTrack& track) const;
  // One value per whole second from t = 0, as a grid logger would record.
  EnfTrack reference_log() const;
};

PowerFixture make_power_fixture(const PowerSignalSpec& spec);

}  // namespace enf::synth
