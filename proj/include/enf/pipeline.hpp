#pragma once

#include <cstddef>
#include <string_view>

#include "enf/capon.hpp"
#include "enf/signal_io.hpp"
#include "enf/track.hpp"
#include "enf/window.hpp"

namespace enf {

enum class EstimatorKind { capon, stft };
enum class RecordingMode { power, speech };

std::string_view to_string(EstimatorKind kind) noexcept;
EstimatorKind parse_estimator_kind(std::string_view name);
std::string_view to_string(CaponRefine refine) noexcept;
CaponRefine parse_capon_refine(std::string_view name);

struct PipelineConfig {
  double nominal_hz = 60.0;
  int harmonic = 3;
  double working_rate_hz = 441.0;
  double skip_seconds = 0.0;
  double frame_len_s = 1.0;
  double shift_s = 1.0;
  WindowKind window = WindowKind::parzen;
  double kaiser_beta = kDefaultKaiserBeta;
  EstimatorKind estimator = EstimatorKind::capon;
  std::size_t taps = 1001;
  double passband_hz = 0.1;
  std::size_t capon_order = kDefaultCaponOrder;
  std::size_t pad_factor = kDefaultPadFactor;
  CaponRefine capon_refine = CaponRefine::polished;
  bool stft_interpolate = true;
  // 0 picks ENF_THREADS or the hardware concurrency.
  unsigned threads = 0;

  // Power mains: 3rd harmonic, 1001 taps. Speech: 2nd harmonic, 4801 taps.
  static PipelineConfig preset(RecordingMode mode);

  double band_center_hz() const noexcept { return nominal_hz * harmonic; }
  // Throws InvalidArgument on inconsistent settings.
  void validate() const;
};

RecordingMode parse_recording_mode(std::string_view name);

// Per-frame frequencies at the harmonic, before division. Frames whose
// estimator reports a degenerate covariance come back with valid == false.
EnfTrack estimate_harmonic_track(const SampledSignal& signal,
                                 const PipelineConfig& config);

// Skip, decimate to the working rate, band-pass at the harmonic, frame,
// window, estimate, and divide by the harmonic. Throws DegenerateInput when
// no full frame survives filtering.
EnfTrack extract_enf(const SampledSignal& signal, const PipelineConfig& config);

// Divides every valid frequency by the harmonic and sets harmonic to 1.
EnfTrack to_fundamental(const EnfTrack& track);

// Peak-search band at the working rate: the passband widened by two
// transition widths on each side.
FrequencyBand search_band(const PipelineConfig& config);

unsigned resolve_threads(unsigned requested);

}  // namespace enf
