#include "enf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "enf/bandpass.hpp"
#include "enf/error.hpp"
#include "enf/framing.hpp"
#include "enf/stft.hpp"

namespace enf {

std::string_view to_string(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::capon ? "capon" : "stft";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "capon") return EstimatorKind::capon;
  if (name == "stft") return EstimatorKind::stft;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(CaponRefine refine) noexcept {
  switch (refine) {
    case CaponRefine::none: return "none";
    case CaponRefine::quadratic: return "quadratic";
    case CaponRefine::polished: return "polished";
  }
  return "unknown";
}

CaponRefine parse_capon_refine(std::string_view name) {
  if (name == "none") return CaponRefine::none;
  if (name == "quadratic") return CaponRefine::quadratic;
  if (name == "polished") return CaponRefine::polished;
  throw InvalidArgument("unknown Capon refinement '" + std::string(name) + "'");
}

RecordingMode parse_recording_mode(std::string_view name) {
  if (name == "power") return RecordingMode::power;
  if (name == "speech") return RecordingMode::speech;
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

PipelineConfig PipelineConfig::preset(RecordingMode mode) {
  PipelineConfig config;
  if (mode == RecordingMode::speech) {
    config.harmonic = 2;
    config.taps = 4801;
  }
  return config;
}

void PipelineConfig::validate() const {
  if (!(nominal_hz > 0.0)) throw InvalidArgument("nominal frequency must be positive");
  if (harmonic < 1) throw InvalidArgument("harmonic must be >= 1");
  if (!(working_rate_hz > 0.0)) throw InvalidArgument("working rate must be positive");
  if (band_center_hz() >= working_rate_hz / 2.0) {
    throw InvalidArgument("harmonic " + std::to_string(harmonic) + " of " +
                          std::to_string(nominal_hz) + " Hz is above the working Nyquist");
  }
  if (!(frame_len_s > 0.0) || !(shift_s > 0.0)) {
    throw InvalidArgument("frame length and shift must be positive");
  }
  if (skip_seconds < 0.0) throw InvalidArgument("skip must be non-negative");
  if (taps < 3 || taps % 2 == 0) throw InvalidArgument("tap count must be odd and >= 3");
  if (!(passband_hz > 0.0)) throw InvalidArgument("passband must be positive");
  if (capon_order < 1) throw InvalidArgument("Capon order must be >= 1");
  if (pad_factor < 1) throw InvalidArgument("pad factor must be >= 1");
  if (window == WindowKind::kaiser && !(kaiser_beta >= 0.0)) {
    throw InvalidArgument("Kaiser beta must be non-negative");
  }
}

FrequencyBand search_band(const PipelineConfig& config) {
  const double center = config.band_center_hz();
  const double transition = 3.3 * config.working_rate_hz / static_cast<double>(config.taps);
  const double half = config.passband_hz / 2.0 + 2.0 * transition;
  // Never look further than 1 Hz from nominal at the fundamental.
  const double envelope = static_cast<double>(config.harmonic);
  const double reach = std::min(half, envelope);
  return FrequencyBand{center - reach, center + reach};
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ENF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

int decimation_factor(double input_rate, double working_rate) {
  const double ratio = input_rate / working_rate;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw InvalidArgument("input rate " + std::to_string(input_rate) +
                          " Hz is not an integer multiple of the working rate " +
                          std::to_string(working_rate) + " Hz");
  }
  return static_cast<int>(rounded);
}

// Runs fn(k) for k in [0, count) over `threads` workers. Results are written
// by index, so the output does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

EnfTrack estimate_harmonic_track(const SampledSignal& signal, const PipelineConfig& config) {
  config.validate();
  const SampledSignal trimmed =
      config.skip_seconds > 0.0 ? signal.skip_seconds(config.skip_seconds) : signal;
  const int factor = decimation_factor(trimmed.sample_rate_hz(), config.working_rate_hz);
  const SampledSignal working = decimate(trimmed, factor);
  const double fs = working.sample_rate_hz();

  const FirFilter filter =
      design_bandpass(fs, config.band_center_hz(), config.passband_hz, config.taps);
  if (working.size() <= filter.size()) {
    throw DegenerateInput("recording is shorter than the " + std::to_string(filter.size()) +
                          "-tap band-pass filter");
  }
  const SampledSignal filtered = apply_zero_phase(filter, working);

  const FramePlan plan = plan_frames(filtered.size(), config.frame_len_s, config.shift_s, fs);
  if (plan.frame_count == 0) {
    throw DegenerateInput("no complete frame of " + std::to_string(config.frame_len_s) +
                          " s survives filtering");
  }
  const WindowVector window = make_window(
      config.window, plan.frame_len,
      config.window == WindowKind::kaiser ? std::optional<double>(config.kaiser_beta)
                                          : std::nullopt);
  const FrequencyBand band = search_band(config);
  const CaponOptions capon{config.capon_order, config.pad_factor, config.capon_refine};

  EnfTrack track;
  track.frame_len_s = config.frame_len_s;
  track.shift_s = static_cast<double>(plan.shift) / fs;
  track.harmonic = config.harmonic;
  track.nominal_hz = config.nominal_hz;
  track.entries.resize(plan.frame_count);

  const auto samples = filtered.samples();
  parallel_for(plan.frame_count, resolve_threads(config.threads), [&](std::size_t k) {
    const FrameVector frame = windowed_frame(samples, plan, k, window);
    TrackEntry& entry = track.entries[k];
    entry.frame_index = k;
    entry.time_s = filtered.origin_offset_s() + static_cast<double>(plan.frame_start(k)) / fs;
    if (config.estimator == EstimatorKind::capon) {
      const auto est = capon_estimate_frame(frame, fs, band, capon);
      entry.valid = est.has_value();
      entry.freq_hz = est ? est->freq_hz : std::nan("");
    } else {
      entry.freq_hz =
          stft_estimate_frame(frame, fs, band, config.pad_factor, config.stft_interpolate).freq_hz;
      entry.valid = true;
    }
  });
  return track;
}

EnfTrack extract_enf(const SampledSignal& signal, const PipelineConfig& config) {
  return to_fundamental(estimate_harmonic_track(signal, config));
}

EnfTrack to_fundamental(const EnfTrack& track) {
  if (track.harmonic < 1) throw InvalidArgument("harmonic must be >= 1");
  EnfTrack out = track;
  const double k = static_cast<double>(track.harmonic);
  for (auto& e : out.entries) {
    if (e.valid) e.freq_hz /= k;
  }
  out.harmonic = 1;
  return out;
}

}  // namespace enf
