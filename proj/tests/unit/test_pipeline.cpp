#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "enf/bandpass.hpp"
#include "enf/error.hpp"
#include "enf/framing.hpp"
#include "enf/matching.hpp"
#include "enf/pipeline.hpp"
#include "enf/synth.hpp"
#include "property.hpp"

using namespace enf;
namespace et = enf::testing;

namespace {

SampledSignal pure_tone(double f, double fs, double seconds, double amp = 0.5) {
  std::vector<double> x(static_cast<std::size_t>(seconds * fs));
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = amp * std::cos(2.0 * std::numbers::pi * f * t / fs + 0.7);
  return SampledSignal(std::move(x), fs);
}

bool bit_identical(const EnfTrack& a, const EnfTrack& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.entries[i];
    const auto& y = b.entries[i];
    if (x.frame_index != y.frame_index || x.valid != y.valid ||
        std::memcmp(&x.freq_hz, &y.freq_hz, sizeof(double)) != 0 ||
        std::memcmp(&x.time_s, &y.time_s, sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("to_fundamental") {
  EnfTrack t;
  t.harmonic = 3;
  t.entries = {{0, 0.0, 180.03, true}, {1, 1.0, 0.0, false}};
  const auto f = to_fundamental(t);
  CHECK(f.harmonic == 1);
  CHECK(f.entries[0].freq_hz == doctest::Approx(60.01));
  CHECK_FALSE(f.entries[1].valid);

  EnfTrack one = t;
  one.harmonic = 1;
  const auto same = to_fundamental(one);
  CHECK(same.entries[0].freq_hz == 180.03);

  EnfTrack bad = t;
  bad.harmonic = 0;
  CHECK_THROWS_AS(to_fundamental(bad), InvalidArgument);
}

TEST_CASE("presets and validation") {
  const auto power = PipelineConfig::preset(RecordingMode::power);
  CHECK(power.harmonic == 3);
  CHECK(power.taps == 1001);
  const auto speech = PipelineConfig::preset(RecordingMode::speech);
  CHECK(speech.harmonic == 2);
  CHECK(speech.taps == 4801);
  CHECK(parse_recording_mode("speech") == RecordingMode::speech);
  CHECK_THROWS_AS(parse_recording_mode("music"), InvalidArgument);
  CHECK(parse_estimator_kind("stft") == EstimatorKind::stft);
  CHECK(to_string(EstimatorKind::capon) == "capon");
  CHECK(parse_capon_refine(to_string(CaponRefine::quadratic)) == CaponRefine::quadratic);

  PipelineConfig c;
  c.harmonic = 4;  // 240 Hz above the 220.5 Hz Nyquist
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = PipelineConfig{};
  c.taps = 1000;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = PipelineConfig{};
  c.frame_len_s = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_NOTHROW(PipelineConfig{}.validate());
}

TEST_CASE("search band stays near the harmonic") {
  const auto b = search_band(PipelineConfig{});
  CHECK(b.lo_hz < 180.0 - 0.05);
  CHECK(b.hi_hz > 180.0 + 0.05);
  CHECK(b.lo_hz >= 177.0);
  CHECK(b.hi_hz <= 183.0);
}

TEST_CASE("constant 180 Hz tone maps to 60 Hz") {
  const auto signal = pure_tone(180.0, 441.0, 30.0);
  struct Combo {
    EstimatorKind est;
    WindowKind win;
  };
  for (auto [est, win] : {Combo{EstimatorKind::stft, WindowKind::parzen}, Combo{EstimatorKind::stft, WindowKind::hamming},
                          Combo{EstimatorKind::stft, WindowKind::kaiser}, Combo{EstimatorKind::stft, WindowKind::rectangular},
                          Combo{EstimatorKind::capon, WindowKind::hamming}}) {
    PipelineConfig c;
    c.estimator = est;
    c.window = win;
    CAPTURE(to_string(est));
    CAPTURE(to_string(win));
    const auto track = extract_enf(signal, c);
    REQUIRE(track.size() > 20);
    CHECK(track.harmonic == 1);
    for (const auto& e : track.entries) {
      REQUIRE(e.valid);
      CHECK(std::abs(e.freq_hz - 60.0) <= 0.01);
    }
  }
}

TEST_CASE("Capon with Parzen on a noiseless tone") {
  // The tapered autocorrelation of a pure tone is numerically rank deficient
  // (alpha ~ 1e-12): frames either fail the PD check or land off the tone.
  // A 40 dB noise floor restores the estimate.
  const auto clean = extract_enf(pure_tone(180.0, 441.0, 30.0), PipelineConfig{});
  std::size_t bad = 0;
  for (const auto& e : clean.entries) {
    if (!e.valid || std::abs(e.freq_hz - 60.0) > 0.01) ++bad;
    if (e.valid) CHECK(std::abs(e.freq_hz - 60.0) <= 0.2);
  }
  CHECK(bad > 0);

  auto noisy = pure_tone(180.0, 441.0, 30.0);
  std::vector<double> x(noisy.samples().begin(), noisy.samples().end());
  std::mt19937_64 rng(92);
  std::normal_distribution<double> noise(0.0, std::sqrt(0.125e-4));
  for (auto& v : x) v += noise(rng);
  for (const auto& e : extract_enf(SampledSignal(x, 441.0), PipelineConfig{}).entries) {
    REQUIRE(e.valid);
    CHECK(std::abs(e.freq_hz - 60.0) <= 0.01);
  }
}

TEST_CASE("harmonic one passes the per-frame estimates through") {
  const auto signal = pure_tone(60.02, 441.0, 20.0);
  PipelineConfig c;
  c.harmonic = 1;
  c.threads = 1;
  const auto raw = estimate_harmonic_track(signal, c);
  const auto out = extract_enf(signal, c);
  CHECK(bit_identical(raw, out));

  // Recompute one frame by hand.
  const auto filter = design_bandpass(441.0, 60.0, c.passband_hz, c.taps);
  const auto filtered = apply_zero_phase(filter, signal);
  const auto plan = plan_frames(filtered.size(), 1.0, 1.0, 441.0);
  REQUIRE(plan.frame_count == out.size());
  const auto win = make_window(WindowKind::parzen, plan.frame_len);
  const std::size_t k = 4;
  const auto frame = windowed_frame(filtered.samples(), plan, k, win);
  const auto e = capon_estimate_frame(frame, 441.0, search_band(c));
  REQUIRE(e.has_value());
  CHECK(e->freq_hz == out.entries[k].freq_hz);
  CHECK(out.entries[k].time_s == doctest::Approx(filtered.origin_offset_s() + 4.0));
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(extract_enf(pure_tone(180.0, 441.0, 2.0), PipelineConfig{}), DegenerateInput);
  // Silence survives as a track of gaps.
  const auto silent = extract_enf(SampledSignal(std::vector<double>(441 * 10, 0.0), 441.0), PipelineConfig{});
  CHECK(silent.size() > 0);
  CHECK(silent.valid_count() == 0);
}

TEST_CASE("short fixture tracks the ground truth") {
  synth::PowerSignalSpec spec;
  spec.duration_s = 240.0;
  const auto fx = synth::make_power_fixture(spec);
  for (auto est : {EstimatorKind::capon, EstimatorKind::stft}) {
    PipelineConfig c;
    c.estimator = est;
    const auto track = extract_enf(fx.signal, c);
    const auto truth = fx.truth_for(track);
    CHECK(correlation(track.frequencies(), truth, true) >= 0.9);
    for (const auto& e : track.entries) {
      if (e.valid) CHECK(std::abs(e.freq_hz - 60.0) <= 1.0);
    }
  }
}

TEST_CASE("skip seconds drops leading frames") {
  synth::PowerSignalSpec spec;
  spec.duration_s = 40.0;
  const auto fx = synth::make_power_fixture(spec);
  PipelineConfig c;
  const auto full = extract_enf(fx.signal, c);
  c.skip_seconds = 10.0;
  const auto skipped = extract_enf(fx.signal, c);
  CHECK(skipped.size() == full.size() - 10);
  CHECK(skipped.entries[0].time_s == doctest::Approx(full.entries[10].time_s));
  CHECK(skipped.entries[0].freq_hz == doctest::Approx(full.entries[10].freq_hz).epsilon(1e-9));
}

TEST_CASE("property: output is identical across thread counts") {
  et::for_all(et::kPropertyCases, 91, [](auto& rng, std::size_t i) {
    synth::PowerSignalSpec spec;
    spec.duration_s = static_cast<double>(et::uniform_int(rng, 3, 9));
    spec.seed = 1000 + i;
    spec.snr_db = et::uniform(rng, 0.0, 30.0);
    const auto fx = synth::make_power_fixture(spec);
    PipelineConfig c;
    c.taps = 2 * et::uniform_int(rng, 20, 200) + 1;
    c.estimator = i % 3 == 0 ? EstimatorKind::stft : EstimatorKind::capon;
    c.window = static_cast<WindowKind>(et::uniform_int(rng, 0, 3));
    c.frame_len_s = et::uniform(rng, 0.5, 1.5);
    c.shift_s = et::uniform(rng, 0.3, 1.0);
    c.threads = 1;
    EnfTrack serial;
    try {
      serial = extract_enf(fx.signal, c);
    } catch (const DegenerateInput&) {
      return;
    }
    c.threads = static_cast<unsigned>(et::uniform_int(rng, 2, 8));
    CAPTURE(c.threads);
    REQUIRE(bit_identical(serial, extract_enf(fx.signal, c)));
  });
}

TEST_CASE("runtime grows linearly with duration") {
  std::vector<double> per_minute;
  for (double minutes : {5.0, 10.0, 20.0}) {
    synth::PowerSignalSpec spec;
    spec.duration_s = 60.0 * minutes;
    const auto fx = synth::make_power_fixture(spec);
    PipelineConfig c;
    c.threads = 1;
    std::vector<double> runs;
    for (int r = 0; r < 3; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto track = extract_enf(fx.signal, c);
      runs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      REQUIRE(track.size() > 0);
    }
    std::sort(runs.begin(), runs.end());
    per_minute.push_back(runs[1] / minutes);
  }
  const auto [lo, hi] = std::minmax_element(per_minute.begin(), per_minute.end());
  CAPTURE(per_minute[0]);
  CAPTURE(per_minute[1]);
  CAPTURE(per_minute[2]);
  CHECK(*hi <= 1.2 * *lo);
}
