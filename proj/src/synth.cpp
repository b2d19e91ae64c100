#include "enf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "enf/error.hpp"

namespace enf::synth {
namespace {

// Integral of the piecewise-linear walk from knot j to j + tau, tau in [0, 1].
double partial_integral(const std::vector<double>& knots, std::size_t j, double tau) {
  const double a = knots[j];
  const double b = knots[std::min(j + 1, knots.size() - 1)];
  return a * tau + 0.5 * (b - a) * tau * tau;
}

}  // namespace

GridFrequency::GridFrequency(double nominal_hz, std::vector<double> knots_hz)
    : nominal_hz_(nominal_hz), knots_(std::move(knots_hz)) {
  if (knots_.size() < 2) throw InvalidArgument("grid frequency needs at least two knots");
  cumulative_.assign(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (knots_[i - 1] + knots_[i]);
  }
}

double GridFrequency::at(double t) const noexcept {
  const double last = duration_s();
  t = std::clamp(t, 0.0, last);
  const auto j = std::min(static_cast<std::size_t>(t), knots_.size() - 2);
  const double tau = t - static_cast<double>(j);
  return nominal_hz_ + knots_[j] + (knots_[j + 1] - knots_[j]) * tau;
}

double GridFrequency::cycles(double t) const noexcept {
  const double last = duration_s();
  const double tc = std::clamp(t, 0.0, last);
  const auto j = std::min(static_cast<std::size_t>(tc), knots_.size() - 2);
  const double walk = cumulative_[j] + partial_integral(knots_, j, tc - static_cast<double>(j));
  return nominal_hz_ * t + walk;
}

double GridFrequency::mean(double t0, double t1) const noexcept {
  if (!(t1 > t0)) return at(t0);
  return (cycles(t1) - cycles(t0)) / (t1 - t0);
}

std::vector<double> PowerFixture::truth_for(const EnfTrack& track) const {
  std::vector<double> out;
  out.reserve(track.entries.size());
  for (const auto& e : track.entries) out.push_back(truth.mean(e.time_s, e.time_s + track.frame_len_s));
  return out;
}

EnfTrack PowerFixture::reference_log() const {
  EnfTrack log;
  log.nominal_hz = truth.nominal_hz();
  const auto seconds = static_cast<std::size_t>(std::floor(truth.duration_s()));
  log.entries.reserve(seconds);
  for (std::size_t j = 0; j < seconds; ++j) {
    const double t = static_cast<double>(j);
    log.entries.push_back(TrackEntry{j, t, truth.mean(t, t + 1.0), true});
  }
  return log;
}

PowerFixture make_power_fixture(const PowerSignalSpec& spec) {
  if (!(spec.duration_s >= 1.0)) throw InvalidArgument("fixture must last at least 1 s");
  if (!(spec.sample_rate_hz > 0.0)) throw InvalidArgument("sample rate must be positive");
  if (spec.harmonics.empty() || spec.harmonics.size() != spec.amplitudes.size()) {
    throw InvalidArgument("harmonics and amplitudes must be non-empty and the same length");
  }
  if (!(spec.walk_bound_hz >= 0.0) || !(spec.walk_step_hz >= 0.0)) {
    throw InvalidArgument("walk bound and step must be non-negative");
  }
  for (int h : spec.harmonics) {
    if (h < 1 || h * spec.nominal_hz >= spec.sample_rate_hz / 2.0) {
      throw InvalidArgument("harmonic outside (0, Nyquist)");
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  const auto seconds = static_cast<std::size_t>(std::ceil(spec.duration_s));
  std::vector<double> knots(seconds + 1, 0.0);
  const double bound = spec.walk_bound_hz;
  for (std::size_t j = 1; j <= seconds; ++j) {
    double v = knots[j - 1] + spec.walk_step_hz * step(rng);
    // Reflect at the bounds until the value is back inside.
    while (bound > 0.0 && std::abs(v) > bound) v = std::copysign(2.0 * bound, v) - v;
    if (bound == 0.0) v = 0.0;
    knots[j] = v;
  }
  GridFrequency truth(spec.nominal_hz, std::move(knots));

  std::vector<double> phases;
  for (std::size_t i = 0; i < spec.harmonics.size(); ++i) phases.push_back(phase(rng));

  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
  const double a0 = spec.amplitudes.front();
  const double noise_sigma = std::sqrt(0.5 * a0 * a0 / std::pow(10.0, spec.snr_db / 10.0));
  std::normal_distribution<double> noise(0.0, noise_sigma);

  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate_hz;
    const double cyc = truth.cycles(t);
    double x = 0.0;
    for (std::size_t h = 0; h < spec.harmonics.size(); ++h) {
      // Reduce the cycle count before scaling to keep the phase accurate.
      const double c = static_cast<double>(spec.harmonics[h]) * cyc;
      x += spec.amplitudes[h] *
           std::cos(2.0 * std::numbers::pi * (c - std::floor(c)) + phases[h]);
    }
    samples[i] = x + (noise_sigma > 0.0 ? noise(rng) : 0.0);
  }
  return PowerFixture{SampledSignal(std::move(samples), spec.sample_rate_hz), std::move(truth)};
}

}  // namespace enf::synth
