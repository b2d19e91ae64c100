#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "enf/bandpass.hpp"
#include "enf/error.hpp"
#include "property.hpp"

using namespace enf;

namespace {

// |H(f)| by direct summation, written out independently of FirFilter::response.
double magnitude(const std::vector<double>& h, double f, double fs) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double ph = 2.0 * std::numbers::pi * f * static_cast<double>(k) / fs;
    re += h[k] * std::cos(ph);
    im -= h[k] * std::sin(ph);
  }
  return std::hypot(re, im);
}

std::vector<double> cosine(double f, double fs, std::size_t n, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2.0 * std::numbers::pi * f * i / fs + phase);
  return x;
}

double rms(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace

TEST_CASE("third-harmonic power filter has unit gain at 180 Hz") {
  const auto f = design_bandpass(441.0, 180.0, 0.1, 1001);
  CHECK(f.size() == 1001);
  const double g = magnitude(f.coeffs, 180.0, 441.0);
  CHECK(g >= 0.9);
  CHECK(g <= 1.1);
  CHECK(std::abs(f.response(180.0)) == doctest::Approx(g).epsilon(1e-12));
}

TEST_CASE("band-pass designs reject DC") {
  for (std::size_t taps : {101U, 1001U, 4801U}) {
    for (double center : {60.0, 120.0, 180.0}) {
      const auto f = design_bandpass(441.0, center, 0.1, taps);
      CAPTURE(taps);
      CAPTURE(center);
      CHECK(magnitude(f.coeffs, 0.0, 441.0) <= 0.01);
    }
  }
}

TEST_CASE("three-tap wide band filter is symmetric") {
  const auto f = design_bandpass(441.0, 110.0, 150.0, 3);
  REQUIRE(f.size() == 3);
  CHECK(std::abs(f.coeffs[0] - f.coeffs[2]) <= 1e-12);
}

TEST_CASE("band-pass design errors") {
  CHECK_THROWS_AS(design_bandpass(441.0, 180.0, 0.1, 1000), InvalidArgument);
  CHECK_THROWS_AS(design_bandpass(441.0, 180.0, 0.1, 1), InvalidArgument);
  CHECK_THROWS_AS(design_bandpass(441.0, 220.5, 0.1, 101), InvalidArgument);
  CHECK_THROWS_AS(design_bandpass(441.0, 0.01, 0.1, 101), InvalidArgument);
  CHECK_THROWS_AS(design_bandpass(441.0, 180.0, 0.0, 101), InvalidArgument);
}

TEST_CASE("in-band sinusoid passes with zero phase shift") {
  const double fs = 441.0;
  const auto f = design_bandpass(fs, 180.0, 0.1, 1001);
  const auto x = cosine(180.0, fs, 441 * 20, 0.3);
  const SampledSignal in(x, fs);
  const auto y = apply_zero_phase(f, in);
  const std::size_t c = f.group_delay();
  REQUIRE(y.size() == x.size() - 1000);
  CHECK(y.origin_offset_s() == doctest::Approx(c / fs));

  // Amplitude: the aligned output equals the input tone up to the design gain.
  double worst = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) worst = std::max(worst, std::abs(y.samples()[t] - x[t + c]));
  CHECK(worst <= 1e-6);

  // Cross-correlation peaks at lag 0 over half a period either side.
  int best = 0;
  double best_val = -1e300;
  for (int lag = -1; lag <= 1; ++lag) {
    double acc = 0.0;
    for (std::size_t t = 2; t + 2 < y.size(); ++t) {
      acc += y.samples()[t] * x[static_cast<std::size_t>(static_cast<long>(t + c) + lag)];
    }
    if (acc > best_val) {
      best_val = acc;
      best = lag;
    }
  }
  CHECK(best == 0);
}

TEST_CASE("tone 20 Hz from a 0.1 Hz band is suppressed below 1% RMS") {
  const double fs = 441.0;
  const auto f = design_bandpass(fs, 180.0, 0.1, 1001);
  const auto x = cosine(160.0, fs, 441 * 20);
  const auto y = apply_zero_phase(f, SampledSignal(x, fs));
  CHECK(rms(y.samples()) <= 0.01 * rms(x));
}

TEST_CASE("unit impulse returns the coefficients") {
  const auto f = design_bandpass(441.0, 100.0, 5.0, 31);
  std::vector<double> x(200, 0.0);
  const std::size_t at = 90;
  x[at] = 1.0;
  const auto y = apply_zero_phase(f, SampledSignal(x, 441.0));
  // Output t is centred on input t + 15; the impulse shows up reversed, which
  // for symmetric taps is the coefficients themselves.
  for (std::size_t k = 0; k < f.size(); ++k) {
    CHECK(y.samples()[at - 30 + k] == doctest::Approx(f.coeffs[k]));
  }
}

TEST_CASE("apply_zero_phase rejects short signals") {
  const auto f = design_bandpass(441.0, 100.0, 5.0, 31);
  CHECK_THROWS_AS(apply_zero_phase(f, SampledSignal(std::vector<double>(31, 1.0), 441.0)),
                  InvalidArgument);
}

TEST_CASE("property: filtering is linear") {
  enf::testing::for_all(enf::testing::kPropertyCases, 21, [](auto& rng, std::size_t) {
    const std::size_t taps = 2 * enf::testing::uniform_int(rng, 1, 50) + 1;
    const double center = enf::testing::uniform(rng, 20.0, 200.0);
    const auto f = design_bandpass(441.0, center, enf::testing::uniform(rng, 0.1, 10.0), taps);
    const std::size_t n = taps + enf::testing::uniform_int(rng, 1, 200);
    std::vector<double> x(n), y(n), mix(n);
    const double a = enf::testing::uniform(rng, -3.0, 3.0);
    const double b = enf::testing::uniform(rng, -3.0, 3.0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = enf::testing::uniform(rng, -1.0, 1.0);
      y[i] = enf::testing::uniform(rng, -1.0, 1.0);
      mix[i] = a * x[i] + b * y[i];
    }
    const auto fx = apply_zero_phase(f, SampledSignal(x, 441.0));
    const auto fy = apply_zero_phase(f, SampledSignal(y, 441.0));
    const auto fm = apply_zero_phase(f, SampledSignal(mix, 441.0));
    for (std::size_t t = 0; t < fm.size(); ++t) {
      REQUIRE(std::abs(fm.samples()[t] - (a * fx.samples()[t] + b * fy.samples()[t])) <= 1e-10);
    }
  });
}

TEST_CASE("property: coefficients are symmetric and the centre phase is zero") {
  enf::testing::for_all(enf::testing::kPropertyCases, 22, [](auto& rng, std::size_t) {
    const std::size_t taps = 2 * enf::testing::uniform_int(rng, 1, 400) + 1;
    const double center = enf::testing::uniform(rng, 10.0, 210.0);
    const double width = enf::testing::uniform(rng, 0.05, 5.0);
    if (center - width / 2 <= 0.0 || center + width / 2 >= 220.5) return;
    const auto f = design_bandpass(441.0, center, width, taps);
    for (std::size_t k = 0; k < taps; ++k) REQUIRE(f.coeffs[k] == f.coeffs[taps - 1 - k]);
    // After removing the (C-1)/2 delay the centre response is real and positive.
    const auto h = f.response(center) *
                   std::polar(1.0, 2.0 * std::numbers::pi * center * f.group_delay() / 441.0);
    REQUIRE(std::abs(h.imag()) <= 1e-9);
    REQUIRE(h.real() > 0.0);
  });
}
