#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "enf/error.hpp"
#include "enf/window.hpp"
#include "property.hpp"

using namespace enf;
using enf::testing::for_all;

TEST_CASE("parzen centre tap is exactly one") {
  for (std::size_t n : {1U, 3U, 9U, 441U, 8821U}) {
    const auto w = make_window(WindowKind::parzen, n);
    CHECK(w[(n - 1) / 2] == 1.0);
  }
}

TEST_CASE("rectangular taps are all one") {
  const auto w = make_window(WindowKind::rectangular, 37);
  for (double t : w.taps()) CHECK(t == 1.0);
}

TEST_CASE("parzen N = 9 matches the scalar definition") {
  // Exact rationals at |n| = 0..4 with N/2 = 4.5; |n| = 2 sits on (N-1)/4 and
  // takes the inner branch.
  const double expected[5] = {1.0, 187.0 / 243.0, 83.0 / 243.0, 2.0 / 27.0, 2.0 / 729.0};
  const auto w = make_window(WindowKind::parzen, 9);
  for (int n = -4; n <= 4; ++n) {
    CAPTURE(n);
    CHECK(w[static_cast<std::size_t>(n + 4)] == doctest::Approx(expected[std::abs(n)]).epsilon(1e-15));
  }
  CHECK(w[0] == doctest::Approx(2.0 * std::pow(1.0 - 4.0 / 4.5, 3)).epsilon(1e-15));
}

TEST_CASE("hamming and kaiser formulas") {
  const std::size_t n = 11;
  const auto h = make_window(WindowKind::hamming, n);
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(h[k] == doctest::Approx(0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / 10.0)));
  }
  const auto kz = make_window(WindowKind::kaiser, n, 5.0);
  CHECK(kz.beta().value() == 5.0);
  CHECK(kz[5] == doctest::Approx(1.0));
  CHECK(kz[0] == doctest::Approx(1.0 / std::cyl_bessel_i(0.0, 5.0)));
  CHECK(make_window(WindowKind::kaiser, n).beta().value() == kDefaultKaiserBeta);
  const auto flat = make_window(WindowKind::kaiser, n, 0.0);
  for (double t : flat.taps()) CHECK(t == doctest::Approx(1.0));
  CHECK_FALSE(h.beta().has_value());
}

TEST_CASE("window errors") {
  CHECK_THROWS_AS(make_window(WindowKind::parzen, 0), InvalidArgument);
  CHECK_THROWS_AS(make_window(WindowKind::kaiser, 16, -1.0), InvalidArgument);
  CHECK_THROWS_AS(parse_window_kind("hann"), InvalidArgument);
  CHECK(parse_window_kind("rect") == WindowKind::rectangular);
  CHECK(parse_window_kind("rectangular") == WindowKind::rectangular);
  CHECK(to_string(WindowKind::kaiser) == "kaiser");
}

TEST_CASE("property: every window is symmetric with taps in [0, 1]") {
  const WindowKind kinds[] = {WindowKind::parzen, WindowKind::hamming, WindowKind::kaiser,
                              WindowKind::rectangular};
  for_all(enf::testing::kPropertyCases, 11, [&](auto& rng, std::size_t) {
    const std::size_t n = enf::testing::uniform_int(rng, 1, 1000);
    const WindowKind kind = kinds[enf::testing::uniform_int(rng, 0, 3)];
    const double beta = enf::testing::uniform(rng, 0.0, 20.0);
    const auto w = make_window(kind, n, beta);
    CAPTURE(n);
    CAPTURE(to_string(kind));
    REQUIRE(w.size() == n);
    for (std::size_t k = 0; k < n; ++k) {
      REQUIRE(std::abs(w[k] - w[n - 1 - k]) <= 1e-12);
      REQUIRE(w[k] >= 0.0);
      REQUIRE(w[k] <= 1.0);
    }
  });
}

TEST_CASE("window symmetry holds for every N in 1..1000") {
  for (auto kind : {WindowKind::parzen, WindowKind::hamming, WindowKind::kaiser}) {
    for (std::size_t n = 1; n <= 1000; ++n) {
      const auto w = make_window(kind, n);
      for (std::size_t k = 0; k < n / 2; ++k) REQUIRE(std::abs(w[k] - w[n - 1 - k]) <= 1e-12);
    }
  }
}

TEST_CASE("parzen taps are non-negative and non-increasing in |n| for N <= 10000") {
  for (std::size_t n = 1; n <= 10000; ++n) {
    const auto w = make_window(WindowKind::parzen, n);
    const std::size_t mid = (n - 1) / 2;
    // From the centre outwards.
    for (std::size_t k = mid + 1; k < n; ++k) {
      if (!(w[k] >= 0.0 && w[k] <= w[k - 1])) {
        FAIL("N = " << n << " k = " << k);
      }
    }
  }
}

TEST_CASE("property: parzen branches meet at (N-1)/4") {
  // With N/2 in the polynomial the branches differ at |n| = (N-1)/4 by
  // exactly (2x - 1)^3 = -1/N^3, x = (N-1)/(2N); that is below 1e-9 once
  // N > 1000.
  for_all(enf::testing::kPropertyCases, 12, [](auto& rng, std::size_t) {
    const std::size_t n = enf::testing::uniform_int(rng, 2, 200000);
    const double boundary = static_cast<double>(n - 1) / 4.0;
    const double gap = parzen_inner(boundary, n) - parzen_outer(boundary, n);
    const double nd = static_cast<double>(n);
    CAPTURE(n);
    REQUIRE(std::abs(gap + 1.0 / (nd * nd * nd)) <= 1e-15);
  });
  for_all(enf::testing::kPropertyCases, 13, [](auto& rng, std::size_t) {
    const std::size_t n = enf::testing::uniform_int(rng, 1001, 1000000);
    const double boundary = static_cast<double>(n - 1) / 4.0;
    CAPTURE(n);
    REQUIRE(std::abs(parzen_inner(boundary, n) - parzen_outer(boundary, n)) <= 1e-9);
  });
}
