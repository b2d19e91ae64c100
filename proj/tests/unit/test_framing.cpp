#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "enf/error.hpp"
#include "enf/framing.hpp"
#include "property.hpp"

using namespace enf;

TEST_CASE("thirty minutes at 441 Hz gives 1800 one-second frames") {
  const auto p = plan_frames(1800 * 441, 1.0, 1.0, 441.0);
  CHECK(p.frame_len == 441);
  CHECK(p.shift == 441);
  CHECK(p.frame_count == 1800);
}

TEST_CASE("signal exactly one frame long") {
  CHECK(plan_frames(441, 1.0, 1.0, 441.0).frame_count == 1);
  CHECK(plan_frames(440, 1.0, 1.0, 441.0).frame_count == 0);
}

TEST_CASE("twenty-second frames over thirty minutes") {
  CHECK(plan_frames(1800 * 441, 20.0, 1.0, 441.0).frame_count == 1781);
  // 794700 samples is 1802 s, two more frames.
  CHECK(plan_frames(794700, 20.0, 1.0, 441.0).frame_count == 1783);
}

TEST_CASE("plan errors") {
  CHECK_THROWS_AS(plan_frames(1000, 0.0, 1.0, 441.0), InvalidArgument);
  CHECK_THROWS_AS(plan_frames(1000, 1.0, 0.0, 441.0), InvalidArgument);
  CHECK_THROWS_AS(plan_frames(1000, 1.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("windowed frames") {
  std::vector<double> signal(20);
  for (std::size_t i = 0; i < signal.size(); ++i) signal[i] = static_cast<double>(i) - 7.5;
  const auto plan = plan_frames(signal.size(), 8.0, 4.0, 1.0);
  REQUIRE(plan.frame_count == 4);

  const auto rect = make_window(WindowKind::rectangular, 8);
  const auto f2 = windowed_frame(signal, plan, 2, rect);
  for (std::size_t i = 0; i < 8; ++i) CHECK(f2[i] == signal[8 + i]);

  const std::vector<double> zeros(20, 0.0);
  for (double v : windowed_frame(zeros, plan, 1, make_window(WindowKind::parzen, 8))) CHECK(v == 0.0);

  const std::vector<double> ones(20, 1.0);
  const auto parzen = make_window(WindowKind::parzen, 8);
  const auto f0 = windowed_frame(ones, plan, 0, parzen);
  for (std::size_t i = 0; i < 8; ++i) CHECK(f0[i] == parzen[i]);

  CHECK_THROWS_AS(windowed_frame(signal, plan, 4, rect), InvalidArgument);
  CHECK_THROWS_AS(windowed_frame(signal, plan, 0, make_window(WindowKind::rectangular, 7)),
                  InvalidArgument);
}

TEST_CASE("property: frames tile the signal at the planned shift") {
  enf::testing::for_all(enf::testing::kPropertyCases, 31, [](auto& rng, std::size_t) {
    const double fs = enf::testing::uniform(rng, 10.0, 500.0);
    const double len_s = enf::testing::uniform(rng, 0.05, 3.0);
    const double shift_s = enf::testing::uniform(rng, 0.05, 3.0);
    const std::size_t n = enf::testing::uniform_int(rng, 0, 3000);
    FramePlan plan;
    try {
      plan = plan_frames(n, len_s, shift_s, fs);
    } catch (const InvalidArgument&) {
      return;  // frame or shift rounds to zero samples
    }
    CAPTURE(n);
    CAPTURE(plan.frame_len);
    CAPTURE(plan.shift);
    REQUIRE(plan.frame_count <= n);
    if (n < plan.frame_len) {
      REQUIRE(plan.frame_count == 0);
      return;
    }
    REQUIRE(plan.frame_count == (n - plan.frame_len) / plan.shift + 1);
    const std::size_t last = plan.frame_count - 1;
    REQUIRE(plan.frame_start(last) + plan.frame_len <= n);
    REQUIRE(plan.frame_start(last) + plan.shift + plan.frame_len > n);

    std::vector<double> signal(n);
    for (std::size_t i = 0; i < n; ++i) signal[i] = static_cast<double>(i);
    const auto rect = make_window(WindowKind::rectangular, plan.frame_len);
    const std::size_t k = enf::testing::uniform_int(rng, 0, last);
    const auto frame = windowed_frame(signal, plan, k, rect);
    REQUIRE(frame.front() == signal[k * plan.shift]);
    if (k + 1 < plan.frame_count && plan.shift < plan.frame_len) {
      // Overlap of N - shift samples with the next frame.
      const auto next = windowed_frame(signal, plan, k + 1, rect);
      for (std::size_t i = 0; i < plan.frame_len - plan.shift; ++i) {
        REQUIRE(frame[plan.shift + i] == next[i]);
      }
    }
  });
}
