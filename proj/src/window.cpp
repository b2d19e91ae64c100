#include "enf/window.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "enf/error.hpp"

namespace enf {

std::string_view to_string(WindowKind kind) noexcept {
  switch (kind) {
    case WindowKind::parzen: return "parzen";
    case WindowKind::hamming: return "hamming";
    case WindowKind::kaiser: return "kaiser";
    case WindowKind::rectangular: return "rect";
  }
  return "unknown";
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "parzen") return WindowKind::parzen;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "kaiser") return WindowKind::kaiser;
  if (name == "rect" || name == "rectangular") return WindowKind::rectangular;
  throw InvalidArgument("unknown window '" + std::string(name) + "'");
}

double parzen_inner(double abs_n, std::size_t length) noexcept {
  const double r = abs_n / (static_cast<double>(length) / 2.0);
  return 1.0 - 6.0 * r * r + 6.0 * r * r * r;
}

double parzen_outer(double abs_n, std::size_t length) noexcept {
  const double r = 1.0 - abs_n / (static_cast<double>(length) / 2.0);
  return 2.0 * r * r * r;
}

WindowVector make_window(WindowKind kind, std::size_t length,
                         std::optional<double> beta) {
  if (length == 0) throw InvalidArgument("window length must be positive");
  std::vector<double> taps(length, 1.0);
  const double span = static_cast<double>(length - 1);
  std::optional<double> used_beta;

  switch (kind) {
    case WindowKind::rectangular:
      break;
    case WindowKind::parzen: {
      const double quarter = span / 4.0;
      for (std::size_t k = 0; k < length; ++k) {
        const double n = std::abs(static_cast<double>(k) - span / 2.0);
        taps[k] = n <= quarter ? parzen_inner(n, length) : parzen_outer(n, length);
      }
      break;
    }
    case WindowKind::hamming:
      if (length > 1) {
        for (std::size_t k = 0; k < length; ++k) {
          taps[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / span);
        }
      }
      break;
    case WindowKind::kaiser: {
      const double b = beta.value_or(kDefaultKaiserBeta);
      if (!(b >= 0.0)) throw InvalidArgument("Kaiser beta must be non-negative");
      used_beta = b;
      if (length > 1) {
        const double denom = std::cyl_bessel_i(0.0, b);
        for (std::size_t k = 0; k < length; ++k) {
          const double x = 2.0 * static_cast<double>(k) / span - 1.0;
          taps[k] = std::cyl_bessel_i(0.0, b * std::sqrt(std::max(0.0, 1.0 - x * x))) / denom;
        }
      }
      break;
    }
  }

  // Mirror the second half so symmetry is exact rather than rounding-limited.
  for (std::size_t k = 0; k < length / 2; ++k) taps[length - 1 - k] = taps[k];
  return WindowVector(kind, std::move(taps), used_beta);
}

}  // namespace enf
