#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace enf {

enum class WindowKind { parzen, hamming, kaiser, rectangular };

inline constexpr double kDefaultKaiserBeta = 8.6;

std::string_view to_string(WindowKind kind) noexcept;

// Accepts "parzen", "hamming", "kaiser", "rect" and "rectangular".
WindowKind parse_window_kind(std::string_view name);

class WindowVector {
 public:
  WindowKind kind() const noexcept { return kind_; }
  std::span<const double> taps() const noexcept { return taps_; }
  std::size_t size() const noexcept { return taps_.size(); }
  double operator[](std::size_t k) const noexcept { return taps_[k]; }
  // Kaiser beta; empty for the other kinds.
  std::optional<double> beta() const noexcept { return beta_; }

 private:
  friend WindowVector make_window(WindowKind, std::size_t, std::optional<double>);
  WindowVector(WindowKind kind, std::vector<double> taps, std::optional<double> beta)
      : kind_(kind), taps_(std::move(taps)), beta_(beta) {}

  WindowKind kind_;
  std::vector<double> taps_;
  std::optional<double> beta_;
};

// Symmetric N-point window. `beta` is only read for Kaiser and defaults to
// kDefaultKaiserBeta there.
//
// Parzen taps are evaluated on the centred index n = k - (N-1)/2 with
//   w(n) = 1 - 6 (|n|/(N/2))^2 + 6 (|n|/(N/2))^3   for |n| <= (N-1)/4
//   w(n) = 2 (1 - |n|/(N/2))^3                     otherwise,
// so a point lying exactly on (N-1)/4 takes the inner branch.
WindowVector make_window(WindowKind kind, std::size_t length,
                         std::optional<double> beta = std::nullopt);

// The two Parzen branches as scalar functions of |n|, exposed for
// continuity checks.
double parzen_inner(double abs_n, std::size_t length) noexcept;
double parzen_outer(double abs_n, std::size_t length) noexcept;

}  // namespace enf
