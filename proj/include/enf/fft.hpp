#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace enf::fft {

// Forward real-to-complex DFT of `input` zero-padded (or truncated) to
// `length` points; returns the length/2 + 1 non-negative-frequency bins,
// X[q] = sum_t x[t] exp(-j 2 pi q t / length). Thread-safe; plans are cached
// per length.
std::vector<std::complex<double>> real_forward(std::span<const double> input,
                                               std::size_t length);

}  // namespace enf::fft
