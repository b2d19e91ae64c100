#pragma once

// Test-only reference computations. They go through Eigen's dense
// factorisations and never call the library's Toeplitz or dense routines.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace enf::testing {

inline Eigen::MatrixXd toeplitz(const std::vector<double>& first_column) {
  const auto n = static_cast<Eigen::Index>(first_column.size());
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = first_column[static_cast<std::size_t>(std::abs(i - j))];
  }
  return t;
}

// Random positive-definite symmetric Toeplitz first column: a power spectrum
// made of random lines and a white floor, sampled at lags 0..order-1.
inline std::vector<double> random_pd_toeplitz(std::size_t order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> rho(order, 0.0);
  const int lines = 1 + static_cast<int>(unit(rng) * 5.0);
  for (int s = 0; s < lines; ++s) {
    const double p = 0.05 + 2.0 * unit(rng);
    const double w = std::numbers::pi * unit(rng);
    for (std::size_t k = 0; k < order; ++k) rho[k] += p * std::cos(w * static_cast<double>(k));
  }
  rho[0] += 0.02 + 0.5 * unit(rng);
  return rho;
}

// Solves R_{M-1} w = -rho_{1..M-1} by dense LU; alpha = rho_0 + rho_{1..}^T w.
struct DenseLevinson {
  Eigen::VectorXd w;
  double alpha;
};

inline DenseLevinson dense_levinson(const std::vector<double>& rho) {
  const auto m = static_cast<Eigen::Index>(rho.size()) - 1;
  std::vector<double> head(rho.begin(), rho.end() - 1);
  const Eigen::MatrixXd r = toeplitz(head);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = -rho[static_cast<std::size_t>(i + 1)];
  DenseLevinson out;
  out.w = r.fullPivLu().solve(rhs);
  out.alpha = rho[0];
  for (Eigen::Index i = 0; i < m; ++i) out.alpha += rho[static_cast<std::size_t>(i + 1)] * out.w(i);
  return out;
}

// Diagonal sums of a square matrix, offsets -(n-1)..(n-1), lower diagonals
// first: sums[n-1+i] = sum_k A(k+i, k) for i >= 0, sums[n-1-i] = sum_k A(k, k+i).
inline std::vector<double> diagonal_sums(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  std::vector<double> sums(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) sums[static_cast<std::size_t>(n - 1 + r - c)] += a(r, c);
  }
  return sums;
}

// a*(omega) A a(omega) with a(omega) = [1, e^{j omega}, ..., e^{j (n-1) omega}]^T.
inline double quadratic_form(const Eigen::MatrixXd& a, double omega) {
  const auto n = a.rows();
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = std::polar(1.0, omega * static_cast<double>(k));
  return (v.adjoint() * a.cast<std::complex<double>>() * v)(0, 0).real();
}

inline double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace enf::testing
