#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "enf/stft.hpp"

namespace enf {

inline constexpr std::size_t kDefaultCaponOrder = 10;  // m; matrices are (m+1)x(m+1)

// Row-major square matrix for the small (m+1)-order reference computations.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t rows() const noexcept { return n_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }

  static DenseMatrix identity(std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Symmetric Toeplitz autocovariance stored as its first column rho_0..rho_m.
struct ToeplitzCovariance {
  std::vector<double> first_column;

  std::size_t order() const noexcept { return first_column.size(); }
  bool degenerate() const noexcept {
    return first_column.empty() || !(first_column.front() > 0.0);
  }
  DenseMatrix dense() const;
};

// Solution of R_{M-1} w = -rho_{1..M-1} together with the final prediction
// error alpha = rho_0 + rho_{1..M-1}^T w.
struct LevinsonSolution {
  std::vector<double> w;
  double alpha = 0.0;
};

// Generators of R^{-1} = K(gamma) K(gamma)^T - K(delta) K(delta)^T, where
// K(v) is the lower-triangular Toeplitz (Krylov) matrix with first column v.
struct GsFactors {
  std::vector<double> gamma;
  std::vector<double> delta;
  double alpha = 0.0;
  std::vector<double> w;

  std::size_t order() const noexcept { return gamma.size(); }
};

// Diagonal sums x_i of R^{-1}, i = -(M-1)..(M-1).
class CaponDenomCoeffs {
 public:
  explicit CaponDenomCoeffs(std::vector<double> nonneg)  // x_0..x_{M-1}
      : half_(std::move(nonneg)) {}

  std::size_t order() const noexcept { return half_.size(); }
  double operator[](long i) const noexcept {
    return half_[static_cast<std::size_t>(i < 0 ? -i : i)];
  }
  // x_{-(M-1)}..x_{M-1}.
  std::vector<double> full() const;

  // a*(omega) R^{-1} a(omega) = x_0 + 2 sum_{i>=1} x_i cos(i omega).
  double evaluate(double omega) const noexcept;

 private:
  std::vector<double> half_;
};

// Biased autocorrelation rho_k = (1/N) sum_{t=k}^{N-1} y(t) y(t-k),
// k = 0..m, of an already-windowed frame. An all-zero frame yields a
// degenerate (rho_0 == 0) result rather than an error.
ToeplitzCovariance estimate_autocovariance(std::span<const double> frame,
                                           std::size_t m);

// Levinson-Durbin in O(M^2). Throws NotPositiveDefinite when a prediction
// error reaches zero or goes negative.
LevinsonSolution levinson_solve(const ToeplitzCovariance& cov);

GsFactors gs_factors(std::span<const double> w, double alpha);

// Dense R^{-1} rebuilt from the generators; used for verification.
DenseMatrix inverse_from_gs(const GsFactors& factors);

// x_i = sum_u (M - i - u) (gamma_u gamma_{u+i} - delta_u delta_{u+i}),
// the diagonal sums of the two Krylov products.
CaponDenomCoeffs denom_coeffs(const GsFactors& factors);

// (m+1) / phi_den(omega_q) on the Q-point grid, with phi_den from one length-Q
// transform of the index-shifted coefficients. Throws NumericalDegeneracy at
// the first bin where phi_den <= 0 and InvalidArgument when Q < 2M - 1.
PsdEstimate capon_psd(const CaponDenomCoeffs& x, std::size_t grid_size,
                      double sample_rate_hz);

enum class CaponRefine {
  none,       // grid maximum
  quadratic,  // one three-point fit on the log grid
  polished,   // three-point fits repeated on the analytic spectrum
};

struct CaponOptions {
  std::size_t order = kDefaultCaponOrder;
  std::size_t pad_factor = kDefaultPadFactor;
  CaponRefine refine = CaponRefine::polished;
};

// Full per-frame chain: autocovariance, Levinson, generators, coefficients,
// grid PSD, in-band peak and refinement. Returns nullopt for frames whose
// covariance is degenerate or not positive definite.
std::optional<PeakEstimate> capon_estimate_frame(std::span<const double> frame,
                                                 double sample_rate_hz,
                                                 FrequencyBand band,
                                                 const CaponOptions& options = {});

// Reference path without the Toeplitz structure.

// (1/(N-m)) sum_{t=m}^{N-1} [y(t)..y(t-m)]^T [y(t)..y(t-m)].
DenseMatrix literal_covariance(std::span<const double> frame, std::size_t m);

// Gauss-Jordan with partial pivoting. Throws DegenerateInput on a zero pivot.
DenseMatrix dense_inverse(const DenseMatrix& a);

// (m+1) / (a*(omega_q) R^{-1} a(omega_q)) evaluated bin by bin.
PsdEstimate dense_capon_psd(const DenseMatrix& inverse, std::size_t grid_size,
                            double sample_rate_hz);

}  // namespace enf
