#pragma once

// Per-mode error measures comparing approximate Fourier modes û_k with the
// exact eigenbasis, their J = 0 (degree-ordering) baselines, degree-corrected
// ratios, and the eigenvalue density used to explain them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "fgft/error.hpp"
#include "fgft/graph.hpp"
#include "fgft/jacobi.hpp"
#include "fgft/matrix.hpp"

namespace fgft {

/// û if uᵀû ≥ 0, else −û.
inline std::vector<double> orient(std::span<const double> u_hat, std::span<const double> u) {
  require(u_hat.size() == u.size(), "orient: length mismatch");
  std::vector<double> out(u_hat.begin(), u_hat.end());
  if (dot(u, u_hat) < 0.0)
    for (double& v : out) v = -v;
  return out;
}

/// Uᵀx, accumulated row by row so each coordinate sums over i ascending.
inline std::vector<double> project_onto_basis(const Matrix& u, std::span<const double> x) {
  require(u.rows() == x.size(), "projection: length mismatch");
  std::vector<double> out(u.cols(), 0.0);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double xi = x[i];
    auto row = u.row(i);
    for (std::size_t j = 0; j < u.cols(); ++j) out[j] += row[j] * xi;
  }
  return out;
}

/// ‖δ_k − Uᵀû_k‖₂ for an already oriented û_k.
inline double err1(const EigenDecomposition& eig, std::span<const double> u_hat_k, std::size_t k) {
  require(k < eig.size(), "err1: mode index out of range");
  const auto coeffs = project_onto_basis(eig.eigenvectors, u_hat_k);
  double acc = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double d = (j == k ? 1.0 : 0.0) - coeffs[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// err1 at J = 0, where mode k is the impulse at the k-th vertex in degree order.
inline double err1_baseline(const EigenDecomposition& eig, std::span<const std::size_t> sigma,
                            std::size_t k) {
  require(k < eig.size() && sigma.size() == eig.size(), "err1_baseline: bad index");
  std::vector<double> impulse(eig.size(), 0.0);
  impulse[sigma[k]] = 1.0;
  const auto u_k = eig.eigenvectors.column(k);
  return err1(eig, orient(impulse, u_k), k);
}

/// ‖L·û_k − λ_k·û_k‖₂ with the exact λ_k; sign of û_k is irrelevant.
inline double err2(std::span<const double> lambdas, const Matrix& l,
                   std::span<const double> u_hat_k, std::size_t k) {
  require(k < lambdas.size(), "err2: mode index out of range");
  require(l.rows() == u_hat_k.size(), "err2: length mismatch");
  const auto lu = l * u_hat_k;
  double acc = 0.0;
  for (std::size_t i = 0; i < lu.size(); ++i) {
    const double d = lu[i] - lambdas[k] * u_hat_k[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Same quantity as err2 via the expansion Σ_j (λ_j − λ_k)²(u_jᵀû_k)².
/// Cross-check only.
inline double err2_spectral(const EigenDecomposition& eig, std::span<const double> u_hat_k,
                            std::size_t k) {
  require(k < eig.size(), "err2_spectral: mode index out of range");
  const auto coeffs = project_onto_basis(eig.eigenvectors, u_hat_k);
  double acc = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double gap = eig.eigenvalues[j] - eig.eigenvalues[k];
    acc += gap * gap * coeffs[j] * coeffs[j];
  }
  return std::sqrt(acc);
}

inline double err2_baseline(const Matrix& l, std::span<const double> lambdas,
                            std::span<const std::size_t> sigma, std::size_t k) {
  require(k < lambdas.size() && sigma.size() == lambdas.size(), "err2_baseline: bad index");
  std::vector<double> impulse(lambdas.size(), 0.0);
  impulse[sigma[k]] = 1.0;
  return err2(lambdas, l, impulse, k);
}

/// ‖U − Û‖_F / ‖U‖_F, Û columns assumed oriented against U.
inline double global_error(const EigenDecomposition& eig, const Matrix& u_hat) {
  const Matrix& u = eig.eigenvectors;
  require(u.rows() == u_hat.rows() && u.cols() == u_hat.cols(), "global_error: dimension mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) {
      const double d = u(i, j) - u_hat(i, j);
      num += d * d;
    }
  return std::sqrt(num / frobenius_norm_sq(u));
}

/// Flips each column of Û so that u_kᵀû_k ≥ 0.
inline Matrix orient_columns(const Matrix& u_hat, const Matrix& u) {
  require(u.rows() == u_hat.rows() && u.cols() == u_hat.cols(), "orient: dimension mismatch");
  Matrix out = u_hat;
  for (std::size_t k = 0; k < u.cols(); ++k) {
    double ip = 0.0;
    for (std::size_t r = 0; r < u.rows(); ++r) ip += u(r, k) * u_hat(r, k);
    if (ip < 0.0)
      for (std::size_t r = 0; r < u.rows(); ++r) out(r, k) = -out(r, k);
  }
  return out;
}

inline constexpr double kDefaultDensityDelta = 0.25;

/// f(k) = #{i : λ_i ∈ [λ_k − Δ, λ_k + Δ]} for sorted λ, by binary search.
inline std::vector<std::size_t> eigenvalue_density(std::span<const double> lambdas, double delta) {
  require(delta > 0.0, "eigenvalue_density: delta must be positive");
  require(std::is_sorted(lambdas.begin(), lambdas.end()), "eigenvalue_density: lambdas must be sorted");
  std::vector<std::size_t> f(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const auto lo = std::lower_bound(lambdas.begin(), lambdas.end(), lambdas[k] - delta);
    const auto hi = std::upper_bound(lambdas.begin(), lambdas.end(), lambdas[k] + delta);
    f[k] = static_cast<std::size_t>(hi - lo);
  }
  return f;
}

enum class ErrorKind { err1, err2, err1_norm, err2_norm };

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::err1: return "err1";
    case ErrorKind::err2: return "err2";
    case ErrorKind::err1_norm: return "err1_norm";
    case ErrorKind::err2_norm: return "err2_norm";
  }
  return "err1";
}

inline bool is_normalized(ErrorKind kind) {
  return kind == ErrorKind::err1_norm || kind == ErrorKind::err2_norm;
}

/// Marks entries of normalized surfaces whose baseline vanishes.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_undefined(double v) { return std::isnan(v); }

/// Squared baselines below this are treated as zero when normalizing.
inline constexpr double kBaselineFloor = 1e-14;

/// Error values over modes k (rows) and rotation budgets J (columns).
///
/// Raw kinds store err(k, J). Normalized kinds store err(k, J)² / err(k, 0)²,
/// with kUndefined where the baseline is (numerically) zero.
struct ErrorSurface {
  ErrorKind kind = ErrorKind::err1;
  std::vector<std::size_t> j_grid;
  Matrix values;                     // n × |j_grid|
  std::vector<double> baseline;      // err(k, 0)
  std::vector<std::size_t> density;  // f(k)
  double delta = kDefaultDensityDelta;

  std::size_t modes() const { return values.rows(); }
};

inline ErrorSurface normalize_surface(const ErrorSurface& raw) {
  require(!is_normalized(raw.kind), "normalize_surface: surface is already normalized");
  require(raw.baseline.size() == raw.modes(), "normalize_surface: baseline length mismatch");
  ErrorSurface out = raw;
  out.kind = raw.kind == ErrorKind::err1 ? ErrorKind::err1_norm : ErrorKind::err2_norm;
  for (std::size_t k = 0; k < raw.modes(); ++k) {
    const double base_sq = raw.baseline[k] * raw.baseline[k];
    for (std::size_t j = 0; j < raw.values.cols(); ++j) {
      const double v = raw.values(k, j);
      out.values(k, j) = base_sq < kBaselineFloor ? kUndefined : (v * v) / base_sq;
    }
  }
  return out;
}

}  // namespace fgft
