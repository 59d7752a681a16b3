#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>

#include "fgft/error.hpp"
#include "fgft/matrix.hpp"

namespace fgft {

/// Plane rotation G(p, q, θ): identity except
///   G[p][p] = c, G[p][q] = −s, G[q][p] = s, G[q][q] = c.
/// Indices are 0-based with p < q. c and s are always derived from θ so a
/// rotation reloaded from its angle is bit-identical to the original.
struct GivensRotation {
  std::size_t p = 0;
  std::size_t q = 1;
  double theta = 0.0;
  double c = 1.0;
  double s = 0.0;

  GivensRotation() = default;
  GivensRotation(std::size_t p_, std::size_t q_, double theta_)
      : p(p_), q(q_), theta(theta_), c(std::cos(theta_)), s(std::sin(theta_)) {
    require(p < q, "givens: need p < q");
  }

  friend bool operator==(const GivensRotation&, const GivensRotation&) = default;
};

/// Angle annihilating entry (p, q) of a symmetric matrix with the given 2×2
/// block: θ = ½·arctan((a_qq − a_pp) / (2·a_pq)) + π/4.
///
/// The quotient is never formed: atan2(sign(a_pq)·(a_qq − a_pp), 2|a_pq|)
/// equals the one-argument arctangent on (−π/2, π/2) and stays finite when
/// a_pq is tiny. The result lies in [0, π/2].
inline double annihilating_angle(double a_pp, double a_qq, double a_pq) {
  const double numer = std::signbit(a_pq) ? -(a_qq - a_pp) : (a_qq - a_pp);
  return 0.5 * std::atan2(numer, 2.0 * std::abs(a_pq)) + std::numbers::pi / 4.0;
}

/// Σ_{i≠j} m_ij²
inline double offdiag_norm_sq(const Matrix& m) {
  require(m.square(), "offdiag_norm_sq: matrix must be square");
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (j != i) acc += r[j] * r[j];
  }
  return acc;
}

/// Position of the largest |m_ij|, i < j, ties to the lexicographically
/// smallest pair. Empty when the matrix has no non-zero off-diagonal entry.
struct Pivot {
  std::size_t p;
  std::size_t q;
  double magnitude;
};

inline std::optional<Pivot> find_pivot(const Matrix& m) {
  std::optional<Pivot> best;
  double best_mag = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double mag = std::abs(m(i, j));
      if (mag > best_mag) {
        best_mag = mag;
        best = Pivot{i, j, mag};
      }
    }
  return best;
}

/// Best single rotation for the off-diagonal objective: pivot on the
/// largest off-diagonal entry. Empty when the input is already diagonal.
inline std::optional<GivensRotation> solve_subproblem(const Matrix& m) {
  require(m.square(), "solve_subproblem: matrix must be square");
  const auto pivot = find_pivot(m);
  if (!pivot) return std::nullopt;
  const auto [p, q, mag] = *pivot;
  return GivensRotation(p, q, annihilating_angle(m(p, p), m(q, q), m(p, q)));
}

/// In-place M ← GᵀMG on full symmetric storage; touches rows/columns p, q only.
/// When `annihilate` is set the (p, q) entry is written as an exact zero, which
/// is what the pivoting rotation produces in exact arithmetic.
inline void conjugate_in_place(Matrix& m, const GivensRotation& g, bool annihilate = false) {
  const std::size_t n = m.rows();
  require(m.square() && g.q < n, "conjugate: rotation does not fit the matrix");
  const std::size_t p = g.p, q = g.q;
  const double c = g.c, s = g.s;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double a = m(k, p);
    const double b = m(k, q);
    const double new_p = c * a + s * b;
    const double new_q = -s * a + c * b;
    m(k, p) = m(p, k) = new_p;
    m(k, q) = m(q, k) = new_q;
  }
  const double app = m(p, p), aqq = m(q, q), apq = m(p, q);
  const double cc = c * c, ss = s * s, cs = c * s;
  m(p, p) = cc * app + 2.0 * cs * apq + ss * aqq;
  m(q, q) = ss * app - 2.0 * cs * apq + cc * aqq;
  const double off = annihilate ? 0.0 : cs * (aqq - app) + (cc - ss) * apq;
  m(p, q) = m(q, p) = off;
}

inline Matrix conjugate(Matrix m, const GivensRotation& g) {
  conjugate_in_place(m, g);
  return m;
}

/// A ← A·G: mixes columns p and q. Shared by every place that materialises a
/// product of rotations so all of them round identically.
inline void rotate_columns(Matrix& a, const GivensRotation& g) {
  const std::size_t p = g.p, q = g.q;
  const double c = g.c, s = g.s;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row(r);
    const double x = row[p];
    const double y = row[q];
    row[p] = c * x + s * y;
    row[q] = -s * x + c * y;
  }
}

}  // namespace fgft
