#pragma once

// Classical (max-pivot) Jacobi: the truncated variant that yields a
// FactoredTransform with a prescribed rotation budget, and the run-to-
// convergence variant used as the exact eigendecomposition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fgft/error.hpp"
#include "fgft/givens.hpp"
#include "fgft/graph.hpp"
#include "fgft/matrix.hpp"
#include "fgft/transform.hpp"

namespace fgft {

/// Per-row maxima of |off-diagonal| entries. Lets the global pivot be found
/// in O(n) and repaired in O(n) expected time after each rotation.
///
/// Row r tracks the smallest column attaining its maximum. The first row (in
/// index order) attaining the global maximum then names the lexicographically
/// smallest maximal pair, and its column is always greater than the row.
class PivotIndex {
 public:
  PivotIndex() = default;
  explicit PivotIndex(const Matrix& m) : col_(m.rows(), 0), val_(m.rows(), 0.0) {
    for (std::size_t r = 0; r < m.rows(); ++r) rescan(m, r);
  }

  std::optional<Pivot> best() const {
    std::optional<Pivot> out;
    double best_val = 0.0;
    for (std::size_t r = 0; r < val_.size(); ++r)
      if (val_[r] > best_val) {
        best_val = val_[r];
        out = Pivot{r, col_[r], best_val};
      }
    return out;
  }

  /// Repairs the index after rows/columns p and q of `m` changed.
  void update(const Matrix& m, std::size_t p, std::size_t q) {
    rescan(m, p);
    rescan(m, q);
    for (std::size_t k = 0; k < m.rows(); ++k) {
      if (k == p || k == q) continue;
      const double vp = std::abs(m(k, p));
      const double vq = std::abs(m(k, q));
      if (col_[k] == p || col_[k] == q) {
        // The old maximum moved; only a strict increase settles it locally.
        const bool take_p = vp >= vq;
        const double v = take_p ? vp : vq;
        if (v > val_[k]) {
          val_[k] = v;
          col_[k] = take_p ? p : q;
        } else {
          rescan(m, k);
        }
      } else {
        consider(k, p, vp);
        consider(k, q, vq);
      }
    }
  }

  std::size_t column(std::size_t r) const { return col_[r]; }
  double value(std::size_t r) const { return val_[r]; }

  /// Entries read by full-row rescans since construction.
  std::size_t scanned_entries() const { return scanned_; }

 private:
  void consider(std::size_t r, std::size_t c, double v) {
    if (v > val_[r] || (v == val_[r] && c < col_[r])) {
      val_[r] = v;
      col_[r] = c;
    }
  }

  void rescan(const Matrix& m, std::size_t r) {
    double best = 0.0;
    std::size_t best_col = r == 0 ? 1 : 0;
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == r) continue;
      const double v = std::abs(row[c]);
      if (v > best) {
        best = v;
        best_col = c;
      }
    }
    val_[r] = best;
    col_[r] = best_col;
    scanned_ += row.size();
  }

  std::vector<std::size_t> col_;
  std::vector<double> val_;
  std::size_t scanned_ = 0;
};

/// One pivoting rotation and the entry it annihilated.
struct JacobiStep {
  GivensRotation rotation;
  double pivot_value;  // l_pq before the rotation (signed)
};

/// Working state of the max-pivot Jacobi iteration L_{j+1} = S_jᵀ L_j S_j.
///
/// Optionally accumulates S_1…S_j densely, which is how experiments snapshot
/// Û at several budgets during one pass.
class JacobiDiagonalizer {
 public:
  explicit JacobiDiagonalizer(const Matrix& symmetric, bool accumulate = false)
      : work_(symmetric), index_(symmetric), accumulate_(accumulate) {
    require(symmetric.square(), "jacobi: matrix must be square");
    require(is_exactly_symmetric(symmetric), "jacobi: matrix must be symmetric");
    if (accumulate_) product_ = Matrix::identity(symmetric.rows());
  }

  std::size_t size() const { return work_.rows(); }

  /// Performs one rotation; empty when the working matrix is already diagonal.
  std::optional<JacobiStep> step() {
    if (size() < 2) return std::nullopt;
    const auto pivot = index_.best();
    if (!pivot) return std::nullopt;
    const std::size_t p = pivot->p, q = pivot->q;
    const double apq = work_(p, q);
    GivensRotation g(p, q, annihilating_angle(work_(p, p), work_(q, q), apq));
    conjugate_in_place(work_, g, /*annihilate=*/true);
    index_.update(work_, p, q);
    if (accumulate_) rotate_columns(product_, g);
    rotations_.push_back(g);
    return JacobiStep{g, apq};
  }

  /// Runs until ‖L_j‖²_offdiag ≤ tol²·‖L‖²_F or `max_steps` further rotations
  /// were taken. Returns whether the tolerance was met.
  bool run_to_tolerance(double tol, std::size_t max_steps) {
    require(tol > 0.0, "jacobi: tolerance must be positive");
    const double target = tol * tol * frobenius_norm_sq(work_);
    const std::size_t resync = std::max<std::size_t>(1, size() * (size() - 1) / 2);
    double off = offdiag_norm_sq(work_);
    std::size_t taken = 0, since_exact = 0;
    while (off > target) {
      if (taken >= max_steps) return false;
      const auto st = step();
      if (!st) return true;
      ++taken;
      off -= 2.0 * st->pivot_value * st->pivot_value;
      // The running difference loses all accuracy near convergence.
      if (off <= target || ++since_exact >= resync) {
        off = offdiag_norm_sq(work_);
        since_exact = 0;
      }
    }
    return true;
  }

  const Matrix& working() const { return work_; }
  const std::vector<GivensRotation>& rotations() const { return rotations_; }
  const PivotIndex& pivot_index() const { return index_; }

  /// S_1…S_j (identity if accumulation is off and no step was taken).
  const Matrix& product() const {
    require(accumulate_, "jacobi: rotation product was not accumulated");
    return product_;
  }

  std::vector<double> diagonal() const {
    std::vector<double> d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = work_(i, i);
    return d;
  }

  /// Stable ordering of the current diagonal, non-decreasing.
  std::vector<std::size_t> frequency_order() const {
    const auto d = diagonal();
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    return order;
  }

  /// The factored transform represented by the rotations taken so far.
  FactoredTransform snapshot(std::size_t j_requested) const {
    const auto d = diagonal();
    auto order = frequency_order();
    std::vector<double> lambda(size());
    for (std::size_t k = 0; k < size(); ++k) lambda[k] = d[order[k]];
    return FactoredTransform(size(), rotations_, std::move(order), std::move(lambda),
                             std::max(j_requested, rotations_.size()));
  }

 private:
  Matrix work_;
  PivotIndex index_;
  bool accumulate_;
  Matrix product_;
  std::vector<GivensRotation> rotations_;
};

/// At most J pivoting rotations; stops early only when the working matrix
/// becomes exactly diagonal (or, if given, once the off-diagonal mass meets
/// `tol` relative to ‖L‖_F).
inline FactoredTransform truncated_jacobi(const Matrix& l, std::size_t budget,
                                          std::optional<double> tol = std::nullopt) {
  JacobiDiagonalizer jd(l);
  if (tol) {
    jd.run_to_tolerance(*tol, budget);
  } else {
    for (std::size_t j = 0; j < budget; ++j)
      if (!jd.step()) break;
  }
  return jd.snapshot(budget);
}

inline FactoredTransform truncated_jacobi(const Laplacian& l, std::size_t budget,
                                          std::optional<double> tol = std::nullopt) {
  return truncated_jacobi(l.matrix(), budget, tol);
}

/// Exact Fourier basis: eigenvalues non-decreasing, column k of `eigenvectors`
/// paired with eigenvalues[k].
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;

  std::size_t size() const { return eigenvalues.size(); }
  double eigenvalue(std::size_t k) const { return eigenvalues.at(k); }
};

inline constexpr double kDefaultEigenTolerance = 1e-12;

/// Makes the largest-magnitude entry of each column positive (first such row on ties).
inline void normalize_column_signs(Matrix& u) {
  for (std::size_t k = 0; k < u.cols(); ++k) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < u.rows(); ++r)
      if (std::abs(u(r, k)) > best) {
        best = std::abs(u(r, k));
        arg = r;
      }
    if (u(arg, k) < 0.0)
      for (std::size_t r = 0; r < u.rows(); ++r) u(r, k) = -u(r, k);
  }
}

/// Default rotation cap for full_jacobi: 20 sweeps' worth of pivots.
inline std::size_t default_rotation_cap(std::size_t n) { return 20 * (n * (n - 1) / 2); }

/// Runs Jacobi to convergence. Throws NumericalError when `max_rotations`
/// (default: default_rotation_cap(n)) is exhausted first.
inline EigenDecomposition full_jacobi(const Matrix& l, double tol = kDefaultEigenTolerance,
                                      std::optional<std::size_t> max_rotations = std::nullopt) {
  require(tol > 0.0, "full_jacobi: tolerance must be positive");
  const std::size_t n = l.rows();
  JacobiDiagonalizer jd(l, /*accumulate=*/true);
  const std::size_t cap = max_rotations.value_or(default_rotation_cap(n));
  if (!jd.run_to_tolerance(tol, cap))
    throw NumericalError("jacobi: no convergence within " + std::to_string(cap) + " rotations");
  const auto order = jd.frequency_order();
  const auto d = jd.diagonal();
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = d[order[k]];
  out.eigenvectors = permute_columns(jd.product(), order);
  normalize_column_signs(out.eigenvectors);
  return out;
}

inline EigenDecomposition full_jacobi(const Laplacian& l, double tol = kDefaultEigenTolerance,
                                      std::optional<std::size_t> max_rotations = std::nullopt) {
  return full_jacobi(l.matrix(), tol, max_rotations);
}

}  // namespace fgft
