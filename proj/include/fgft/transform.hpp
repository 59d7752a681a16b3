#pragma once

// The approximate Fourier matrix Û = S_1…S_J·P as an operator: a list of
// Givens rotations, a column permutation P ordering modes by estimated
// frequency, and the estimated eigenvalues.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fgft/csv.hpp"
#include "fgft/error.hpp"
#include "fgft/givens.hpp"
#include "fgft/graph.hpp"
#include "fgft/matrix.hpp"

namespace fgft {

class FactoredTransform {
 public:
  FactoredTransform() = default;

  /// `perm[k]` is the column of S_1…S_J that becomes mode k.
  FactoredTransform(std::size_t n, std::vector<GivensRotation> rotations,
                    std::vector<std::size_t> perm, std::vector<double> lambda_hat,
                    std::size_t j_requested)
      : n_(n),
        rotations_(std::move(rotations)),
        perm_(std::move(perm)),
        lambda_hat_(std::move(lambda_hat)),
        j_requested_(j_requested) {
    require(perm_.size() == n_, "transform: permutation length differs from n");
    require(lambda_hat_.size() == n_, "transform: eigenvalue count differs from n");
    std::vector<bool> seen(n_, false);
    for (std::size_t v : perm_) {
      require(v < n_ && !seen[v], "transform: perm is not a bijection");
      seen[v] = true;
    }
    require(std::is_sorted(lambda_hat_.begin(), lambda_hat_.end()),
            "transform: estimated eigenvalues must be non-decreasing");
    for (const auto& g : rotations_)
      require(g.p < g.q && g.q < n_, "transform: rotation index out of range");
    require(j_requested_ >= rotations_.size(), "transform: more rotations than requested");
  }

  std::size_t size() const { return n_; }
  const std::vector<GivensRotation>& rotations() const { return rotations_; }
  const std::vector<std::size_t>& perm() const { return perm_; }
  const std::vector<double>& lambda_hat() const { return lambda_hat_; }
  std::size_t j_requested() const { return j_requested_; }
  std::size_t j_actual() const { return rotations_.size(); }

  friend bool operator==(const FactoredTransform&, const FactoredTransform&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<GivensRotation> rotations_;
  std::vector<std::size_t> perm_;
  std::vector<double> lambda_hat_;
  std::size_t j_requested_ = 0;
};

enum class SignalDomain { vertex, spectral };

inline std::string_view to_string(SignalDomain d) {
  return d == SignalDomain::vertex ? "vertex" : "spectral";
}

struct SignalVector {
  std::vector<double> values;
  SignalDomain domain = SignalDomain::vertex;
};

/// Arithmetic tally for the fast transforms.
struct OpCounter {
  std::size_t multiplications = 0;
  std::size_t additions = 0;
  std::size_t total() const { return multiplications + additions; }
};

namespace detail {

// x ← Gᵀx on coordinates (p, q): 4 multiplications, 2 additions.
inline void rotate_transposed(std::span<double> x, const GivensRotation& g) {
  const double a = x[g.p], b = x[g.q];
  x[g.p] = g.c * a + g.s * b;
  x[g.q] = -g.s * a + g.c * b;
}

// x ← Gx
inline void rotate(std::span<double> x, const GivensRotation& g) {
  const double a = x[g.p], b = x[g.q];
  x[g.p] = g.c * a - g.s * b;
  x[g.q] = g.s * a + g.c * b;
}

}  // namespace detail

/// Ûᵀx = Pᵀ·S_Jᵀ…S_1ᵀ·x in 6·J flops plus an index gather.
inline SignalVector analyze(const FactoredTransform& t, const SignalVector& x,
                            OpCounter* counter = nullptr) {
  require(x.domain == SignalDomain::vertex, "analyze: input must be a vertex-domain signal");
  require(x.values.size() == t.size(), "analyze: signal length differs from transform size");
  std::vector<double> work = x.values;
  for (const auto& g : t.rotations()) detail::rotate_transposed(work, g);
  if (counter) {
    counter->multiplications += 4 * t.j_actual();
    counter->additions += 2 * t.j_actual();
  }
  SignalVector out{std::vector<double>(t.size()), SignalDomain::spectral};
  for (std::size_t k = 0; k < t.size(); ++k) out.values[k] = work[t.perm()[k]];
  return out;
}

/// Ûx̃ = S_1…S_J·P·x̃, the exact inverse of analyze.
inline SignalVector synthesize(const FactoredTransform& t, const SignalVector& xt,
                               OpCounter* counter = nullptr) {
  require(xt.domain == SignalDomain::spectral, "synthesize: input must be a spectral signal");
  require(xt.values.size() == t.size(), "synthesize: signal length differs from transform size");
  std::vector<double> work(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) work[t.perm()[k]] = xt.values[k];
  const auto& rots = t.rotations();
  for (auto it = rots.rbegin(); it != rots.rend(); ++it) detail::rotate(work, *it);
  if (counter) {
    counter->multiplications += 4 * t.j_actual();
    counter->additions += 2 * t.j_actual();
  }
  return {std::move(work), SignalDomain::vertex};
}

/// Applies a column permutation: out column k = in column perm[k].
inline Matrix permute_columns(const Matrix& a, std::span<const std::size_t> perm) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto src = a.row(r);
    auto dst = out.row(r);
    for (std::size_t k = 0; k < perm.size(); ++k) dst[k] = src[perm[k]];
  }
  return out;
}

/// Dense Û; column k is the k-th approximate Fourier mode.
inline Matrix to_dense(const FactoredTransform& t) {
  Matrix acc = Matrix::identity(t.size());
  for (const auto& g : t.rotations()) rotate_columns(acc, g);
  return permute_columns(acc, t.perm());
}

/// ‖L − Û·Λ̂·Ûᵀ‖_F
inline double approx_laplacian_residual(const FactoredTransform& t, const Matrix& l) {
  require(l.square() && l.rows() == t.size(), "residual: dimension mismatch");
  const Matrix u = to_dense(t);
  Matrix scaled = u;
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t k = 0; k < u.cols(); ++k) scaled(r, k) *= t.lambda_hat()[k];
  const Matrix approx = scaled * u.transposed();
  double acc = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i)
    for (std::size_t j = 0; j < l.cols(); ++j) {
      const double d = l(i, j) - approx(i, j);
      acc += d * d;
    }
  return std::sqrt(acc);
}

inline double approx_laplacian_residual(const FactoredTransform& t, const Laplacian& l) {
  return approx_laplacian_residual(t, l.matrix());
}

// Text format:
//   n J
//   p q theta        (J lines, 1-based indices, θ in radians)
//   perm             (n 1-based integers on one line)
//   lambda_hat       (n reals on one line)
// Reals use 17 significant digits, which round-trips doubles exactly.
// J is the number of stored rotations; the requested budget is not kept.

inline void write_transform(std::ostream& os, const FactoredTransform& t) {
  os << t.size() << ' ' << t.j_actual() << '\n';
  for (const auto& g : t.rotations())
    os << (g.p + 1) << ' ' << (g.q + 1) << ' ' << format_real(g.theta) << '\n';
  for (std::size_t k = 0; k < t.size(); ++k) os << (k ? " " : "") << (t.perm()[k] + 1);
  os << '\n';
  for (std::size_t k = 0; k < t.size(); ++k) os << (k ? " " : "") << format_real(t.lambda_hat()[k]);
  os << '\n';
  if (!os) throw IoError("failed to write transform");
}

inline FactoredTransform read_transform(std::istream& is) {
  std::size_t n = 0, j = 0;
  if (!(is >> n >> j) || n == 0) throw IoError("transform: bad header, expected 'n J'");
  std::vector<GivensRotation> rotations;
  rotations.reserve(j);
  for (std::size_t i = 0; i < j; ++i) {
    std::size_t p = 0, q = 0;
    double theta = 0.0;
    if (!(is >> p >> q >> theta)) throw IoError("transform: truncated rotation list");
    if (p < 1 || q < 1 || p >= q || q > n) throw IoError("transform: rotation index out of range");
    rotations.emplace_back(p - 1, q - 1, theta);
  }
  std::vector<std::size_t> perm(n);
  for (auto& v : perm) {
    if (!(is >> v) || v < 1 || v > n) throw IoError("transform: bad permutation entry");
    --v;
  }
  std::vector<double> lambda(n);
  for (auto& v : lambda)
    if (!(is >> v)) throw IoError("transform: truncated eigenvalue list");
  try {
    return FactoredTransform(n, std::move(rotations), std::move(perm), std::move(lambda), j);
  } catch (const InvalidArgument& e) {
    throw IoError(e.what());
  }
}

// Signal CSV: header "n=<n> domain=<vertex|spectral>", then one value per line.

inline void write_signal(std::ostream& os, const SignalVector& x) {
  os << "n=" << x.values.size() << " domain=" << to_string(x.domain) << '\n';
  for (double v : x.values) os << format_real(v) << '\n';
  if (!os) throw IoError("failed to write signal");
}

inline SignalVector read_signal(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("signal: missing header");
  std::size_t n = 0;
  char domain[16] = {};
  if (std::sscanf(header.c_str(), "n=%zu domain=%15s", &n, domain) != 2)
    throw IoError("signal: header must read 'n=<n> domain=<vertex|spectral>'");
  SignalVector x;
  const std::string_view d(domain);
  if (d == "vertex") x.domain = SignalDomain::vertex;
  else if (d == "spectral") x.domain = SignalDomain::spectral;
  else throw IoError("signal: unknown domain '" + std::string(d) + "'");
  x.values.resize(n);
  for (auto& v : x.values)
    if (!(is >> v)) throw IoError("signal: fewer values than announced");
  return x;
}

}  // namespace fgft
