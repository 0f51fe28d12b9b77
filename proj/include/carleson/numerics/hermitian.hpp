#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "carleson/error.hpp"

namespace carleson::numerics {

using cplx = std::complex<double>;

/// Dense Hermitian matrix, row-major. Construction checks Hermitian symmetry
/// against 1e-12 * max|entry| and then rebuilds the lower triangle from the
/// upper one, so downstream code sees an exactly Hermitian array.
class HermitianMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  explicit HermitianMatrix(std::size_t order) : order_(order), a_(order * order) {
    if (order == 0) throw InputError("HermitianMatrix: order must be >= 1");
  }

  HermitianMatrix(std::size_t order, std::vector<cplx> entries)
      : order_(order), a_(std::move(entries)) {
    if (order == 0) throw InputError("HermitianMatrix: order must be >= 1");
    if (a_.size() != order * order)
      throw InputError("HermitianMatrix: entry count does not match order");
    const double dev = hermitian_deviation();
    const double scale = max_abs();
    if (!(dev <= kSymmetryTolerance * scale)) {
      std::ostringstream msg;
      msg << "HermitianMatrix: deviation " << dev << " exceeds " << kSymmetryTolerance
          << " * max|entry| (" << scale << ")";
      throw NumericError(msg.str());
    }
    symmetrize_from_upper();
  }

  std::size_t order() const noexcept { return order_; }
  cplx operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * order_ + j]; }

  /// Sets (i, j) and its mirror (j, i).
  void set(std::size_t i, std::size_t j, cplx v) noexcept {
    if (i == j) {
      a_[i * order_ + i] = cplx(v.real(), 0.0);
    } else {
      a_[i * order_ + j] = v;
      a_[j * order_ + i] = std::conj(v);
    }
  }

  const std::vector<cplx>& entries() const noexcept { return a_; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  double hermitian_deviation() const noexcept {
    double dev = 0.0;
    for (std::size_t i = 0; i < order_; ++i)
      for (std::size_t j = i; j < order_; ++j)
        dev = std::max(dev, std::abs(a_[i * order_ + j] - std::conj(a_[j * order_ + i])));
    return dev;
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
  }

  /// y = A x
  std::vector<cplx> apply(const std::vector<cplx>& x) const {
    std::vector<cplx> y(order_);
    for (std::size_t i = 0; i < order_; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < order_; ++j) s += a_[i * order_ + j] * x[j];
      y[i] = s;
    }
    return y;
  }

 private:
  void symmetrize_from_upper() noexcept {
    for (std::size_t i = 0; i < order_; ++i) {
      a_[i * order_ + i] = cplx(a_[i * order_ + i].real(), 0.0);
      for (std::size_t j = i + 1; j < order_; ++j)
        a_[j * order_ + i] = std::conj(a_[i * order_ + j]);
    }
  }

  std::size_t order_;
  std::vector<cplx> a_;
};

struct ExtremeEigenvalues {
  double min;
  double max;
};

/// Full eigendecomposition: eigenvalues ascending, vectors[k] the unit
/// eigenvector of values[k].
struct EigenSystem {
  std::vector<double> values;
  std::vector<std::vector<cplx>> vectors;
};

namespace detail {

inline double off_diagonal_norm(const std::vector<cplx>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a[i * n + j]);
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq with
/// a diagonal unitary, then applies the classical real rotation.
inline EigenSystem jacobi_eigensystem(const HermitianMatrix& m, int max_sweeps = 100) {
  const std::size_t n = m.order();
  std::vector<cplx> a = m.entries();
  std::vector<cplx> v(n * n, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = std::max(m.frobenius_norm(), std::numeric_limits<double>::min());
  const double target = std::numeric_limits<double>::epsilon() * 0.5 * norm;

  bool converged = false;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a, n) <= target) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        // Negligible against both diagonal entries after a few sweeps.
        if (sweep > 3 && std::abs(app) + 1e2 * mag == std::abs(app) &&
            std::abs(aqq) + 1e2 * mag == std::abs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        const cplx u = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // V restricted to (p, q): [[c, s], [-s*conj(u), c*conj(u)]].
        const cplx vqp = -s * std::conj(u);
        const cplx vqq = c * std::conj(u);
        for (std::size_t r = 0; r < n; ++r) {
          const cplx arp = a[r * n + p];
          const cplx arq = a[r * n + q];
          a[r * n + p] = arp * c + arq * vqp;
          a[r * n + q] = arp * s + arq * vqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a[p * n + k];
          const cplx aqk = a[q * n + k];
          a[p * n + k] = c * apk + std::conj(vqp) * aqk;
          a[q * n + k] = s * apk + std::conj(vqq) * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = cplx(a[p * n + p].real(), 0.0);
        a[q * n + q] = cplx(a[q * n + q].real(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          const cplx vrp = v[r * n + p];
          const cplx vrq = v[r * n + q];
          v[r * n + p] = vrp * c + vrq * vqp;
          v[r * n + q] = vrp * s + vrq * vqq;
        }
      }
    }
  }
  if (!converged && detail::off_diagonal_norm(a, n) > target) {
    std::ostringstream msg;
    msg << "jacobi_eigensystem: no convergence after " << sweep
        << " sweeps, off-diagonal residual " << detail::off_diagonal_norm(a, n)
        << " (target " << target << ")";
    throw NumericError(msg.str());
  }

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t x, std::size_t y) { return a[x * n + x].real() < a[y * n + y].real(); });
  EigenSystem out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t k : idx) {
    out.values.push_back(a[k * n + k].real());
    std::vector<cplx> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

/// Real symmetric tridiagonal matrix with diagonal `diag` and off-diagonal
/// `off` (off.size() == diag.size() - 1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form with the same eigenvalues. The complex sub-diagonal is replaced by its
/// modulus, which is a diagonal unitary similarity.
inline Tridiagonal householder_tridiagonalize(const HermitianMatrix& m) {
  const std::size_t n = m.order();
  std::vector<cplx> a = m.entries();
  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n > 0 ? n - 1 : 0);
  std::vector<cplx> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm_sq = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm_sq += std::norm(a[i * n + k]);
    const double xnorm = std::sqrt(xnorm_sq);
    const cplx x0 = a[(k + 1) * n + k];
    if (xnorm == 0.0) {
      t.off[k] = 0.0;
      continue;
    }
    const double ax0 = std::abs(x0);
    const cplx phase = ax0 == 0.0 ? cplx(1.0) : x0 / ax0;
    const cplx alpha = -phase * xnorm;
    // v = (x - alpha e1) / |x - alpha e1|
    double vnorm_sq = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a[i * n + k];
      if (i == k + 1) v[i] -= alpha;
      vnorm_sq += std::norm(v[i]);
    }
    const double vnorm = std::sqrt(vnorm_sq);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
    // p = A v on the trailing block, gamma = v^H p (real).
    cplx gamma = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a[i * n + j] * v[j];
      p[i] = s;
      gamma += std::conj(v[i]) * s;
    }
    // A <- A - v w^H - w v^H with w = 2p - 2 gamma v.
    for (std::size_t i = k + 1; i < n; ++i) p[i] = 2.0 * p[i] - 2.0 * gamma.real() * v[i];
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx vi = v[i];
      const cplx wi = p[i];
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] -= vi * std::conj(p[j]) + wi * std::conj(v[j]);
    }
    t.off[k] = std::abs(alpha);
    a[(k + 1) * n + k] = alpha;
    a[k * n + (k + 1)] = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) {
      a[i * n + k] = 0.0;
      a[k * n + i] = 0.0;
    }
  }
  if (n >= 2) t.off[n - 2] = std::abs(a[(n - 1) * n + (n - 2)]);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a[i * n + i].real();
  return t;
}

namespace detail {

// Number of eigenvalues of t strictly less than x (Sturm sequence).
inline std::size_t sturm_count(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  std::size_t count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace detail

/// k-th smallest eigenvalue (0-based) of a symmetric tridiagonal matrix by
/// bisection to relative width ~4 eps.
inline double tridiagonal_eigenvalue(const Tridiagonal& t, std::size_t k) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * scale + std::numeric_limits<double>::min();
  hi += 1e-12 * scale + std::numeric_limits<double>::min();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))
      break;
    if (detail::sturm_count(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Orders up to this use Jacobi; above it Householder + bisection.
inline constexpr std::size_t kJacobiMaxOrder = 512;

/// Smallest and largest eigenvalue of a Hermitian matrix.
inline ExtremeEigenvalues extreme_eigs(const HermitianMatrix& m) {
  if (m.order() <= kJacobiMaxOrder) {
    const EigenSystem es = jacobi_eigensystem(m);
    return {es.values.front(), es.values.back()};
  }
  const Tridiagonal t = householder_tridiagonalize(m);
  return {tridiagonal_eigenvalue(t, 0), tridiagonal_eigenvalue(t, m.order() - 1)};
}

}  // namespace carleson::numerics
