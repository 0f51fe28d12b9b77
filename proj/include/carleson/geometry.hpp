#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iostream>
#include <limits>
#include <mutex>
#include <span>
#include <sstream>
#include <string>

#include "carleson/error.hpp"
#include "carleson/numerics/finite_difference.hpp"
#include "carleson/numerics/rng.hpp"

namespace carleson {

using cplx = std::complex<double>;
using numerics::kMaxDim;

enum class SpaceKind { Disc, Ball };

/// The ambient domain: the unit disc, or the unit ball of C^n.
class Space {
 public:
  static Space disc() noexcept { return Space(SpaceKind::Disc, 1); }
  static Space ball(int n) {
    if (n < 1) throw InputError("Space: ball dimension must be >= 1");
    return Space(SpaceKind::Ball, n);
  }

  SpaceKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool is_disc() const noexcept { return kind_ == SpaceKind::Disc; }

  /// "disc" or "ball<n>".
  std::string name() const { return is_disc() ? "disc" : "ball" + std::to_string(dim_); }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(SpaceKind k, int n) noexcept : kind_(k), dim_(n) {}
  SpaceKind kind_;
  int dim_;
};

class SpacePoint;

/// Called when a point is constructed with |z|^2 above the conditioning
/// threshold. The default handler writes one line to std::clog.
using ConditioningHandler = std::function<void(const SpacePoint&)>;

namespace detail {

struct ConditioningState {
  std::atomic<double> threshold{1.0 - 1e-8};
  std::mutex mutex;
  ConditioningHandler handler;
};

inline ConditioningState& conditioning_state() {
  static ConditioningState state;
  return state;
}

}  // namespace detail

inline void set_conditioning_threshold(double norm_sq_threshold) noexcept {
  detail::conditioning_state().threshold = norm_sq_threshold;
}
inline double conditioning_threshold() noexcept { return detail::conditioning_state().threshold; }

/// Replaces the conditioning handler; an empty function restores the default.
inline void set_conditioning_handler(ConditioningHandler h) {
  auto& st = detail::conditioning_state();
  std::lock_guard lock(st.mutex);
  st.handler = std::move(h);
}

/// A point of the open unit ball of C^n (n = 1 for the disc), n <= kMaxDim.
class SpacePoint {
 public:
  explicit SpacePoint(std::span<const cplx> coords) : dim_(coords.size()) {
    if (dim_ == 0) throw InputError("SpacePoint: dimension must be >= 1");
    if (dim_ > kMaxDim) throw InputError("SpacePoint: dimension exceeds " + std::to_string(kMaxDim));
    std::copy(coords.begin(), coords.end(), z_.begin());
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!std::isfinite(z_[i].real()) || !std::isfinite(z_[i].imag()))
        throw InputError("SpacePoint: non-finite coordinate");
      s += std::norm(z_[i]);
    }
    norm_sq_ = s;
    if (!(norm_sq_ < 1.0)) {
      std::ostringstream msg;
      msg << "SpacePoint: |z|^2 = " << norm_sq_ << " is not inside the open unit ball";
      throw InputError(msg.str());
    }
    if (norm_sq_ > conditioning_threshold()) warn_conditioning();
  }

  SpacePoint(std::initializer_list<cplx> coords)
      : SpacePoint(std::span<const cplx>(coords.begin(), coords.size())) {}

  static SpacePoint origin(int n) {
    std::array<cplx, kMaxDim> zero{};
    return SpacePoint(std::span<const cplx>(zero.data(), static_cast<std::size_t>(n)));
  }

  std::size_t dim() const noexcept { return dim_; }
  std::span<const cplx> coords() const noexcept { return {z_.data(), dim_}; }
  cplx operator[](std::size_t i) const noexcept { return z_[i]; }
  double norm_sq() const noexcept { return norm_sq_; }
  double norm() const noexcept { return std::sqrt(norm_sq_); }

  friend bool operator==(const SpacePoint& a, const SpacePoint& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.z_[i] != b.z_[i]) return false;
    return true;
  }

  /// Lexicographic order on (Re, Im) of the coordinates.
  friend bool operator<(const SpacePoint& a, const SpacePoint& b) noexcept {
    for (std::size_t i = 0; i < std::min(a.dim_, b.dim_); ++i) {
      if (a.z_[i].real() != b.z_[i].real()) return a.z_[i].real() < b.z_[i].real();
      if (a.z_[i].imag() != b.z_[i].imag()) return a.z_[i].imag() < b.z_[i].imag();
    }
    return a.dim_ < b.dim_;
  }

 private:
  void warn_conditioning() const {
    auto& st = detail::conditioning_state();
    std::lock_guard lock(st.mutex);
    if (st.handler) {
      st.handler(*this);
    } else {
      std::clog << "carleson: warning: point with |z|^2 = " << norm_sq_
                << " is close to the boundary; kernels scale like (1-|z|^2)^-n\n";
    }
  }

  std::size_t dim_;
  std::array<cplx, kMaxDim> z_{};
  double norm_sq_ = 0.0;
};

namespace detail {

inline void require_same_dim(const SpacePoint& a, const SpacePoint& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw InputError(msg.str());
  }
}

inline void require_in_space(const SpacePoint& a, const Space& s, const char* what) {
  if (a.dim() != static_cast<std::size_t>(s.dim())) {
    std::ostringstream msg;
    msg << what << ": point of dimension " << a.dim() << " used in " << s.name();
    throw InputError(msg.str());
  }
}

inline cplx ipow(cplx x, int n) noexcept {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

inline double ipow(double x, int n) noexcept {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace detail

/// Hermitian inner product <z, w> = sum z_i conj(w_i).
inline cplx inner(const SpacePoint& z, const SpacePoint& w) {
  detail::require_same_dim(z, w, "inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

/// Unnormalized Szego kernel K(z, w) = 1 / (1 - <z, w>)^n.
inline cplx szego_kernel(const SpacePoint& z, const SpacePoint& w, const Space& s) {
  detail::require_in_space(z, s, "szego_kernel");
  detail::require_in_space(w, s, "szego_kernel");
  const cplx d = 1.0 - inner(z, w);
  if (std::abs(d) < std::numeric_limits<double>::epsilon())
    throw SingularityError("szego_kernel: |1 - <z,w>| below rounding threshold");
  return 1.0 / detail::ipow(d, s.dim());
}

/// Normalized reproducing kernel k_lambda(z) = (1-|lambda|^2)^{n/2} K(z, lambda).
inline cplx normalized_kernel(const SpacePoint& lambda, const SpacePoint& z, const Space& s) {
  const double scale = std::pow(1.0 - lambda.norm_sq(), 0.5 * s.dim());
  return scale * szego_kernel(z, lambda, s);
}

/// Poisson (Poisson-Szego) kernel P_z(lambda) = (1-|z|^2)^n / |1 - <lambda, z>|^{2n}.
inline double poisson_kernel(const SpacePoint& z, const SpacePoint& lambda, const Space& s) {
  detail::require_in_space(z, s, "poisson_kernel");
  detail::require_in_space(lambda, s, "poisson_kernel");
  const double d = std::norm(1.0 - inner(lambda, z));
  if (d < std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon())
    throw SingularityError("poisson_kernel: |1 - <lambda,z>| below rounding threshold");
  return detail::ipow((1.0 - z.norm_sq()) / d, s.dim());
}

/// Involutive automorphism exchanging lambda and 0:
///   (lambda - P z - sqrt(1-|lambda|^2) Q z) / (1 - <z, lambda>),
/// P the orthogonal projection onto span(lambda), Q = I - P. On the disc this
/// is (lambda - z) / (1 - conj(lambda) z); lambda = 0 gives -z.
inline SpacePoint mobius(const SpacePoint& lambda, const SpacePoint& z, const Space& s) {
  detail::require_in_space(lambda, s, "mobius");
  detail::require_in_space(z, s, "mobius");
  const std::size_t n = z.dim();
  std::array<cplx, kMaxDim> out{};
  if (lambda.norm_sq() == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = -z[i];
    return SpacePoint(std::span<const cplx>(out.data(), n));
  }
  const cplx zl = inner(z, lambda);
  const cplx denom = 1.0 - zl;
  const cplx coef = zl / lambda.norm_sq();
  const double sl = std::sqrt(1.0 - lambda.norm_sq());
  for (std::size_t i = 0; i < n; ++i) {
    const cplx pz = coef * lambda[i];
    const cplx qz = z[i] - pz;
    out[i] = (lambda[i] - pz - sl * qz) / denom;
  }
  return SpacePoint(std::span<const cplx>(out.data(), n));
}

/// Pseudo-hyperbolic distance |mobius(a, b)|.
inline double pseudo_hyperbolic(const SpacePoint& a, const SpacePoint& b, const Space& s) {
  return mobius(a, b, s).norm();
}

/// Multiplies every coordinate by the unimodular constant `phase`.
inline SpacePoint rotate(const SpacePoint& z, cplx phase) {
  std::array<cplx, kMaxDim> out{};
  for (std::size_t i = 0; i < z.dim(); ++i) out[i] = phase * z[i];
  return SpacePoint(std::span<const cplx>(out.data(), z.dim()));
}

/// Uniform sample (with respect to volume) from the ball of radius
/// max_radius < 1 in C^n.
inline SpacePoint random_point(numerics::RngStream& rng, int n, double max_radius) {
  std::array<cplx, kMaxDim> v{};
  double s = 0.0;
  do {
    s = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = cplx(rng.normal(), rng.normal());
      s += std::norm(v[i]);
    }
  } while (s == 0.0);
  const double r = max_radius * std::pow(rng.uniform(), 1.0 / (2.0 * n)) / std::sqrt(s);
  for (int i = 0; i < n; ++i) v[i] *= r;
  return SpacePoint(std::span<const cplx>(v.data(), static_cast<std::size_t>(n)));
}

}  // namespace carleson
