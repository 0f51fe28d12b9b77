#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <sstream>

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/measure.hpp"
#include "carleson/numerics/finite_difference.hpp"

namespace carleson {

/// Finite-difference options. Richardson combines steps h and h/2.
struct StencilOptions {
  double h = 1e-3;
  bool richardson = false;
};

namespace detail {

inline void require_stencil_margin(const SpacePoint& z, double h, const char* what) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    std::ostringstream msg;
    msg << what << ": step h = " << h << " must be positive";
    throw InputError(msg.str());
  }
  if (!(z.norm() + 2.0 * h < 1.0)) {
    std::ostringstream msg;
    msg << what << ": stencil of step " << h << " at |z| = " << z.norm() << " leaves the unit ball";
    throw InputError(msg.str());
  }
}

// Kernel data of one atom at a point given by raw coordinates.
struct KernelTerms {
  double poisson;        // P_z(lambda)
  double poisson_root;   // P_lambda(z)^{1/n} = (1-|lambda|^2) / |1 - <z,lambda>|^2
};

inline KernelTerms kernel_terms(std::span<const cplx> z, double z_norm_sq, const SpacePoint& lambda) {
  cplx zl = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) zl += z[i] * std::conj(lambda[i]);
  const double d = std::norm(1.0 - zl);
  const int n = static_cast<int>(z.size());
  return {ipow((1.0 - z_norm_sq) / d, n), (1.0 - lambda.norm_sq()) / d};
}

inline double norm_sq(std::span<const cplx> z) noexcept {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

// Carleson potential and its (flat on the disc, invariant on the ball)
// Laplacian in one pass over the atoms.
struct PotentialData {
  double phi;
  double laplacian;
};

inline PotentialData potential_data(const DiscreteMeasure& mu, std::span<const cplx> z) {
  const double zz = norm_sq(z);
  const int n = mu.space().dim();
  numerics::CompensatedSum phi, lap;
  for (const auto& a : mu.atoms()) {
    const KernelTerms k = kernel_terms(z, zz, a.point);
    phi.add(-a.weight * k.poisson);
    if (mu.space().is_disc()) {
      // 4 (1-|lambda|^2) / |1 - conj(lambda) z|^4
      lap.add(a.weight * 4.0 * k.poisson_root * k.poisson_root / (1.0 - a.point.norm_sq()));
    } else {
      lap.add(a.weight * k.poisson * k.poisson_root);
    }
  }
  double l = lap.value();
  if (!mu.space().is_disc()) l *= 4.0 * n * n / (n + 1.0) * (1.0 - zz);
  return {phi.value(), l};
}

}  // namespace detail

/// Flat Laplacian by the central stencil (5-point on the disc).
template <class U>
double laplacian_fd(U&& u, const SpacePoint& z, const StencilOptions& opt = {}) {
  detail::require_stencil_margin(z, opt.h, "laplacian_fd");
  auto op = [&](double h) { return numerics::flat_laplacian(u, z.coords(), h); };
  return opt.richardson ? numerics::richardson(op, opt.h) : op(opt.h);
}

template <class U>
double laplacian_fd(U&& u, const SpacePoint& z, double h) {
  return laplacian_fd(u, z, StencilOptions{h, false});
}

/// Delta_z P_z(lambda) = 4(|lambda|^2 - 1) / |1 - conj(lambda) z|^4 on the disc.
inline double laplacian_poisson_disc(const SpacePoint& z, const SpacePoint& lambda) {
  detail::require_in_space(z, Space::disc(), "laplacian_poisson_disc");
  detail::require_in_space(lambda, Space::disc(), "laplacian_poisson_disc");
  const double d = std::norm(1.0 - std::conj(lambda[0]) * z[0]);
  return 4.0 * (lambda.norm_sq() - 1.0) / (d * d);
}

/// Laplacian of the Carleson potential, minus the sum of the atom Laplacians:
/// flat on the disc, invariant on the ball. Non-negative.
inline double potential_laplacian_closed(const DiscreteMeasure& mu, const SpacePoint& z) {
  detail::require_in_space(z, mu.space(), "potential_laplacian_closed");
  return detail::potential_data(mu, z.coords()).laplacian;
}

/// Invariant Laplacian 4 sum g^{ij} dbar_i d_j u by central differences.
template <class U>
double invariant_laplacian_fd(U&& u, const SpacePoint& z, const Space& s, const StencilOptions& opt = {}) {
  detail::require_in_space(z, s, "invariant_laplacian_fd");
  detail::require_stencil_margin(z, opt.h, "invariant_laplacian_fd");
  auto op = [&](double h) { return numerics::invariant_laplacian(u, z.coords(), h); };
  return opt.richardson ? numerics::richardson(op, opt.h) : op(opt.h);
}

template <class U>
double invariant_laplacian_fd(U&& u, const SpacePoint& z, const Space& s, double h) {
  return invariant_laplacian_fd(u, z, s, StencilOptions{h, false});
}

/// Invariant Laplacian of z -> P_z(lambda):
/// -(4n^2/(n+1)) (1-|z|^2) P_z(lambda) P_lambda(z)^{1/n}.
inline double invariant_laplacian_poisson_ball(const SpacePoint& z, const SpacePoint& lambda, const Space& s) {
  detail::require_in_space(z, s, "invariant_laplacian_poisson_ball");
  detail::require_in_space(lambda, s, "invariant_laplacian_poisson_ball");
  const int n = s.dim();
  const auto k = detail::kernel_terms(z.coords(), z.norm_sq(), lambda);
  return -4.0 * n * n / (n + 1.0) * (1.0 - z.norm_sq()) * k.poisson * k.poisson_root;
}

/// Holomorphic partial d/dz_j of z -> P_z(lambda), j zero-based.
inline cplx poisson_gradient_ball(const SpacePoint& z, const SpacePoint& lambda, int j) {
  detail::require_same_dim(z, lambda, "poisson_gradient_ball");
  const int n = static_cast<int>(z.dim());
  if (j < 0 || j >= n) {
    std::ostringstream msg;
    msg << "poisson_gradient_ball: coordinate index " << j << " outside [0, " << n << ")";
    throw InputError(msg.str());
  }
  const auto k = detail::kernel_terms(z.coords(), z.norm_sq(), lambda);
  const cplx zl = inner(z, lambda);
  const auto ju = static_cast<std::size_t>(j);
  return static_cast<double>(n) *
         (std::conj(lambda[ju]) / (1.0 - zl) - std::conj(z[ju]) / (1.0 - z.norm_sq())) * k.poisson;
}

}  // namespace carleson
