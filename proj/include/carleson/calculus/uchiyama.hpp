#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include "carleson/calculus/green.hpp"
#include "carleson/calculus/laplacian.hpp"
#include "carleson/calculus/polynomial.hpp"
#include "carleson/error.hpp"
#include "carleson/measure.hpp"
#include "carleson/numerics/quadrature.hpp"

namespace carleson {

namespace detail {

inline void require_poly_space(const MultiPoly& f, const Space& s, const char* what) {
  if (f.dim() != s.dim()) {
    std::ostringstream msg;
    msg << what << ": polynomial in " << f.dim() << " variables on " << s.name();
    throw InputError(msg.str());
  }
}

// Density of nu against dA (disc) or dV (ball) at raw coordinates, with or
// without the e^phi factor.
inline double uchiyama_density_raw(const DiscreteMeasure& mu, std::span<const cplx> z, bool with_exp) {
  const PotentialData p = potential_data(mu, z);
  if (p.laplacian == 0.0) return 0.0;
  const double w = green_volume_weight(z, mu.space());
  return (with_exp ? std::exp(p.phi) : 1.0) * p.laplacian * w;
}

}  // namespace detail

/// Density of the Uchiyama measure nu against dA (disc) or dV (ball):
///   disc: (1/2pi) e^phi Delta phi log(1/|z|)
///   ball: (n!/pi^n) e^phi Delta~phi G(z) (1-|z|^2)^{-(n+1)}
/// with phi the Carleson potential of mu. +infinity at the origin unless mu
/// is zero there.
inline double uchiyama_density(const DiscreteMeasure& mu, const SpacePoint& z) {
  detail::require_in_space(z, mu.space(), "uchiyama_density");
  return detail::uchiyama_density_raw(mu, z.coords(), true);
}

struct EmbeddingCheck {
  double integral;
  double norm_sq;
};

/// int |f|^2 dnu next to ||f||^2 in H^2.
inline EmbeddingCheck uchiyama_embedding_check(const DiscreteMeasure& mu, const MultiPoly& f,
                                               const numerics::QuadratureSpec& q) {
  detail::require_poly_space(f, mu.space(), "uchiyama_embedding_check");
  const double norm_sq = hardy_norm_sq(f, mu.space());
  if (f.is_zero()) return {0.0, 0.0};
  auto integrand = [&](std::span<const cplx> z) {
    return std::norm(f(z)) * detail::uchiyama_density_raw(mu, z, true);
  };
  return {numerics::volume_quadrature_checked(integrand, q, mu.space().dim()), norm_sq};
}

struct CorollaryCheck {
  double integral;
  double bound;
  double phi_sup;
  int grid_resolution;
};

/// int |f|^2 dnu without the e^phi factor, against e ||phi||_inf ||f||^2.
/// ||phi||_inf is max(c_grid, c_supp) at the given grid resolution.
inline CorollaryCheck corollary_check(const DiscreteMeasure& mu, const MultiPoly& f,
                                      const numerics::QuadratureSpec& q, int resolution = 64) {
  detail::require_poly_space(f, mu.space(), "corollary_check");
  const double phi_sup = kernel_constant_grid(mu, resolution);
  const int res = effective_grid_resolution(resolution);
  const double bound = std::numbers::e * phi_sup * hardy_norm_sq(f, mu.space());
  if (f.is_zero()) return {0.0, 0.0, phi_sup, res};
  auto integrand = [&](std::span<const cplx> z) {
    return std::norm(f(z)) * detail::uchiyama_density_raw(mu, z, false);
  };
  return {numerics::volume_quadrature_checked(integrand, q, mu.space().dim()), bound, phi_sup, res};
}

struct KeyInequalityCheck {
  double lhs;
  double rhs;
};

/// Pointwise inequality at the atom lambda = mu[index]:
///   (n!/pi^n) int |f|^2 e^phi (1-|lambda|^2)(1-|z|^2)^n / |1-<z,lambda>|^{2n+2} dV
///     >= beta(n) e^{phi(lambda)} |f(lambda)|^2,
/// beta(n) = (n!)^2/(2n)! (1/2 on the disc).
inline KeyInequalityCheck key_inequality_check(const DiscreteMeasure& mu, const MultiPoly& f, std::size_t index,
                                               const numerics::QuadratureSpec& q) {
  detail::require_poly_space(f, mu.space(), "key_inequality_check");
  if (index >= mu.size()) {
    std::ostringstream msg;
    msg << "key_inequality_check: atom index " << index << " out of range for " << mu.size() << " atoms";
    throw InputError(msg.str());
  }
  const int n = mu.space().dim();
  const SpacePoint& lambda = mu[index].point;
  const double rhs =
      beta_constant(n) * std::exp(carleson_potential(mu, lambda)) * std::norm(f(lambda.coords()));
  if (f.is_zero()) return {0.0, rhs};
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= k / std::numbers::pi;
  const double ll = 1.0 - lambda.norm_sq();
  auto integrand = [&](std::span<const cplx> z) {
    const double zz = detail::norm_sq(z);
    cplx zl = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) zl += z[i] * std::conj(lambda[i]);
    const double d = std::norm(1.0 - zl);
    const double kernel = ll * detail::ipow(1.0 - zz, n) / detail::ipow(d, n + 1);
    return std::norm(f(z)) * std::exp(detail::potential_data(mu, z).phi) * kernel;
  };
  return {c * numerics::volume_quadrature_checked(integrand, q, n), rhs};
}

}  // namespace carleson
