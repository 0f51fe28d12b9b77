#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/calculus/laplacian.hpp"
#include "carleson/numerics/quadrature.hpp"

namespace carleson {

/// log(1/|z|); +infinity at the origin.
inline double green_weight_disc(double radius) {
  if (radius == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(radius);
}

inline double green_weight_disc(const SpacePoint& z) {
  detail::require_in_space(z, Space::disc(), "green_weight_disc");
  return green_weight_disc(z.norm());
}

/// Invariant Green function of the ball of C^n with pole at the origin,
///   G(r) = ((n+1)/(2n)) int_r^1 (1-t^2)^{n-1} t^{1-2n} dt,
/// as a function of r = |z|. Equal to log(1/r) for n = 1.
inline double green_function_radius(double r, int n) {
  if (n < 1) throw InputError("green_function_radius: dimension must be >= 1");
  if (!(r >= 0.0 && r < 1.0)) {
    std::ostringstream msg;
    msg << "green_function_radius: radius " << r << " outside [0, 1)";
    throw InputError(msg.str());
  }
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  const double scale = (n + 1.0) / (2.0 * n);
  if (n == 1) return scale * -std::log(r);
  const double x = 1.0 - r * r;
  if (x <= 0.5) {
    // Substituting s = 1 - t^2 and expanding (1-s)^{-n}:
    //   int = (1/2) sum_m C(n+m-1, m) x^{n+m} / (n+m),
    // free of the cancellation in the antiderivative near the boundary.
    double c = 1.0;
    double xp = detail::ipow(x, n);
    double sum = 0.0;
    for (int m = 0; m < 4000; ++m) {
      const double term = c * xp / (n + m);
      sum += term;
      if (term <= 1e-17 * sum) break;
      c *= static_cast<double>(n + m) / (m + 1.0);
      xp *= x;
    }
    return scale * 0.5 * sum;
  }
  // Binomial expansion of (1-t^2)^{n-1}, integrated term by term.
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n - 1; ++k) {
    const int e = 2 * k - 2 * n + 2;  // exponent of the antiderivative
    const double piece = (e == 0) ? -std::log(r) : (1.0 - std::pow(r, e)) / e;
    sum += ((k % 2 == 0) ? 1.0 : -1.0) * binom * piece;
    binom = binom * (n - 1 - k) / (k + 1.0);
  }
  return scale * sum;
}

inline double green_function_ball(const SpacePoint& z, const Space& s) {
  detail::require_in_space(z, s, "green_function_ball");
  return green_function_radius(z.norm(), s.dim());
}

/// (n!)^2 / (2n)! = 2n int_0^1 (1-r^2)^n r^{2n-1} dr.
inline double beta_constant(int n) {
  if (n < 1) throw InputError("beta_constant: dimension must be >= 1");
  double v = 1.0;
  for (int k = 1; k <= n; ++k) v *= static_cast<double>(k) / (n + k);
  return v;
}

struct GreenCheck {
  double lhs;
  double rhs;
  double gap;
};

/// Weight against dV that turns a Laplacian into the Green side of the
/// formula: (1/2pi) log(1/|z|) on the disc, (n!/pi^n) G(z) (1-|z|^2)^{-(n+1)}
/// on the ball.
inline double green_volume_weight(std::span<const cplx> z, const Space& s) {
  const double zz = detail::norm_sq(z);
  if (s.is_disc()) return green_weight_disc(std::sqrt(zz)) / (2.0 * std::numbers::pi);
  const int n = s.dim();
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= k / std::numbers::pi;
  return c * green_function_radius(std::sqrt(zz), n) / detail::ipow(1.0 - zz, n + 1);
}

/// Green's formula on the given space: the Laplacian side by volume
/// quadrature (flat Laplacian on the disc, invariant on the ball) against the
/// boundary mean minus u(0). `laplacian` replaces the finite-difference
/// Laplacian when supplied.
template <class U, class L = double (*)(std::span<const cplx>)>
GreenCheck greens_formula_check(U&& u, const Space& s, const numerics::QuadratureSpec& q,
                                const std::optional<L>& laplacian = std::nullopt,
                                const StencilOptions& stencil = {}) {
  const int n = s.dim();
  auto integrand = [&](std::span<const cplx> z) {
    double lap;
    if (laplacian) {
      lap = (*laplacian)(z);
    } else if (s.is_disc()) {
      auto op = [&](double h) { return numerics::flat_laplacian(u, z, h); };
      lap = stencil.richardson ? numerics::richardson(op, stencil.h) : op(stencil.h);
    } else {
      auto op = [&](double h) { return numerics::invariant_laplacian(u, z, h); };
      lap = stencil.richardson ? numerics::richardson(op, stencil.h) : op(stencil.h);
    }
    return lap * green_volume_weight(z, s);
  };
  const double lhs = numerics::volume_quadrature_checked(integrand, q, n);
  auto boundary = [&](std::span<const cplx> z) { return u(z); };
  const std::array<cplx, kMaxDim> zero{};
  const double rhs = numerics::boundary_quadrature_checked(boundary, q, n) -
                     u(std::span<const cplx>(zero.data(), static_cast<std::size_t>(n)));
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace carleson
