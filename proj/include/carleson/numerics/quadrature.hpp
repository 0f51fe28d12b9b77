#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "carleson/error.hpp"
#include "carleson/numerics/parallel.hpp"
#include "carleson/numerics/summation.hpp"

namespace carleson::numerics {

using cplx = std::complex<double>;

/// Orders of the product rules used for area, volume and boundary integrals.
///   radial_order   Gauss-Legendre nodes in the radial variable
///   angular_order  trapezoid nodes per periodic angle
///   sphere_nodes   Gauss-Legendre nodes in the Hopf polar variable (ball)
///   tol            convergence tolerance for the *_checked variants
struct QuadratureSpec {
  int radial_order = 64;
  int angular_order = 64;
  int sphere_nodes = 16;
  double tol = 1e-6;

  void validate() const {
    if (radial_order < 4 || angular_order < 4 || sphere_nodes < 4)
      throw InputError("QuadratureSpec: all orders must be >= 4");
    if (radial_order > 512 || sphere_nodes > 512)
      throw InputError("QuadratureSpec: Gauss-Legendre orders are limited to 512");
    if (!(tol > 0.0)) throw InputError("QuadratureSpec: tol must be > 0");
  }

  /// Every order scaled by 3/4: the companion rule for convergence checks.
  QuadratureSpec coarsened() const {
    auto shrink = [](int k) { return std::max(4, (3 * k) / 4); };
    return {shrink(radial_order), shrink(angular_order), shrink(sphere_nodes), tol};
  }
};

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1], Newton iteration
/// on the three-term recurrence.
inline GaussLegendreRule gauss_legendre(int order) {
  if (order < 1 || order > 512) throw InputError("gauss_legendre: order must be in [1, 512]");
  const auto n = static_cast<std::size_t>(order);
  GaussLegendreRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace detail {

// Nodes t_i in (0, 1) and weights for a Gauss-Legendre rule mapped to [0, 1].
inline GaussLegendreRule unit_interval_rule(int order) {
  GaussLegendreRule r = gauss_legendre(order);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

template <class F>
double checked_eval(F& f, std::span<const cplx> z) {
  const double v = f(z);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "quadrature: non-finite integrand value " << v << " at node (";
    for (std::size_t i = 0; i < z.size(); ++i) msg << (i ? ", " : "") << z[i];
    msg << ")";
    throw NumericError(msg.str());
  }
  return v;
}

}  // namespace detail

/// Integral over the unit disc against unnormalized area dA. Radius r = t^2
/// with Gauss-Legendre in t, trapezoid in the angle. The origin is never a node
/// and the grading absorbs log-type singularities at 0.
template <class F>
double disc_quadrature(F&& f, const QuadratureSpec& q) {
  q.validate();
  const GaussLegendreRule radial = detail::unit_interval_rule(q.radial_order);
  const int m = q.angular_order;
  const double dtheta = 2.0 * std::numbers::pi / m;
  auto ring = [&](std::size_t i) {
    const double t = radial.nodes[i];
    const double r = t * t;
    CompensatedSum acc;
    for (int k = 0; k < m; ++k) {
      const std::array<cplx, 1> z{std::polar(r, dtheta * k)};
      acc.add(detail::checked_eval(f, z));
    }
    return radial.weights[i] * 2.0 * t * r * dtheta * acc.value();
  };
  const auto rings = parallel_map<double>(radial.nodes.size(), ring);
  return compensated_sum(rings);
}

namespace detail {

// Normalized surface integral over the sphere of C^2 (the 3-sphere) of g(r*zeta)
// in Hopf coordinates zeta = (sqrt(1-s) e^{ia}, sqrt(s) e^{ib}); sigma = ds da db / (4 pi^2).
template <class F>
double sphere3_mean(F& f, double r, const GaussLegendreRule& polar, int m) {
  const double dang = 2.0 * std::numbers::pi / m;
  CompensatedSum acc;
  for (std::size_t j = 0; j < polar.nodes.size(); ++j) {
    const double s = polar.nodes[j];
    const double c1 = r * std::sqrt(1.0 - s);
    const double c2 = r * std::sqrt(s);
    CompensatedSum inner;
    for (int a = 0; a < m; ++a) {
      const cplx z1 = std::polar(c1, dang * a);
      for (int b = 0; b < m; ++b) {
        const std::array<cplx, 2> z{z1, std::polar(c2, dang * b)};
        inner.add(checked_eval(f, z));
      }
    }
    acc.add(polar.weights[j] * inner.value());
  }
  return acc.value() / (static_cast<double>(m) * m);
}

}  // namespace detail

/// Integral over the unit ball of C^2 against unnormalized volume dV
/// (total volume pi^2 / 2).
template <class F>
double ball_quadrature(F&& f, const QuadratureSpec& q) {
  q.validate();
  const GaussLegendreRule radial = detail::unit_interval_rule(q.radial_order);
  const GaussLegendreRule polar = detail::unit_interval_rule(q.sphere_nodes);
  const double area = 2.0 * std::numbers::pi * std::numbers::pi;  // |S^3|
  auto shell = [&](std::size_t i) {
    const double t = radial.nodes[i];
    const double r = t * t;
    const double jac = 2.0 * t * r * r * r;
    return radial.weights[i] * jac * area * detail::sphere3_mean(f, r, polar, q.angular_order);
  };
  const auto shells = parallel_map<double>(radial.nodes.size(), shell);
  return compensated_sum(shells);
}

/// Integral over the unit ball of C^n (n = 1 is the disc) against dV.
template <class F>
double volume_quadrature(F&& f, const QuadratureSpec& q, int n) {
  if (n == 1) return disc_quadrature(f, q);
  if (n == 2) return ball_quadrature(f, q);
  throw UnsupportedError("volume_quadrature: integration is implemented for complex dimension 1 and 2 only");
}

/// Mean over the boundary sphere against the normalized measure (m(T) = 1,
/// sigma(S) = 1).
template <class F>
double boundary_quadrature(F&& f, const QuadratureSpec& q, int n) {
  q.validate();
  if (n == 1) {
    const int m = q.angular_order;
    CompensatedSum acc;
    for (int k = 0; k < m; ++k) {
      const std::array<cplx, 1> z{std::polar(1.0, 2.0 * std::numbers::pi * k / m)};
      acc.add(detail::checked_eval(f, z));
    }
    return acc.value() / m;
  }
  if (n == 2) {
    const GaussLegendreRule polar = detail::unit_interval_rule(q.sphere_nodes);
    return detail::sphere3_mean(f, 1.0, polar, q.angular_order);
  }
  throw UnsupportedError("boundary_quadrature: integration is implemented for complex dimension 1 and 2 only");
}

namespace detail {

inline void require_converged(const char* what, double fine, double coarse, double tol) {
  const double diff = std::abs(fine - coarse);
  if (!(diff <= tol * std::max(1.0, std::abs(fine)))) {
    std::ostringstream msg;
    msg << what << ": quadrature not converged, |I(q) - I(3q/4)| = " << diff << " with I(q) = " << fine
        << " (tol " << tol << ")";
    throw NumericError(msg.str());
  }
}

}  // namespace detail

/// volume_quadrature, cross-checked against the 3/4-order companion rule;
/// throws NumericError when they differ by more than q.tol * max(1, |I|).
template <class F>
double volume_quadrature_checked(F&& f, const QuadratureSpec& q, int n) {
  const double fine = volume_quadrature(f, q, n);
  const double coarse = volume_quadrature(f, q.coarsened(), n);
  detail::require_converged("volume_quadrature", fine, coarse, q.tol);
  return fine;
}

template <class F>
double boundary_quadrature_checked(F&& f, const QuadratureSpec& q, int n) {
  const double fine = boundary_quadrature(f, q, n);
  const double coarse = boundary_quadrature(f, q.coarsened(), n);
  detail::require_converged("boundary_quadrature", fine, coarse, q.tol);
  return fine;
}

}  // namespace carleson::numerics
