#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <type_traits>

namespace carleson::numerics {

using cplx = std::complex<double>;

/// Largest complex dimension handled by the fixed-size coordinate buffers.
inline constexpr std::size_t kMaxDim = 8;

/// Central-difference stencils on C^n viewed as R^{2n}: real index 2j is
/// Re z_j, 2j + 1 is Im z_j. The callable is evaluated at raw coordinates and
/// must be defined on an h-neighbourhood of the point; no domain checks here.
template <class U>
class RealStencil {
 public:
  RealStencil(U& u, std::span<const cplx> z, double h) : u_(u), dim_(z.size()), h_(h) {
    if (dim_ > kMaxDim) throw std::length_error("RealStencil: dimension exceeds kMaxDim");
    std::copy(z.begin(), z.end(), base_.begin());
  }

  std::size_t real_dim() const noexcept { return 2 * dim_; }

  /// d^2 u / dx_a dx_b
  double second(std::size_t a, std::size_t b) const {
    if (a == b) {
      return (eval({{a, h_}}) - 2.0 * eval({}) + eval({{a, -h_}})) / (h_ * h_);
    }
    return (eval({{a, h_}, {b, h_}}) - eval({{a, h_}, {b, -h_}}) - eval({{a, -h_}, {b, h_}}) +
            eval({{a, -h_}, {b, -h_}})) /
           (4.0 * h_ * h_);
  }

  /// du / dx_a
  double first(std::size_t a) const { return (eval({{a, h_}}) - eval({{a, -h_}})) / (2.0 * h_); }

  /// Flat Laplacian, sum of the 2n pure second differences (5-point stencil
  /// on the disc).
  double laplacian() const {
    double center = eval({});
    double s = 0.0;
    for (std::size_t a = 0; a < real_dim(); ++a) s += eval({{a, h_}}) + eval({{a, -h_}}) - 2.0 * center;
    return s / (h_ * h_);
  }

  /// dbar_i d_j u = (u_{x_i x_j} + u_{y_i y_j} + i (u_{y_i x_j} - u_{x_i y_j})) / 4
  cplx mixed_complex(std::size_t i, std::size_t j) const {
    const std::size_t xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
    return 0.25 * cplx(second(xi, xj) + second(yi, yj), second(yi, xj) - second(xi, yj));
  }

  /// d_j u = (u_x - i u_y) / 2
  cplx holomorphic_partial(std::size_t j) const {
    return 0.5 * cplx(first(2 * j), -first(2 * j + 1));
  }

 private:
  struct Shift {
    std::size_t index;
    double delta;
  };

  double eval(std::initializer_list<Shift> shifts) const {
    std::array<cplx, kMaxDim> z = base_;
    for (const auto& s : shifts) {
      const std::size_t j = s.index / 2;
      if (s.index % 2 == 0)
        z[j] += s.delta;
      else
        z[j] += cplx(0.0, s.delta);
    }
    return u_(std::span<const cplx>(z.data(), dim_));
  }

  U& u_;
  std::size_t dim_;
  std::array<cplx, kMaxDim> base_{};
  double h_;
};

/// Flat Laplacian of u at z by central differences.
template <class U>
double flat_laplacian(U&& u, std::span<const cplx> z, double h) {
  return RealStencil<std::remove_reference_t<U>>(u, z, h).laplacian();
}

/// Invariant (Bergman) Laplacian 4 sum_{ij} g^{ij} dbar_i d_j u with
/// g^{ij} = (1 - |z|^2)/(n + 1) (delta_ij - conj(z_i) z_j).
template <class U>
double invariant_laplacian(U&& u, std::span<const cplx> z, double h) {
  const std::size_t n = z.size();
  const RealStencil<std::remove_reference_t<U>> st(u, z, h);
  double norm_sq = 0.0;
  for (const auto& c : z) norm_sq += std::norm(c);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx g = (i == j ? 1.0 : 0.0) - std::conj(z[i]) * z[j];
      acc += g * st.mixed_complex(i, j);
    }
  }
  return 4.0 * (1.0 - norm_sq) / static_cast<double>(n + 1) * acc.real();
}

/// Richardson extrapolation of a second-order difference: (4 L(h/2) - L(h)) / 3.
template <class L>
double richardson(L&& op, double h) {
  return (4.0 * op(0.5 * h) - op(h)) / 3.0;
}

}  // namespace carleson::numerics
