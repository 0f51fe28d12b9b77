#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <vector>

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/numerics/rng.hpp"

namespace carleson {

using MultiIndex = std::array<int, kMaxDim>;

/// Analytic polynomial sum_alpha a_alpha z^alpha in n complex variables.
/// Terms are kept sorted by multi-index; zero coefficients are never stored.
class MultiPoly {
 public:
  struct Term {
    MultiIndex alpha{};
    cplx coeff;
  };

  explicit MultiPoly(int dim) : dim_(dim) {
    if (dim < 1 || static_cast<std::size_t>(dim) > kMaxDim)
      throw InputError("MultiPoly: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }

  /// Adds coeff * z^alpha, merging with an existing term of the same index.
  void add_term(std::span<const int> alpha, cplx coeff) {
    if (alpha.size() != static_cast<std::size_t>(dim_)) {
      std::ostringstream msg;
      msg << "MultiPoly: multi-index of length " << alpha.size() << " for dimension " << dim_;
      throw InputError(msg.str());
    }
    MultiIndex key{};
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] < 0) throw InputError("MultiPoly: negative exponent");
      key[i] = alpha[i];
    }
    if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag()))
      throw InputError("MultiPoly: non-finite coefficient");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, const MultiIndex& k) { return t.alpha < k; });
    if (it != terms_.end() && it->alpha == key) {
      it->coeff += coeff;
      if (it->coeff == cplx(0.0)) terms_.erase(it);
    } else if (coeff != cplx(0.0)) {
      terms_.insert(it, Term{key, coeff});
    }
  }

  void add_term(std::initializer_list<int> alpha, cplx coeff) {
    add_term(std::span<const int>(alpha.begin(), alpha.size()), coeff);
  }

  int dim() const noexcept { return dim_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  int degree() const noexcept {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, total_degree(t.alpha));
    return d;
  }

  static int total_degree(const MultiIndex& a) noexcept {
    int s = 0;
    for (int v : a) s += v;
    return s;
  }

  cplx operator()(std::span<const cplx> z) const {
    cplx s = 0.0;
    for (const auto& t : terms_) {
      cplx m = t.coeff;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < t.alpha[i]; ++k) m *= z[i];
      s += m;
    }
    return s;
  }

  cplx operator()(const SpacePoint& z) const { return (*this)(z.coords()); }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) noexcept {
    if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].alpha != b.terms_[i].alpha || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }

 private:
  int dim_;
  std::vector<Term> terms_;
};

/// ||z^alpha||^2 in H^2 of the ball of C^n with sigma(S) = 1:
/// (n-1)! alpha! / (n-1+|alpha|)!; equal to 1 for every monomial when n = 1.
inline double monomial_norm_sq(const MultiIndex& alpha, int n) {
  double log_v = std::lgamma(static_cast<double>(n));
  int total = 0;
  for (int i = 0; i < n; ++i) {
    log_v += std::lgamma(static_cast<double>(alpha[i]) + 1.0);
    total += alpha[i];
  }
  log_v -= std::lgamma(static_cast<double>(n + total));
  return std::exp(log_v);
}

/// Squared Hardy norm. Monomials are orthogonal on the circle and sphere.
inline double hardy_norm_sq(const MultiPoly& f, const Space& s) {
  if (f.dim() != s.dim()) {
    std::ostringstream msg;
    msg << "hardy_norm_sq: polynomial in " << f.dim() << " variables on " << s.name();
    throw InputError(msg.str());
  }
  double acc = 0.0;
  for (const auto& t : f.terms()) acc += std::norm(t.coeff) * monomial_norm_sq(t.alpha, s.dim());
  return acc;
}

/// Every monomial of total degree <= max_degree with standard complex normal
/// coefficients.
inline MultiPoly random_poly(numerics::RngStream& rng, int dim, int max_degree) {
  MultiPoly f(dim);
  std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
  // Enumerate multi-indices with |alpha| <= max_degree in lexicographic order.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim) {
      f.add_term(std::span<const int>(alpha), cplx(rng.normal(), rng.normal()) / std::sqrt(2.0));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      alpha[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, remaining - k);
    }
    alpha[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, max_degree);
  return f;
}

}  // namespace carleson
