#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/numerics/hermitian.hpp"
#include "carleson/numerics/parallel.hpp"
#include "carleson/numerics/rng.hpp"
#include "carleson/numerics/summation.hpp"

namespace carleson {

struct Atom {
  SpacePoint point;
  double weight;
};

/// Finite positive combination of point masses on a Space. Atoms sharing a
/// point are merged at construction by summing their weights; the order of
/// first occurrence is preserved.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Space space, std::vector<Atom> atoms) : space_(space) {
    if (atoms.empty()) throw InputError("DiscreteMeasure: at least one atom is required");
    std::map<SpacePoint, std::size_t> seen;
    for (auto& a : atoms) {
      detail::require_in_space(a.point, space_, "DiscreteMeasure");
      if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
        std::ostringstream msg;
        msg << "DiscreteMeasure: weight " << a.weight << " is not a positive finite number";
        throw InputError(msg.str());
      }
      auto [it, inserted] = seen.emplace(a.point, atoms_.size());
      if (inserted)
        atoms_.push_back(a);
      else
        atoms_[it->second].weight += a.weight;
    }
  }

  const Space& space() const noexcept { return space_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const noexcept { return atoms_[i]; }

  double total_mass() const noexcept {
    numerics::CompensatedSum s;
    for (const auto& a : atoms_) s.add(a.weight);
    return s.value();
  }

  DiscreteMeasure scaled(double c) const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    for (auto& a : out) a.weight *= c;
    return {space_, std::move(out)};
  }

  DiscreteMeasure rotated(cplx phase) const {
    std::vector<Atom> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back({rotate(a.point, phase), a.weight});
    return {space_, std::move(out)};
  }

  DiscreteMeasure with_atom(const Atom& extra) const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    out.push_back(extra);
    return {space_, std::move(out)};
  }

 private:
  Space space_;
  std::vector<Atom> atoms_;
};

/// Sum_j w_j P_z(lambda_j) = ||k_z||^2 in L^2(mu), in fixed atom order.
inline double kernel_mass(const DiscreteMeasure& mu, const SpacePoint& z) {
  numerics::CompensatedSum s;
  for (const auto& a : mu.atoms()) s.add(a.weight * poisson_kernel(z, a.point, mu.space()));
  return s.value();
}

/// Carleson potential phi(z) = -integral of P_z(lambda) dmu(lambda).
inline double carleson_potential(const DiscreteMeasure& mu, const SpacePoint& z) {
  return -kernel_mass(mu, z);
}

/// sup over atoms lambda_k of ||k_{lambda_k}||^2 in L^2(mu).
inline double kernel_constant_on_support(const DiscreteMeasure& mu) {
  double best = 0.0;
  for (const auto& a : mu.atoms()) best = std::max(best, kernel_mass(mu, a.point));
  return best;
}

namespace detail {

inline constexpr double kGridOuterRadius = 1.0 - 1e-4;
inline constexpr std::size_t kMaxGridAnchors = 16;
inline constexpr std::uint64_t kGridDirectionSeed = 0xC0FFEE5EEDULL;

// Largest power of two <= resolution; grids at successive levels are nested.
inline int grid_level(int resolution) {
  if (resolution < 8) throw InputError("kernel grid: resolution must be >= 8");
  int n = 8;
  while (n <= resolution / 2) n *= 2;
  return n;
}

// Chebyshev-Lobatto radii on [0, kGridOuterRadius].
inline std::vector<double> grid_radii(int level) {
  std::vector<double> r(static_cast<std::size_t>(level) + 1);
  for (int k = 0; k <= level; ++k)
    r[k] = kGridOuterRadius * 0.5 * (1.0 - std::cos(std::numbers::pi * k / level));
  return r;
}

// Atoms with the largest self-mass w / (1-|lambda|^2)^n, nonzero radius only,
// at most kMaxGridAnchors. Depends only on rotation-invariant data.
inline std::vector<std::size_t> grid_anchor_atoms(const DiscreteMeasure& mu) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i].point.norm_sq() > 0.0) idx.push_back(i);
  auto self_mass = [&](std::size_t i) {
    return mu[i].weight / ipow(1.0 - mu[i].point.norm_sq(), mu.space().dim());
  };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return self_mass(a) > self_mass(b); });
  if (idx.size() > kMaxGridAnchors) idx.resize(kMaxGridAnchors);
  return idx;
}

// Unit directions for the ball grid: anchor atom directions, then a fixed
// pseudo-random sequence whose first `count` entries are used.
inline std::vector<std::array<cplx, kMaxDim>> grid_directions(const DiscreteMeasure& mu, std::size_t count) {
  const int n = mu.space().dim();
  std::vector<std::array<cplx, kMaxDim>> dirs;
  for (std::size_t i : grid_anchor_atoms(mu)) {
    std::array<cplx, kMaxDim> d{};
    const double r = mu[i].point.norm();
    for (int c = 0; c < n; ++c) d[c] = mu[i].point[c] / r;
    dirs.push_back(d);
  }
  numerics::RngStream rng(kGridDirectionSeed, static_cast<std::uint64_t>(n));
  for (std::size_t k = 0; k < count; ++k) {
    std::array<cplx, kMaxDim> d{};
    double s = 0.0;
    for (int c = 0; c < n; ++c) {
      d[c] = cplx(rng.normal(), rng.normal());
      s += std::norm(d[c]);
    }
    s = std::sqrt(s);
    for (int c = 0; c < n; ++c) d[c] /= s;
    dirs.push_back(d);
  }
  return dirs;
}

}  // namespace detail

/// Effective grid resolution used for a requested resolution (largest power
/// of two not above it).
inline int effective_grid_resolution(int resolution) { return detail::grid_level(resolution); }

/// Deterministic polar grid of interior points, excluding the atoms.
/// Disc: Chebyshev radii x uniform angles offset by each anchor atom's
/// argument, so the grid rotates with the measure. Ball: Chebyshev radii x
/// (anchor directions + 4 * level fixed pseudo-random directions).
/// Grids for resolutions 2^k are nested in k.
inline std::vector<SpacePoint> kernel_grid(const DiscreteMeasure& mu, int resolution) {
  const int level = detail::grid_level(resolution);
  const auto radii = detail::grid_radii(level);
  const int n = mu.space().dim();
  std::vector<SpacePoint> pts;
  pts.push_back(SpacePoint::origin(n));
  if (n == 1) {
    std::vector<double> anchors;
    for (std::size_t i : detail::grid_anchor_atoms(mu)) anchors.push_back(std::arg(mu[i].point[0]));
    if (anchors.empty()) anchors.push_back(0.0);
    for (std::size_t k = 1; k < radii.size(); ++k)
      for (double a : anchors)
        for (int j = 0; j < level; ++j)
          pts.push_back(SpacePoint{std::polar(radii[k], a + 2.0 * std::numbers::pi * j / level)});
  } else {
    const auto dirs = detail::grid_directions(mu, 4 * static_cast<std::size_t>(level));
    for (std::size_t k = 1; k < radii.size(); ++k)
      for (const auto& d : dirs) {
        std::array<cplx, kMaxDim> z{};
        for (int c = 0; c < n; ++c) z[c] = radii[k] * d[c];
        pts.emplace_back(std::span<const cplx>(z.data(), static_cast<std::size_t>(n)));
      }
  }
  return pts;
}

/// sup_z ||k_z||^2 in L^2(mu) over kernel_grid union the atoms; a lower bound
/// of the supremum over the whole domain.
inline double kernel_constant_grid(const DiscreteMeasure& mu, int resolution) {
  const auto pts = kernel_grid(mu, resolution);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (pts.size() + kChunk - 1) / kChunk;
  const auto partial = numerics::parallel_map<double>(chunks, [&](std::size_t c) {
    double best = 0.0;
    const std::size_t end = std::min(pts.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) best = std::max(best, kernel_mass(mu, pts[i]));
    return best;
  });
  double best = kernel_constant_on_support(mu);
  for (double v : partial) best = std::max(best, v);
  return best;
}

/// Lower-bound estimate of sup mu(Q(xi, r)) / r over boundary centers xi and
/// radii r, disc only. For each candidate center the supremum over r is taken
/// exactly at the jump radii |lambda_j - xi|. Candidate centers are `directions`
/// equally spaced points starting at the argument of each anchor atom.
inline double box_constant(const DiscreteMeasure& mu, int directions) {
  if (mu.space().dim() != 1)
    throw UnsupportedError("box_constant: boxes are defined for the disc only");
  if (directions < 16) throw InputError("box_constant: directions must be >= 16");
  std::vector<double> anchors;
  for (std::size_t i : detail::grid_anchor_atoms(mu)) anchors.push_back(std::arg(mu[i].point[0]));
  if (anchors.empty()) anchors.push_back(0.0);

  std::vector<std::pair<double, double>> dist(mu.size());
  double best = 0.0;
  for (double a : anchors) {
    for (int k = 0; k < directions; ++k) {
      const cplx xi = std::polar(1.0, a + 2.0 * std::numbers::pi * k / directions);
      for (std::size_t j = 0; j < mu.size(); ++j) dist[j] = {std::abs(mu[j].point[0] - xi), mu[j].weight};
      std::sort(dist.begin(), dist.end());
      double mass = 0.0;
      for (const auto& [d, w] : dist) {
        mass += w;
        best = std::max(best, mass / d);
      }
    }
  }
  return best;
}

/// Practical limit on the atom count for the dense eigenproblem.
inline constexpr std::size_t kMaxEmbeddingAtoms = 2000;

/// M_jk = sqrt(w_j w_k) K(lambda_j, lambda_k); both triangles are evaluated
/// so that the Hermitian check is meaningful.
inline numerics::HermitianMatrix embedding_matrix(const DiscreteMeasure& mu) {
  const std::size_t n = mu.size();
  if (n > kMaxEmbeddingAtoms)
    throw InputError("embedding_norm_sq: more than " + std::to_string(kMaxEmbeddingAtoms) + " atoms");
  std::vector<cplx> entries(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      entries[j * n + k] = std::sqrt(mu[j].weight * mu[k].weight) *
                           szego_kernel(mu[j].point, mu[k].point, mu.space());
  return numerics::HermitianMatrix(n, std::move(entries));
}

/// Extreme eigenvalues of the embedding matrix.
inline numerics::ExtremeEigenvalues embedding_spectrum(const DiscreteMeasure& mu) {
  return numerics::extreme_eigs(embedding_matrix(mu));
}

/// Exact best constant A(mu)^2 in  integral |f|^2 dmu <= A^2 ||f||^2_{H^2}:
/// the top eigenvalue of T T^* for f -> (sqrt(w_j) f(lambda_j)).
inline double embedding_norm_sq(const DiscreteMeasure& mu) {
  return std::max(0.0, embedding_spectrum(mu).max);
}

/// 2e on the disc, e (2n)! / (n!)^2 on the ball of C^n.
inline double theorem_bound_constant(const Space& s) {
  const int n = s.dim();
  double central = 1.0;  // (2n)! / (n!)^2
  for (int k = 1; k <= n; ++k) central *= static_cast<double>(n + k) / k;
  return std::numbers::e * central;
}

struct AnalysisReport {
  Space space = Space::disc();
  std::size_t atom_count = 0;
  double a_sq = 0.0;
  double c_supp = 0.0;
  double c_grid = 0.0;
  std::optional<double> i_box;
  double bound = 0.0;
  double ratio = 0.0;
  bool holds = false;
  int grid_resolution = 0;
};

inline constexpr double kTheoremSlack = 1e-9;

inline AnalysisReport analyze(const DiscreteMeasure& mu, int resolution) {
  AnalysisReport r;
  r.space = mu.space();
  r.atom_count = mu.size();
  r.grid_resolution = effective_grid_resolution(resolution);
  r.a_sq = embedding_norm_sq(mu);
  r.c_supp = kernel_constant_on_support(mu);
  r.c_grid = kernel_constant_grid(mu, resolution);
  if (mu.space().dim() == 1) r.i_box = box_constant(mu, std::max(16, resolution));
  r.bound = theorem_bound_constant(mu.space()) * r.c_supp;
  r.ratio = r.a_sq / r.c_supp;
  r.holds = r.a_sq <= r.bound * (1.0 + kTheoremSlack);
  return r;
}

/// Seeded random measure: up to max_atoms atoms, radii uniform in volume up to
/// max_radius, log-normal weights.
inline DiscreteMeasure random_measure(numerics::RngStream& rng, const Space& s, std::size_t max_atoms,
                                      double max_radius) {
  const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_atoms));
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < std::min(count, max_atoms); ++i)
    atoms.push_back({random_point(rng, s.dim(), max_radius), std::exp(rng.normal())});
  return {s, std::move(atoms)};
}

}  // namespace carleson
