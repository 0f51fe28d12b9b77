#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/measure.hpp"
#include "carleson/numerics/hermitian.hpp"
#include "carleson/numerics/summation.hpp"

namespace carleson {

/// Finite sequence of distinct points of the disc.
class PointSequence {
 public:
  explicit PointSequence(std::vector<SpacePoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw InputError("PointSequence: at least one point is required");
    for (const auto& p : points_) detail::require_in_space(p, Space::disc(), "PointSequence");
    std::vector<SpacePoint> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] == sorted[i - 1]) {
        std::ostringstream msg;
        msg << "PointSequence: duplicate point " << sorted[i][0] << " (separation constant would be 0)";
        throw InputError(msg.str());
      }
    }
  }

  PointSequence(std::initializer_list<cplx> points) : PointSequence(to_points(points)) {}

  Space space() const noexcept { return Space::disc(); }
  std::size_t size() const noexcept { return points_.size(); }
  const SpacePoint& operator[](std::size_t i) const noexcept { return points_[i]; }
  const std::vector<SpacePoint>& points() const noexcept { return points_; }

 private:
  static std::vector<SpacePoint> to_points(std::initializer_list<cplx> zs) {
    std::vector<SpacePoint> out;
    for (const cplx& z : zs) out.push_back(SpacePoint{z});
    return out;
  }

  std::vector<SpacePoint> points_;
};

/// min_k prod_{j != k} |lambda_k - lambda_j| / |1 - conj(lambda_j) lambda_k|,
/// accumulated as a compensated sum of logarithms.
inline double carleson_delta(const PointSequence& seq) {
  double min_log = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    numerics::CompensatedSum log_prod;
    const cplx lk = seq[k][0];
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (j == k) continue;
      const cplx lj = seq[j][0];
      log_prod.add(std::log(std::abs(lk - lj)) - std::log(std::abs(1.0 - std::conj(lj) * lk)));
    }
    min_log = std::min(min_log, log_prod.value());
  }
  return std::exp(min_log);
}

/// sum_k (1 - |lambda_k|^2) delta_{lambda_k}.
inline DiscreteMeasure sequence_measure(const PointSequence& seq) {
  std::vector<Atom> atoms;
  atoms.reserve(seq.size());
  for (const auto& p : seq.points()) atoms.push_back({p, 1.0 - p.norm_sq()});
  return {Space::disc(), std::move(atoms)};
}

/// Gram matrix of the normalized kernels,
///   G_jk = sqrt((1-|l_j|^2)(1-|l_k|^2)) / (1 - l_j conj(l_k)).
inline numerics::HermitianMatrix gram_matrix(const PointSequence& seq) {
  const std::size_t n = seq.size();
  if (n > kMaxEmbeddingAtoms)
    throw InputError("gram_matrix: more than " + std::to_string(kMaxEmbeddingAtoms) + " points");
  std::vector<cplx> entries(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx lj = seq[j][0], lk = seq[k][0];
      entries[j * n + k] = (j == k) ? cplx(1.0)
                                    : std::sqrt((1.0 - std::norm(lj)) * (1.0 - std::norm(lk))) /
                                          (1.0 - lj * std::conj(lk));
    }
  }
  return numerics::HermitianMatrix(n, std::move(entries));
}

/// ||J|| ||J^{-1}|| for the orthogonalizer J = G^{-1/2}: sqrt(lmax / lmin).
inline double orthogonalizer_cond(const PointSequence& seq) {
  const auto eig = numerics::extreme_eigs(gram_matrix(seq));
  if (!(eig.min > 1e-14 * eig.max)) {
    std::ostringstream msg;
    msg << "orthogonalizer_cond: Gram matrix is numerically singular (lambda_min = " << eig.min
        << ", lambda_max = " << eig.max << ")";
    throw NumericError(msg.str());
  }
  return std::sqrt(eig.max / eig.min);
}

struct InterpolationReport {
  std::size_t point_count = 0;
  double delta = 0.0;
  double k_sq = 0.0;
  double k_sq_bound = 0.0;       // 2e (1 + 2 ln 1/delta)
  double c_supp = 0.0;
  double gram_cond_root = 0.0;
  double orth_bound = 0.0;       // k_sq / delta
  double interp_constant = 0.0;  // 2e (1/delta)(1 + 2 ln 1/delta)
  double kernel_sup = 0.0;
  double kernel_sup_bound = 0.0;  // 1 + 2 ln 1/delta
  int grid_resolution = 0;
  bool orth_holds = false;        // gram_cond_root <= orth_bound
  bool k_sq_holds = false;        // k_sq <= k_sq_bound
  bool kernel_sup_holds = false;  // kernel_sup <= kernel_sup_bound; reported, not asserted
};

inline constexpr double kInterpolationSlack = 1e-9;

inline InterpolationReport interpolation_report(const PointSequence& seq, int resolution) {
  InterpolationReport r;
  r.point_count = seq.size();
  r.delta = carleson_delta(seq);
  if (!(r.delta > 0.0)) throw NumericError("interpolation_report: separation constant underflows to 0");
  const double log_inv = -std::log(r.delta);
  const DiscreteMeasure mu = sequence_measure(seq);
  r.k_sq = embedding_norm_sq(mu);
  r.c_supp = kernel_constant_on_support(mu);
  r.k_sq_bound = 2.0 * std::numbers::e * (1.0 + 2.0 * log_inv);
  r.gram_cond_root = orthogonalizer_cond(seq);
  r.orth_bound = r.k_sq / r.delta;
  r.interp_constant = r.k_sq_bound / r.delta;
  r.kernel_sup = kernel_constant_grid(mu, resolution);
  r.kernel_sup_bound = 1.0 + 2.0 * log_inv;
  r.grid_resolution = effective_grid_resolution(resolution);
  const double slack = 1.0 + kInterpolationSlack;
  r.orth_holds = r.gram_cond_root <= r.orth_bound * slack;
  r.k_sq_holds = r.k_sq <= r.k_sq_bound * slack;
  r.kernel_sup_holds = r.kernel_sup <= r.kernel_sup_bound * slack;
  return r;
}

/// Seeded random sequence of up to max_points points, uniform by area in the
/// disc of radius max_radius.
inline PointSequence random_sequence(numerics::RngStream& rng, std::size_t max_points, double max_radius) {
  const std::size_t count =
      std::min(max_points, 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_points)));
  std::vector<SpacePoint> pts;
  for (std::size_t i = 0; i < count; ++i) pts.push_back(random_point(rng, 1, max_radius));
  return PointSequence(std::move(pts));
}

}  // namespace carleson
