#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/measure.hpp"
#include "carleson/numerics/parallel.hpp"
#include "carleson/numerics/rng.hpp"

namespace carleson {

/// A(mu)^2 / C_supp(mu); invariant under mu -> c mu.
inline double ratio(const DiscreteMeasure& mu) {
  return embedding_norm_sq(mu) / kernel_constant_on_support(mu);
}

struct SearchConfig {
  Space space = Space::disc();
  int atom_count = 2;
  int iterations = 1000;
  int restarts = 4;
  std::uint64_t seed = 42;
  double step_init = 0.5;
  double step_decay = 0.7;
  /// Consecutive rejected proposals before the step shrinks.
  int patience = 20;

  void validate() const {
    if (atom_count < 1) throw InputError("SearchConfig: atom_count must be >= 1");
    if (iterations < 1 || restarts < 1) throw InputError("SearchConfig: iterations and restarts must be >= 1");
    if (!(step_init > 0.0)) throw InputError("SearchConfig: step_init must be > 0");
    if (!(step_decay > 0.0 && step_decay < 1.0)) throw InputError("SearchConfig: step_decay must lie in (0, 1)");
    if (patience < 1) throw InputError("SearchConfig: patience must be >= 1");
  }
};

struct TracePoint {
  std::size_t iteration;
  double best_ratio;
};

struct SearchFailure {
  int restart;
  std::size_t iteration;
  std::string message;
};

/// An evaluated ratio above theorem_bound_constant * (1 + kTheoremSlack).
struct BoundViolation {
  int restart;
  std::size_t iteration;
  double ratio;
};

struct SearchResult {
  double best_ratio = 0.0;
  std::optional<DiscreteMeasure> best_measure;
  std::vector<TracePoint> trace;
  std::uint64_t seed = 0;
  std::vector<SearchFailure> failures;
  std::vector<BoundViolation> violations;
};

namespace detail {

// Radius parameters are clamped here so that tanh stays strictly below 1.
inline constexpr double kMaxRadiusParam = 8.0;

// Per atom: [s, Re u_1, Im u_1, ..., Re u_n, Im u_n, v]; the atom is
// tanh(s) u/|u| with weight e^v.
struct SearchState {
  int dim;
  std::vector<double> params;

  std::size_t stride() const { return 2 * static_cast<std::size_t>(dim) + 2; }

  DiscreteMeasure measure(const Space& s) const {
    std::vector<Atom> atoms;
    const std::size_t count = params.size() / stride();
    atoms.reserve(count);
    for (std::size_t a = 0; a < count; ++a) {
      const double* p = params.data() + a * stride();
      std::array<cplx, kMaxDim> u{};
      double len = 0.0;
      for (int i = 0; i < dim; ++i) {
        u[i] = cplx(p[1 + 2 * i], p[2 + 2 * i]);
        len += std::norm(u[i]);
      }
      len = std::sqrt(len);
      const double r = std::tanh(std::clamp(std::abs(p[0]), 0.0, kMaxRadiusParam));
      for (int i = 0; i < dim; ++i) u[i] = len > 0.0 ? u[i] * (r / len) : cplx(i == 0 ? r : 0.0);
      atoms.push_back({SpacePoint(std::span<const cplx>(u.data(), static_cast<std::size_t>(dim))),
                       std::exp(std::clamp(p[stride() - 1], -50.0, 50.0))});
    }
    return {s, std::move(atoms)};
  }
};

struct RestartOutcome {
  double best_ratio = 0.0;
  std::optional<DiscreteMeasure> best_measure;
  std::vector<double> trace;  // best-so-far after each iteration
  std::optional<SearchFailure> failure;
  std::vector<BoundViolation> violations;
};

inline RestartOutcome run_restart(const SearchConfig& cfg, int restart) {
  RestartOutcome out;
  numerics::RngStream rng(cfg.seed, static_cast<std::uint64_t>(restart));
  const int n = cfg.space.dim();
  SearchState state{n, {}};
  const std::size_t stride = state.stride();
  state.params.resize(stride * static_cast<std::size_t>(cfg.atom_count));
  for (std::size_t a = 0; a < static_cast<std::size_t>(cfg.atom_count); ++a) {
    double* p = state.params.data() + a * stride;
    p[0] = rng.uniform(0.0, 2.0);
    for (std::size_t i = 1; i + 1 < stride; ++i) p[i] = rng.normal();
    p[stride - 1] = 0.5 * rng.normal();
  }
  const double limit = theorem_bound_constant(cfg.space) * (1.0 + kTheoremSlack);
  std::size_t iteration = 0;
  auto evaluate = [&](const SearchState& s) {
    DiscreteMeasure mu = s.measure(cfg.space);
    const double r = ratio(mu);
    if (!std::isfinite(r)) throw NumericError("search: non-finite ratio");
    if (r > limit) out.violations.push_back({restart, iteration, r});
    return std::pair{r, std::move(mu)};
  };
  try {
    auto [r0, mu0] = evaluate(state);
    out.best_ratio = r0;
    out.best_measure = std::move(mu0);
    double step = cfg.step_init;
    int rejected = 0;
    SearchState proposal = state;
    for (; iteration < static_cast<std::size_t>(cfg.iterations); ++iteration) {
      for (std::size_t i = 0; i < state.params.size(); ++i) proposal.params[i] = state.params[i] + step * rng.normal();
      auto [r, mu] = evaluate(proposal);
      if (r > out.best_ratio) {
        out.best_ratio = r;
        out.best_measure = std::move(mu);
        state.params = proposal.params;
        rejected = 0;
      } else if (++rejected >= cfg.patience) {
        step *= cfg.step_decay;
        rejected = 0;
      }
      out.trace.push_back(out.best_ratio);
    }
  } catch (const Error& e) {
    out.failure = SearchFailure{restart, iteration, e.what()};
  }
  return out;
}

}  // namespace detail

/// Random-restart hill climbing for large A(mu)^2 / C_supp(mu) over measures
/// with cfg.atom_count atoms. Restart r draws from RngStream(seed, r); the
/// result is identical for identical configs regardless of thread count.
/// The trace has one row per iteration, indexed r * iterations + it, holding
/// the best ratio seen so far across restarts 0..r.
inline SearchResult search(const SearchConfig& cfg) {
  cfg.validate();
  const auto outcomes = numerics::parallel_map<detail::RestartOutcome>(
      static_cast<std::size_t>(cfg.restarts), [&](std::size_t r) { return detail::run_restart(cfg, static_cast<int>(r)); });
  SearchResult res;
  res.seed = cfg.seed;
  double running = 0.0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& o = outcomes[r];
    if (o.best_measure && o.best_ratio > res.best_ratio) {
      res.best_ratio = o.best_ratio;
      res.best_measure = o.best_measure;
    }
    for (std::size_t it = 0; it < o.trace.size(); ++it) {
      running = std::max(running, o.trace[it]);
      res.trace.push_back({r * static_cast<std::size_t>(cfg.iterations) + it, running});
    }
    if (o.failure) res.failures.push_back(*o.failure);
    res.violations.insert(res.violations.end(), o.violations.begin(), o.violations.end());
  }
  return res;
}

}  // namespace carleson
