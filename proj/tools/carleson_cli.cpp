// Command-line front end. Exit codes: 0 ok, 1 usage, 2 invalid input,
// 3 inequality violated, 4 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carleson/carleson.hpp"
#include "carleson/io.hpp"

namespace {

using namespace carleson;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 3;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    io::write_text(out_path, text);
}

Space parse_space_flag(const std::string& name) {
  if (name == "disc") return Space::disc();
  if (name == "ball2") return Space::ball(2);
  throw InputError("unknown space '" + name + "' (expected disc or ball2)");
}

numerics::QuadratureSpec quad_spec(const Space& s, int order, double tol) {
  numerics::QuadratureSpec q;
  q.radial_order = order;
  q.angular_order = order;
  // The polar Hopf variable needs far fewer nodes than the two angles.
  q.sphere_nodes = s.is_disc() ? 16 : std::max(8, order / 4);
  q.tol = tol;
  return q;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string path;
  int grid = 64;
  std::string out;
  std::string format = "json";
};

int cmd_analyze(const AnalyzeArgs& a) {
  const DiscreteMeasure mu = io::load_measure(a.path);
  const AnalysisReport r = analyze(mu, a.grid);
  emit(a.format == "csv" ? io::to_csv(r) : io::to_json(r).dump(2) + "\n", a.out);
  if (!r.holds) {
    std::cerr << "carleson: theorem inequality violated: a_sq = " << r.a_sq << " > bound = " << r.bound << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

// ------------------------------------------------------ verify-identities

struct VerifyArgs {
  std::string space = "disc";
  int samples = 100;
  std::uint64_t seed = 42;
  double fd_step = 1e-3;
  double tol = 1e-5;
  std::optional<double> radius;
};

struct CheckRow {
  std::string name;
  int samples = 0;
  double max_error = 0.0;
};

double rel_error(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

int cmd_verify(const VerifyArgs& a) {
  const Space s = parse_space_flag(a.space);
  const int n = s.dim();
  // Sampling radius: keeps the FD truncation error of the kernel Laplacians
  // well below the default tolerance.
  const double radius = a.radius.value_or(s.is_disc() ? 0.5 : 0.7);
  if (!(radius > 0.0 && radius < 1.0)) throw InputError("--radius must lie in (0, 1)");
  numerics::RngStream rng(a.seed, 0);
  std::vector<CheckRow> rows = {{"mobius_involution"}, {"mobius_norm_identity"}, {"pseudo_hyperbolic_symmetry"},
                                {"kernel_modulus"}};
  rows.push_back({s.is_disc() ? "poisson_laplacian_disc" : "invariant_laplacian_poisson"});
  if (!s.is_disc()) rows.push_back({"poisson_gradient"});
  const StencilOptions st{a.fd_step, false};
  for (int k = 0; k < a.samples; ++k) {
    const SpacePoint z = random_point(rng, n, radius);
    const SpacePoint lambda = random_point(rng, n, radius);
    auto record = [&](std::size_t row, double err) {
      rows[row].samples += 1;
      rows[row].max_error = std::max(rows[row].max_error, err);
    };
    const SpacePoint back = mobius(lambda, mobius(lambda, z, s), s);
    double diff = 0.0;
    for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(back[i] - z[i]));
    record(0, diff);
    const double d = std::norm(1.0 - inner(z, lambda));
    record(1, rel_error(1.0 - mobius(lambda, z, s).norm_sq(), (1.0 - lambda.norm_sq()) * (1.0 - z.norm_sq()) / d));
    record(2, std::abs(pseudo_hyperbolic(z, lambda, s) - pseudo_hyperbolic(lambda, z, s)));
    record(3, rel_error(std::norm(normalized_kernel(z, lambda, s)), poisson_kernel(z, lambda, s)));
    auto poisson_at = [&](std::span<const cplx> w) {
      double ww = 0.0;
      cplx wl = 0.0;
      for (int i = 0; i < n; ++i) {
        ww += std::norm(w[i]);
        wl += lambda[i] * std::conj(w[i]);
      }
      return std::pow((1.0 - ww) / std::norm(1.0 - wl), n);
    };
    if (s.is_disc()) {
      record(4, rel_error(laplacian_fd(poisson_at, z, st), laplacian_poisson_disc(z, lambda)));
    } else {
      record(4, rel_error(invariant_laplacian_fd(poisson_at, z, s, st), invariant_laplacian_poisson_ball(z, lambda, s)));
      const numerics::RealStencil<decltype(poisson_at)> stencil(poisson_at, z.coords(), a.fd_step);
      // Error relative to the gradient norm; single components may nearly vanish.
      double worst = 0.0, scale = 0.0;
      for (int j = 0; j < n; ++j) {
        const cplx want = poisson_gradient_ball(z, lambda, j);
        const cplx got = stencil.holomorphic_partial(static_cast<std::size_t>(j));
        worst = std::max(worst, std::abs(got - want));
        scale += std::norm(want);
      }
      record(5, worst / std::max(std::sqrt(scale), 1e-300));
    }
  }
  bool ok = true;
  std::printf("%-30s %8s %14s %10s %s\n", "check", "samples", "max_error", "tol", "status");
  for (const auto& r : rows) {
    const bool pass = r.max_error <= a.tol;
    ok = ok && pass;
    std::printf("%-30s %8d %14.6e %10.3e %s\n", r.name.c_str(), r.samples, r.max_error, a.tol, pass ? "PASS" : "FAIL");
  }
  std::printf("space=%s seed=%llu fd_step=%g radius=%g\n", s.name().c_str(),
              static_cast<unsigned long long>(a.seed), a.fd_step, radius);
  return ok ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------ green-check

struct GreenArgs {
  std::string space = "disc";
  std::string fn = "radial";
  int quad_order = 64;
  std::optional<double> tol;
};

int cmd_green(const GreenArgs& a) {
  const Space s = parse_space_flag(a.space);
  const double tol = a.tol.value_or(s.is_disc() ? 1e-8 : 1e-3);
  auto sq = [](std::span<const cplx> z) {
    double v = 0.0;
    for (const auto& c : z) v += std::norm(c);
    return v;
  };
  std::function<double(std::span<const cplx>)> u;
  if (a.fn == "one")
    u = [](std::span<const cplx>) { return 1.0; };
  else if (a.fn == "radial")
    u = [sq](std::span<const cplx> z) { return 1.0 - sq(z); };
  else if (a.fn == "re1")
    u = [](std::span<const cplx> z) { return z[0].real(); };
  else if (a.fn == "mixed")
    u = [sq](std::span<const cplx> z) { return z.size() == 1 ? sq(z) * sq(z) : std::norm(z[0]) * std::norm(z[1]); };
  else
    throw InputError("unknown --fn '" + a.fn + "' (expected one, radial, re1 or mixed)");
  // The quadrature self-check runs at the comparison tolerance.
  const GreenCheck g = greens_formula_check(u, s, quad_spec(s, a.quad_order, tol));
  const bool pass = g.gap <= tol;
  json j = {{"space", s.name()}, {"fn", a.fn}, {"quad_order", a.quad_order}, {"lhs", g.lhs},
            {"rhs", g.rhs},      {"gap", g.gap}, {"tol", tol},              {"pass", pass}};
  std::cout << j.dump(2) << "\n";
  return pass ? kExitOk : kExitViolation;
}

// --------------------------------------------------------------- uchiyama

struct UchiyamaArgs {
  std::string path;
  std::string poly;
  std::optional<int> quad_order;
  std::optional<double> tol;
  int grid = 64;
};

int cmd_uchiyama(const UchiyamaArgs& a) {
  const DiscreteMeasure mu = io::load_measure(a.path);
  const MultiPoly f = io::load_poly(a.poly);
  const Space& s = mu.space();
  const double tol = a.tol.value_or(s.is_disc() ? 1e-6 : 1e-3);
  // Heavy atoms near the boundary make e^phi steep; the disc rule needs many nodes.
  const auto q = quad_spec(s, a.quad_order.value_or(s.is_disc() ? 256 : 48), tol);
  const EmbeddingCheck emb = uchiyama_embedding_check(mu, f, q);
  const CorollaryCheck cor = corollary_check(mu, f, q, a.grid);
  bool ok = emb.integral <= emb.norm_sq * (1.0 + tol) && cor.integral <= cor.bound * (1.0 + tol);
  json keys = json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const KeyInequalityCheck k = key_inequality_check(mu, f, i, q);
    const bool pass = k.lhs >= k.rhs * (1.0 - tol);
    ok = ok && pass;
    keys.push_back({{"atom", i}, {"lhs", k.lhs}, {"rhs", k.rhs}, {"pass", pass}});
  }
  json j = {{"space", s.name()},
            {"embedding", {{"integral", emb.integral}, {"norm_sq", emb.norm_sq}}},
            {"corollary",
             {{"integral", cor.integral}, {"bound", cor.bound}, {"phi_sup", cor.phi_sup},
              {"grid_resolution", cor.grid_resolution}}},
            {"key_inequality", keys},
            {"tol", tol},
            {"pass", ok}};
  std::cout << j.dump(2) << "\n";
  return ok ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------ interpolate

struct InterpolateArgs {
  std::string path;
  int grid = 64;
  std::string format = "text";
};

int cmd_interpolate(const InterpolateArgs& a) {
  const PointSequence seq = io::load_sequence(a.path);
  const InterpolationReport r = interpolation_report(seq, a.grid);
  if (a.format == "json") {
    std::cout << io::to_json(r).dump(2) << "\n";
  } else {
    std::printf("points            %zu\n", r.point_count);
    std::printf("delta             %.12g\n", r.delta);
    std::printf("cond (sqrt)       %.12g\n", r.gram_cond_root);
    std::printf("K^2               %.12g\n", r.k_sq);
    std::printf("c_supp            %.12g\n", r.c_supp);
    std::printf("interp_constant   %.12g\n\n", r.interp_constant);
    std::printf("%-34s %16s %16s %s\n", "inequality", "value", "bound", "status");
    std::printf("%-34s %16.10g %16.10g %s\n", "(a) sqrt cond(G) <= K^2/delta", r.gram_cond_root, r.orth_bound,
                r.orth_holds ? "holds" : "VIOLATED");
    std::printf("%-34s %16.10g %16.10g %s\n", "(b) K^2 <= 2e(1+2 ln 1/delta)", r.k_sq, r.k_sq_bound,
                r.k_sq_holds ? "holds" : "VIOLATED");
    std::printf("%-34s %16.10g %16.10g %s\n", "(c) sup kernel mass (reported)", r.kernel_sup, r.kernel_sup_bound,
                r.kernel_sup_holds ? "holds" : "exceeds");
  }
  return (r.orth_holds && r.k_sq_holds) ? kExitOk : kExitViolation;
}

// ----------------------------------------------------------------- search

struct SearchArgs {
  std::string space = "disc";
  int atoms = 2;
  int iters = 1000;
  int restarts = 4;
  std::uint64_t seed = 42;
  double step_init = 0.5;
  double step_decay = 0.7;
  std::string out;
  std::string summary;
};

int cmd_search(const SearchArgs& a) {
  SearchConfig cfg;
  cfg.space = parse_space_flag(a.space);
  cfg.atom_count = a.atoms;
  cfg.iterations = a.iters;
  cfg.restarts = a.restarts;
  cfg.seed = a.seed;
  cfg.step_init = a.step_init;
  cfg.step_decay = a.step_decay;
  const SearchResult r = search(cfg);
  emit(io::trace_csv(r), a.out);
  if (!a.summary.empty()) io::write_text(a.summary, io::to_json(r).dump(2) + "\n");
  std::fprintf(stderr, "best ratio %.6f (bound %.6f, seed %llu, %zu failed restarts)\n", r.best_ratio,
               theorem_bound_constant(cfg.space), static_cast<unsigned long long>(r.seed), r.failures.size());
  for (const auto& f : r.failures)
    std::fprintf(stderr, "restart %d aborted at iteration %zu: %s\n", f.restart, f.iteration, f.message.c_str());
  for (const auto& v : r.violations)
    std::fprintf(stderr, "BOUND VIOLATION: restart %d iteration %zu ratio %.17g\n", v.restart, v.iteration, v.ratio);
  if (!r.best_measure) throw NumericError("search: every restart failed");
  return r.violations.empty() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleson embedding constants: analysis and verification tools"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Embedding constant vs kernel constants for a measure file");
  analyze_cmd->add_option("path", analyze_args.path, "Measure JSON file")->required();
  analyze_cmd->add_option("--grid", analyze_args.grid, "Kernel grid resolution")->check(CLI::Range(8, 1 << 16));
  analyze_cmd->add_option("--out", analyze_args.out, "Output path (default stdout)");
  analyze_cmd->add_option("--format", analyze_args.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify-identities", "Closed-form identities vs finite differences");
  verify_cmd->add_option("--space", verify_args.space, "disc or ball2")->check(CLI::IsMember({"disc", "ball2"}));
  verify_cmd->add_option("--samples", verify_args.samples, "Random (z, lambda) pairs")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_args.seed, "Random seed");
  verify_cmd->add_option("--fd-step", verify_args.fd_step, "Finite-difference step")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol", verify_args.tol, "Maximum admissible error")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--radius", verify_args.radius, "Sampling radius (default 0.5 disc, 0.7 ball2)");

  GreenArgs green_args;
  auto* green_cmd = app.add_subcommand("green-check", "Green's formula on a test function");
  green_cmd->add_option("--space", green_args.space, "disc or ball2")->check(CLI::IsMember({"disc", "ball2"}));
  green_cmd->add_option("--fn", green_args.fn, "one, radial, re1 or mixed")
      ->check(CLI::IsMember({"one", "radial", "re1", "mixed"}));
  green_cmd->add_option("--quad-order", green_args.quad_order, "Radial and angular order")->check(CLI::Range(8, 512));
  green_cmd->add_option("--tol", green_args.tol, "Admissible gap (default 1e-8 disc, 1e-3 ball2)");

  UchiyamaArgs uchiyama_args;
  auto* uchiyama_cmd = app.add_subcommand("uchiyama", "Contractive embedding, corollary and key inequality");
  uchiyama_cmd->add_option("path", uchiyama_args.path, "Measure JSON file")->required();
  uchiyama_cmd->add_option("--poly", uchiyama_args.poly, "Polynomial JSON file")->required();
  uchiyama_cmd->add_option("--quad-order", uchiyama_args.quad_order, "Radial and angular order (default 256 disc, 48 ball2)")
      ->check(CLI::Range(8, 512));
  uchiyama_cmd->add_option("--tol", uchiyama_args.tol, "Relative slack (default 1e-6 disc, 1e-3 ball)");
  uchiyama_cmd->add_option("--grid", uchiyama_args.grid, "Grid resolution for sup |phi|")->check(CLI::Range(8, 1 << 16));

  InterpolateArgs interp_args;
  auto* interp_cmd = app.add_subcommand("interpolate", "Separation, Gram conditioning and interpolation constants");
  interp_cmd->add_option("path", interp_args.path, "Sequence JSON file")->required();
  interp_cmd->add_option("--grid", interp_args.grid, "Kernel grid resolution")->check(CLI::Range(8, 1 << 16));
  interp_cmd->add_option("--format", interp_args.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Hill climbing for large A^2 / C_supp");
  search_cmd->add_option("--space", search_args.space, "disc or ball2")->check(CLI::IsMember({"disc", "ball2"}));
  search_cmd->add_option("--atoms", search_args.atoms, "Atom count")->check(CLI::Range(1, 256));
  search_cmd->add_option("--iters", search_args.iters, "Iterations per restart")->check(CLI::PositiveNumber);
  search_cmd->add_option("--restarts", search_args.restarts, "Independent restarts")->check(CLI::PositiveNumber);
  search_cmd->add_option("--seed", search_args.seed, "Random seed");
  search_cmd->add_option("--step-init", search_args.step_init, "Initial step")->check(CLI::PositiveNumber);
  search_cmd->add_option("--step-decay", search_args.step_decay, "Step decay factor")->check(CLI::Range(1e-6, 0.999999));
  search_cmd->add_option("--out", search_args.out, "Trace CSV path (default stdout)");
  search_cmd->add_option("--summary", search_args.summary, "Write a JSON summary to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_args);
    if (*verify_cmd) return cmd_verify(verify_args);
    if (*green_cmd) return cmd_green(green_args);
    if (*uchiyama_cmd) return cmd_uchiyama(uchiyama_args);
    if (*interp_cmd) return cmd_interpolate(interp_args);
    if (*search_cmd) return cmd_search(search_args);
  } catch (const carleson::Error& e) {
    std::cerr << "carleson: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "carleson: internal error: " << e.what() << "\n";
    return 4;
  }
  return kExitUsage;
}
