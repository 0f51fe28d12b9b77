// Two atoms on the disc: embedding constant, kernel constants and the
// separation data of the underlying point sequence.

#include <cstdio>

#include "carleson/carleson.hpp"

int main() {
  using namespace carleson;
  const PointSequence seq{cplx(0.5), cplx(-0.5)};
  const DiscreteMeasure mu = sequence_measure(seq);

  const AnalysisReport a = analyze(mu, 64);
  std::printf("A^2 = %.6f  C_supp = %.6f  C_grid = %.6f  ratio = %.6f  (bound %.6f)\n", a.a_sq, a.c_supp,
              a.c_grid, a.ratio, theorem_bound_constant(mu.space()));

  const InterpolationReport r = interpolation_report(seq, 64);
  std::printf("delta = %.6f  sqrt cond G = %.6f  K^2/delta = %.6f  interpolation constant = %.6f\n", r.delta,
              r.gram_cond_root, r.orth_bound, r.interp_constant);
  return 0;
}
