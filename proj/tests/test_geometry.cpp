#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "carleson/geometry.hpp"

namespace {

using namespace carleson;

TEST(Space, NamesAndEquality) {
  EXPECT_EQ(Space::disc().name(), "disc");
  EXPECT_EQ(Space::ball(2).name(), "ball2");
  EXPECT_EQ(Space::disc().dim(), 1);
  EXPECT_FALSE(Space::disc() == Space::ball(1));
  EXPECT_THROW(Space::ball(0), InputError);
}

TEST(SpacePoint, Validation) {
  EXPECT_NO_THROW(SpacePoint({cplx(0.6, 0.79)}));
  EXPECT_THROW(SpacePoint({cplx(0.6, 0.8)}), InputError);
  EXPECT_THROW(SpacePoint({cplx(std::nan(""), 0.0)}), InputError);
  EXPECT_THROW(SpacePoint(std::span<const cplx>()), InputError);
  std::vector<cplx> too_many(kMaxDim + 1, cplx(0.0));
  EXPECT_THROW(SpacePoint(std::span<const cplx>(too_many)), InputError);
  const SpacePoint o = SpacePoint::origin(3);
  EXPECT_EQ(o.dim(), 3u);
  EXPECT_EQ(o.norm_sq(), 0.0);
}

TEST(SpacePoint, ConditioningHandler) {
  int calls = 0;
  set_conditioning_handler([&](const SpacePoint&) { ++calls; });
  SpacePoint near{cplx(1.0 - 1e-10)};
  SpacePoint far{cplx(0.9)};
  EXPECT_EQ(calls, 1);
  set_conditioning_threshold(0.5);
  SpacePoint mid{cplx(0.9)};
  EXPECT_EQ(calls, 2);
  set_conditioning_threshold(1.0 - 1e-8);
  set_conditioning_handler({});
}

TEST(Kernels, DiscClosedForms) {
  const Space d = Space::disc();
  const SpacePoint z{cplx(0.3, 0.4)};
  const SpacePoint w{cplx(-0.2, 0.1)};
  const cplx expected = 1.0 / (1.0 - z[0] * std::conj(w[0]));
  EXPECT_NEAR(std::abs(szego_kernel(z, w, d) - expected), 0.0, 1e-15);
  EXPECT_NEAR(szego_kernel(SpacePoint::origin(1), w, d).real(), 1.0, 0.0);
  // P_z(z) = 1/(1-|z|^2).
  EXPECT_NEAR(poisson_kernel(z, z, d), 1.0 / (1.0 - 0.25), 1e-14);
  // |k_z(lambda)|^2 = P_z(lambda).
  EXPECT_NEAR(std::norm(normalized_kernel(z, w, d)), poisson_kernel(z, w, d), 1e-14);
  // |k_z(z)|^2 = 1/(1-|z|^2).
  EXPECT_NEAR(std::norm(normalized_kernel(z, z, d)), 1.0 / (1.0 - z.norm_sq()), 1e-14);
}

TEST(Kernels, BallClosedForms) {
  const Space b = Space::ball(2);
  const SpacePoint z{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  const SpacePoint w{cplx(0.1, -0.5), cplx(0.2, 0.2)};
  const cplx ip = inner(z, w);
  EXPECT_NEAR(std::abs(szego_kernel(z, w, b) - 1.0 / ((1.0 - ip) * (1.0 - ip))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(szego_kernel(z, w, b) - std::conj(szego_kernel(w, z, b))), 0.0, 1e-15);
  const double pk = std::pow((1.0 - z.norm_sq()) / std::norm(1.0 - ip), 2);
  EXPECT_NEAR(poisson_kernel(z, w, b), pk, 1e-14);
  EXPECT_NEAR(std::norm(normalized_kernel(z, w, b)), poisson_kernel(z, w, b), 1e-14);
  EXPECT_THROW(poisson_kernel(z, SpacePoint{cplx(0.1)}, b), InputError);
}

TEST(Mobius, DiscFormula) {
  const Space d = Space::disc();
  const SpacePoint a{cplx(0.5, -0.1)};
  const SpacePoint z{cplx(-0.3, 0.6)};
  const cplx expected = (a[0] - z[0]) / (1.0 - std::conj(a[0]) * z[0]);
  EXPECT_NEAR(std::abs(mobius(a, z, d)[0] - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mobius(SpacePoint::origin(1), z, d)[0] + z[0]), 0.0, 0.0);
  EXPECT_NEAR(mobius(a, a, d).norm(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mobius(a, SpacePoint::origin(1), d)[0] - a[0]), 0.0, 1e-15);
  // {0.5, -0.5}: |(0.5 + 0.5)/(1 + 0.25)| = 0.8
  EXPECT_NEAR(pseudo_hyperbolic(SpacePoint{cplx(0.5)}, SpacePoint{cplx(-0.5)}, d), 0.8, 1e-15);
}

class MobiusProperties : public ::testing::TestWithParam<int> {};

TEST_P(MobiusProperties, InvolutionNormIdentitySymmetry) {
  const int n = GetParam();
  const Space s = Space::ball(n);
  numerics::RngStream rng(100 + static_cast<std::uint64_t>(n), 0);
  for (int k = 0; k < 200; ++k) {
    const SpacePoint a = random_point(rng, n, 0.95);
    const SpacePoint z = random_point(rng, n, 0.95);
    const SpacePoint back = mobius(a, mobius(a, z, s), s);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(back[i] - z[i]), 0.0, 1e-12);
    const double lhs = 1.0 - mobius(a, z, s).norm_sq();
    const double rhs = (1.0 - a.norm_sq()) * (1.0 - z.norm_sq()) / std::norm(1.0 - inner(z, a));
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-11);
    EXPECT_NEAR(pseudo_hyperbolic(a, z, s), pseudo_hyperbolic(z, a, s), 1e-12);
    // Automorphisms preserve the pseudo-hyperbolic distance.
    const SpacePoint w = random_point(rng, n, 0.95);
    const double before = pseudo_hyperbolic(z, w, s);
    const double after = pseudo_hyperbolic(mobius(a, z, s), mobius(a, w, s), s);
    EXPECT_NEAR(before, after, 1e-11);
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, MobiusProperties, ::testing::Values(1, 2, 3));

TEST(RandomPoint, InsideRadiusAndDeterministic) {
  numerics::RngStream a(5, 1), b(5, 1);
  for (int k = 0; k < 1000; ++k) {
    const SpacePoint p = random_point(a, 2, 0.7);
    EXPECT_LE(p.norm(), 0.7 + 1e-15);
    EXPECT_EQ(p, random_point(b, 2, 0.7));
  }
}

TEST(RandomPoint, UniformInVolume) {
  // For the uniform law in the disc of radius R, E|z|^2 = R^2/2; in C^2, E|z|^2 = 2R^2/3.
  numerics::RngStream rng(6, 0);
  double s1 = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    s1 += random_point(rng, 1, 0.9).norm_sq();
    s2 += random_point(rng, 2, 0.9).norm_sq();
  }
  EXPECT_NEAR(s1 / n, 0.81 / 2, 3e-3);
  EXPECT_NEAR(s2 / n, 2 * 0.81 / 3, 3e-3);
}

TEST(Rotate, PreservesKernels) {
  const Space b = Space::ball(2);
  const SpacePoint z{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  const SpacePoint w{cplx(0.1, -0.5), cplx(0.2, 0.2)};
  const cplx phase = std::polar(1.0, 0.7);
  EXPECT_NEAR(poisson_kernel(rotate(z, phase), rotate(w, phase), b), poisson_kernel(z, w, b), 1e-14);
}

}  // namespace
