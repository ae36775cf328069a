#include "polaris/catalog.hpp"
#include "polaris/weyl.hpp"

#include <gtest/gtest.h>

using namespace polaris;

TEST(Weyl, RealFormHasSixSimpleMultiplicityRoots)
{
  const SymmetricPair pair = su3_real_form_pair();
  const RestrictedRootSystem roots = restricted_roots(pair, maximal_abelian(pair, 1), 1);
  ASSERT_EQ(roots.roots.size(), 6u);
  for (const Root& r : roots.roots)
    EXPECT_EQ(r.multiplicity, 1);
  // A2: all roots share one length and the pairwise angles are multiples of 60 degrees
  for (const Root& a : roots.roots)
    for (const Root& b : roots.roots)
    {
      EXPECT_NEAR(a.covector.norm(), roots.roots[0].covector.norm(), 1e-9);
      const double c = a.covector.dot(b.covector) / a.covector.squaredNorm();
      const double nearest = std::round(2 * c) / 2;
      EXPECT_NEAR(c, nearest, 1e-9);
    }
  const ReflectionGroup w = weyl_group_closure(roots);
  EXPECT_EQ(w.order(), 6);
  EXPECT_LT(w.closure_residual(), 1e-10);
  EXPECT_LT(root_permutation_residual(w, roots), 1e-10);
}

TEST(Weyl, ProjectivePlaneIsRankOneOfOrderTwo)
{
  const SymmetricPair pair = su3_projective_pair();
  const RestrictedRootSystem roots = restricted_roots(pair, maximal_abelian(pair, 1), 1);
  // BC1: roots +-a with multiplicity 2 and +-2a with multiplicity 1
  EXPECT_EQ(roots.roots.size(), 4u);
  EXPECT_EQ(roots.total_multiplicity(), 6);
  EXPECT_EQ(weyl_group_closure(roots).order(), 2);
}

TEST(Weyl, RankOneSu2PairHasOrderTwo)
{
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  Mat theta = -Mat::Identity(3, 3);
  theta(2, 2) = 1;
  const SymmetricPair pair = cartan_decompose(su2, theta);
  const RestrictedRootSystem roots = restricted_roots(pair, maximal_abelian(pair, 1), 1);
  EXPECT_EQ(roots.roots.size(), 2u);
  EXPECT_EQ(weyl_group_closure(roots).order(), 2);
}

TEST(Weyl, ReflectionIsAnInvolutionFixingTheHyperplane)
{
  Vec a(3);
  a << 1, 2, -1;
  const Mat s = reflection(a);
  EXPECT_TRUE((s * s).isApprox(Mat::Identity(3, 3), 1e-14));
  EXPECT_TRUE((s * a).isApprox(-a, 1e-14));
  Vec ortho(3);
  ortho << 2, -1, 0;
  EXPECT_TRUE((s * ortho).isApprox(ortho, 1e-14));
}

TEST(Weyl, RepresentationRootsOfSymmetricMatrices)
{
  const OrthogonalRep rep = so3_on_symmetric_traceless();
  const PolarityVerdict v = is_polar_rep(rep, 1);
  ASSERT_TRUE(v.section);
  const RestrictedRootSystem roots = representation_roots(rep, *v.section, 1);
  EXPECT_EQ(roots.roots.size(), 6u);
  EXPECT_EQ(weyl_group_closure(roots).order(), 6);
}

TEST(Weyl, QuotientDistanceOfAdjointSu2IsRadialGap)
{
  // orbits are round spheres, so the orbit distance is the difference of radii
  const GroupAction act = GroupAction::linear(catalog_entry("su2_adjoint").build().action->rep);
  Rng rng(4);
  for (int k = 0; k < 5; ++k)
  {
    const Vec p = rng.gaussian(3), q = rng.gaussian(3);
    const QuotientDistance d = quotient_distance(act, p, q);
    EXPECT_NEAR(d.value, std::abs(p.norm() - q.norm()), 1e-6);
    EXPECT_NEAR((d.group_element * q - p).norm(), d.value, 1e-6);
  }
}

TEST(Weyl, QuotientDistanceOfSymmetricMatricesIsSortedEigenvalueGap)
{
  const Model m = catalog_entry("so3_sym_traceless").build();
  Rng rng(5);
  for (int k = 0; k < 3; ++k)
  {
    Mat a = Mat::NullaryExpr(3, 3, [&] { return rng.normal(); }), b = Mat::NullaryExpr(3, 3, [&] { return rng.normal(); });
    a = (0.5 * (a + a.transpose())).eval();
    b = (0.5 * (b + b.transpose())).eval();
    a -= a.trace() / 3 * Mat::Identity(3, 3);
    b -= b.trace() / 3 * Mat::Identity(3, 3);
    // Hoffman-Wielandt: min over conjugation is the gap of sorted spectra
    const Vec ea = Eigen::SelfAdjointEigenSolver<Mat>(a).eigenvalues();
    const Vec eb = Eigen::SelfAdjointEigenSolver<Mat>(b).eigenvalues();
    const double oracle = (ea - eb).norm();
    EXPECT_NEAR(quotient_distance(*m.action, symmetric_coordinates(a), symmetric_coordinates(b)).value, oracle, 1e-6);
  }
}

TEST(Weyl, SectionOrbitLandsInWeylOrbit)
{
  const Model m = catalog_entry("so3_sym_traceless").build();
  const PolarityVerdict v = is_polar_rep(m.action->rep, 1);
  const RestrictedRootSystem roots = representation_roots(m.action->rep, *v.section, 1);
  const ReflectionGroup w = weyl_group_closure(roots);
  SectionSampler s;
  s.samples = 300;
  const Vec p = v.section->basis * Vec::LinSpaced(2, 0.7, -0.3);
  const SectionOrbitReport r = section_orbit_check(*m.action, *v.section, w, p, s);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.landed, 0);
}
