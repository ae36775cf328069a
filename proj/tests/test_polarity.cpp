#include "polaris/catalog.hpp"
#include "polaris/polarity.hpp"

#include <gtest/gtest.h>

using namespace polaris;

namespace
{

OrthogonalRep adjoint_su2()
{
  return adjoint_representation(build_classical(ClassicalFamily::SpecialUnitary, 2));
}

// brute force: sup over normal pairs of |<A_i v, w>| with v, w drawn from the normal space
double pairing_oracle(const OrthogonalRep& rep, const Vec& p)
{
  const Mat t = orthonormalize(rep.orbit_tangent(p));
  const Mat n = orthogonal_complement(t, rep.space);
  double worst = 0;
  for (int i = 0; i < rep.count(); ++i)
    worst = std::max(worst, (n.transpose() * rep.generators[i] * n).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST(Polarity, AdjointSu2IsPolarOfCohomogeneityOne)
{
  const PolarityVerdict v = is_polar_rep(adjoint_su2(), 1);
  EXPECT_TRUE(v.polar);
  EXPECT_EQ(v.cohomogeneity, 1);
  ASSERT_TRUE(v.section);
  EXPECT_EQ(v.section->dim(), 1);
}

TEST(Polarity, SymmetricMatricesArePolarOfCohomogeneityTwo)
{
  const OrthogonalRep rep = so3_on_symmetric_traceless();
  const PolarityVerdict v = is_polar_rep(rep, 1);
  EXPECT_TRUE(v.polar);
  EXPECT_EQ(v.cohomogeneity, 2);
  // the section at a diagonal point is the diagonal: two eigenvalue directions
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 2, -0.5, -1.5;
  const PolarityVerdict at = is_polar_rep_at(rep, symmetric_coordinates(d));
  ASSERT_TRUE(at.section);
  Mat diag(5, 2);
  diag.col(0) = symmetric_coordinates(Vec(Vec::Unit(3, 0) - Vec::Unit(3, 1)).asDiagonal());
  diag.col(1) = symmetric_coordinates(Vec(Vec::Unit(3, 0) + Vec::Unit(3, 1) - 2 * Vec::Unit(3, 2)).asDiagonal());
  EXPECT_LT(max_principal_angle(orthonormalize(diag), at.section->basis), 1e-10);
}

TEST(Polarity, DiagonalDoubleIsNotPolarWithRobustWitness)
{
  const OrthogonalRep rep = diagonal_sum(adjoint_su2(), adjoint_su2());
  const PolarityVerdict v = is_polar_rep(rep, 1);
  EXPECT_FALSE(v.polar);
  EXPECT_FALSE(v.indeterminate);
  EXPECT_EQ(v.cohomogeneity, 3);
  ASSERT_TRUE(v.witness);
  const PairingWitness& w = *v.witness;
  EXPECT_NEAR(std::abs(w.v.dot(rep.generators[w.generator] * w.w)), std::abs(w.pairing), 1e-12);
  EXPECT_GT(std::abs(w.pairing), kRobustWitness);
  EXPECT_GT(pairing_oracle(rep, v.basepoint), 1e-6);
  for (int k = 0; k < 20; ++k)
    EXPECT_FALSE(is_polar_rep(rep, derive_seed(5, k)).polar);
}

TEST(Polarity, VerdictAgreesWithPairingOracle)
{
  for (const OrthogonalRep& rep : {adjoint_su2(), so3_on_symmetric_traceless()})
  {
    const PolarityVerdict v = is_polar_rep(rep, 3);
    EXPECT_LT(pairing_oracle(rep, v.basepoint), 1e-9);
  }
}

TEST(Polarity, SRepresentationsArePolar)
{
  for (const SymmetricPair& pair : {su3_real_form_pair(), su3_projective_pair()})
  {
    const OrthogonalRep rep = s_representation(pair);
    const PolarityVerdict v = is_polar_rep(rep, 2);
    EXPECT_TRUE(v.polar);
    EXPECT_EQ(v.cohomogeneity, maximal_abelian(pair, 2).dim());
  }
}

TEST(Polarity, TrivialRepresentationIsPolar)
{
  const LieAlgebra t1 = build_classical(ClassicalFamily::Torus, 1);
  const OrthogonalRep rep = make_rep(t1, {Mat::Zero(2, 2)});
  const PolarityVerdict v = is_polar_rep(rep, 1);
  EXPECT_TRUE(v.polar);
  EXPECT_EQ(v.cohomogeneity, 2);
}

TEST(Polarity, SliceAtOriginIsTheWholeRepresentation)
{
  const OrthogonalRep rep = so3_on_symmetric_traceless();
  const OrthogonalRep slice = slice_rep(rep, Vec::Zero(5));
  EXPECT_EQ(slice.space, 5);
  EXPECT_EQ(slice.count(), 3);
  EXPECT_TRUE(is_polar_rep(slice, 1).polar);
}

TEST(Polarity, SliceAtSingularSymmetricMatrix)
{
  // diag(1,1,-2) has isotropy so(2) acting on the normal space
  const OrthogonalRep rep = so3_on_symmetric_traceless();
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 1, 1, -2;
  const OrthogonalRep slice = slice_rep(rep, symmetric_coordinates(d / std::sqrt(6.0)));
  EXPECT_EQ(slice.count(), 1);
  EXPECT_EQ(slice.space, 3);
  EXPECT_TRUE(is_polar_rep(slice, 1).polar);
}

TEST(Polarity, OrbifoldPointsOfCatalogActions)
{
  for (const char* name : {"su2_adjoint", "so3_sym_traceless", "so2_s2", "su2_diag_s5"})
  {
    const Model m = catalog_entry(name).build();
    ASSERT_TRUE(m.singular_point) << name;
    const OrbifoldVerdict v = orbifold_point_test(*m.action, *m.singular_point, 1);
    EXPECT_TRUE(v.orbifold) << name;
  }
}

TEST(Polarity, HopfActionIsNotPolar)
{
  const Model m = catalog_entry("hopf_s1_s3").build();
  const PolarityVerdict v = is_polar(*m.action, 1);
  EXPECT_FALSE(v.polar);
  EXPECT_EQ(v.cohomogeneity, 2);
}

TEST(Polarity, ProductOfSpheresIsDecidedInCohomogeneityOne)
{
  const Model m = catalog_entry("so3_s2xs2").build();
  const PolarityVerdict v = is_polar(*m.action, 1);
  EXPECT_TRUE(v.polar);
  EXPECT_EQ(v.cohomogeneity, 1);
}

TEST(Homogeneous, HermannActionIsHyperpolar)
{
  const Model m = catalog_entry("hermann_su3").build();
  const HomogeneousVerdict v = is_hyperpolar_homogeneous(*m.pair, *m.subgroup, 1);
  EXPECT_TRUE(v.polar);
  EXPECT_TRUE(v.hyperpolar);
  EXPECT_LT(v.abelian_residual, 1e-12);
  EXPECT_EQ(v.section.dim(), 1);
}

TEST(Homogeneous, TorusOnProjectivePlaneIsPolarNotHyperpolar)
{
  const Model m = catalog_entry("t2_cp2").build();
  const HomogeneousVerdict v = is_hyperpolar_homogeneous(*m.pair, *m.subgroup, 1);
  EXPECT_TRUE(v.polar);
  EXPECT_FALSE(v.hyperpolar);
  ASSERT_EQ(v.section.dim(), 2);
  EXPECT_GT(sectional_curvature(*m.pair, v.section.basis.col(0), v.section.basis.col(1)), 1e-3);
  // the verdict survives a rotation of the subalgebra basis
  Rng rng(8);
  const Mat q = Eigen::HouseholderQR<Mat>(Mat(Mat::NullaryExpr(2, 2, [&] { return rng.normal(); }))).householderQ();
  const Subspace rotated{m.subgroup->ambient, m.subgroup->basis * q};
  EXPECT_TRUE(is_polar_homogeneous(*m.pair, rotated, 1).polar);
}

TEST(Homogeneous, GenericCircleOnProjectivePlaneIsNotPolar)
{
  const Model m = catalog_entry("t2_cp2").build();
  Rng rng(12);
  // a generic one-dimensional subalgebra: Ad-conjugate of a torus direction
  const Vec x = rng.gaussian(8);
  const Mat ad = m.algebra.adjoint_action(m.algebra.exp(x));
  const Subspace h = make_subspace(m.algebra, ad * m.subgroup->basis.col(0));
  const HomogeneousVerdict v = is_polar_homogeneous(*m.pair, h, 3);
  EXPECT_FALSE(v.polar);
  EXPECT_FALSE(v.witness.empty());
}
