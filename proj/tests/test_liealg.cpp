#include "polaris/liealg.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace polaris;

namespace
{

// [X,Y] straight from the matrices, mapped back through -Re tr against the basis
Vec commutator_oracle(const LieAlgebra& lie, const Vec& x, const Vec& y)
{
  const CMat X = lie.to_matrix(x), Y = lie.to_matrix(y);
  const CMat c = X * Y - Y * X;
  const int n = lie.dim();
  Mat gram(n, n);
  Vec rhs(n);
  for (int i = 0; i < n; ++i)
  {
    rhs(i) = -(lie.realization()[i] * c).trace().real();
    for (int j = 0; j < n; ++j)
      gram(i, j) = -(lie.realization()[i] * lie.realization()[j]).trace().real();
  }
  return gram.ldlt().solve(rhs);
}

}  // namespace

TEST(LieAlgebra, Su2BracketIsCyclic)
{
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  EXPECT_NEAR(su2.c(0, 1, 2), 1.0, 1e-14);
  EXPECT_NEAR(su2.c(1, 2, 0), 1.0, 1e-14);
  EXPECT_NEAR(su2.c(2, 0, 1), 1.0, 1e-14);
  EXPECT_NEAR(su2.c(1, 0, 2), -1.0, 1e-14);
  EXPECT_TRUE(su2.inner().isApprox(0.5 * Mat::Identity(3, 3), 1e-14));
}

TEST(LieAlgebra, StructureConstantsMatchMatrixCommutators)
{
  for (auto [fam, n] : {std::pair{ClassicalFamily::SpecialUnitary, 3}, std::pair{ClassicalFamily::SpecialOrthogonal, 4},
                        std::pair{ClassicalFamily::Unitary, 2}})
  {
    const LieAlgebra lie = build_classical(fam, n);
    Rng rng(7);
    for (int k = 0; k < 10; ++k)
    {
      const Vec x = rng.gaussian(lie.dim()), y = rng.gaussian(lie.dim());
      EXPECT_LT((lie.bracket(x, y) - commutator_oracle(lie, x, y)).norm(), 1e-12);
    }
  }
}

TEST(LieAlgebra, InvariantsHoldForClassicalAlgebras)
{
  for (auto [fam, n] : {std::pair{ClassicalFamily::SpecialUnitary, 3}, std::pair{ClassicalFamily::SpecialOrthogonal, 5},
                        std::pair{ClassicalFamily::Torus, 3}})
  {
    const LieAlgebra lie = build_classical(fam, n, 2.0);
    EXPECT_LT(lie.antisymmetry_residual(), 1e-13);
    EXPECT_LT(lie.jacobi_residual(), 1e-12);
    EXPECT_LT(lie.invariance_residual(), 1e-12);
    EXPECT_NO_THROW(lie.validate());
  }
}

TEST(LieAlgebra, MetricFactorReproducesInner)
{
  const LieAlgebra lie = build_classical(ClassicalFamily::SpecialUnitary, 3, 3.0);
  const Mat& r = lie.metric_factor();
  EXPECT_TRUE((r.transpose() * r).isApprox(lie.inner(), 1e-12));
}

TEST(LieAlgebra, KillingFormOfSu2)
{
  // B(x,y) = tr(ad x ad y) = -2 <x,y>_std on the cyclic basis
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  EXPECT_TRUE(killing_matrix(su2).isApprox(-2.0 * Mat::Identity(3, 3), 1e-12));
}

TEST(LieAlgebra, KillingFormIsCentralOnUnitary)
{
  const LieAlgebra u2 = build_classical(ClassicalFamily::Unitary, 2);
  Vec centre = Vec::Zero(u2.dim());
  centre(u2.dim() - 1) = 1.0;
  Rng rng(3);
  EXPECT_NEAR(killing_form(u2, centre, rng.gaussian(u2.dim())), 0.0, 1e-12);
}

TEST(LieAlgebra, ExpMatchesMatrixExponential)
{
  const LieAlgebra so3 = build_classical(ClassicalFamily::SpecialOrthogonal, 3);
  Rng rng(5);
  const Vec x = rng.gaussian(3);
  const CMat g = so3.exp(x);
  EXPECT_LT((g - so3.to_matrix(x).exp()).norm(), 1e-12);
  EXPECT_LT((g * g.adjoint() - CMat::Identity(3, 3)).norm(), 1e-12);
  // Ad(exp x) = exp(ad x)
  const Mat ad_exp = so3.ad(x).exp();
  EXPECT_LT((so3.adjoint_action(g) - ad_exp).norm(), 1e-10);
}

TEST(LieAlgebra, DirectSumBracketsAreBlockwise)
{
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  const LieAlgebra sum = direct_sum(su2, su2);
  ASSERT_EQ(sum.dim(), 6);
  Vec a = Vec::Zero(6), b = Vec::Zero(6);
  a(0) = 1;
  b(4) = 1;
  EXPECT_LT(sum.bracket(a, b).norm(), 1e-14);
  EXPECT_NO_THROW(sum.validate());
}

TEST(LieAlgebra, ValidateRejectsBrokenAntisymmetry)
{
  std::vector<double> c(27, 0.0);
  auto at = [&](int i, int j, int k) -> double& { return c[(i * 3 + j) * 3 + k]; };
  at(0, 1, 2) = 1;
  at(1, 0, 2) = 1;  // should be -1
  const LieAlgebra bad(3, c, Mat::Identity(3, 3));
  int i = -1, j = -1, k = -1;
  EXPECT_GT(bad.antisymmetry_residual(&i, &j, &k), 1.0);
  EXPECT_EQ(k, 2);
  EXPECT_THROW(bad.validate(), Error);
}

TEST(LieAlgebra, TripleSystemsAndAbelianSubspaces)
{
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  const Subspace line = make_subspace(su2, Vec::Unit(3, 0));
  EXPECT_TRUE(is_abelian_subspace(su2, line).holds);
  EXPECT_TRUE(is_lie_triple_system(su2, line).holds);
  // span(e1,e2): [e1,[e1,e2]] = [e1,e3] = -e2 in span, so it is an LTS but not a subalgebra
  Mat plane(3, 2);
  plane << 1, 0, 0, 1, 0, 0;
  const Subspace s = make_subspace(su2, plane);
  EXPECT_TRUE(is_lie_triple_system(su2, s).holds);
  const Verdict sub = is_subalgebra(su2, s);
  EXPECT_FALSE(sub.holds);
  EXPECT_EQ(sub.witness.size(), 2u);
  EXPECT_FALSE(is_abelian_subspace(su2, s).holds);
}

TEST(LieAlgebra, CentralizerOfRegularElementIsCartan)
{
  const LieAlgebra su3 = build_classical(ClassicalFamily::SpecialUnitary, 3);
  Rng rng(11);
  const Vec x = rng.gaussian(su3.dim());
  EXPECT_EQ(centralizer_in(su3, x, su3.whole()).dim(), 2);
}

TEST(LieAlgebra, SubalgebraInheritsBracket)
{
  const LieAlgebra su3 = build_classical(ClassicalFamily::SpecialUnitary, 3);
  const LieAlgebra so3 = build_classical(ClassicalFamily::SpecialOrthogonal, 3);
  // the real antisymmetric matrices inside su(3)
  Mat cols(su3.dim(), 3);
  for (int i = 0; i < 3; ++i)
    cols.col(i) = su3.from_matrix(so3.realization()[i]);
  const Subspace h = make_subspace(su3, cols);
  ASSERT_TRUE(is_subalgebra(su3, h).holds);
  const LieAlgebra sub = subalgebra(su3, h);
  EXPECT_EQ(sub.dim(), 3);
  EXPECT_LT(sub.jacobi_residual(), 1e-12);
}

TEST(Linalg, OrthonormalizeDropsDependentColumns)
{
  Mat v(3, 3);
  v << 1, 2, 0, 0, 0, 1, 0, 0, 0;
  const Mat q = orthonormalize(v);
  EXPECT_EQ(q.cols(), 2);
  EXPECT_TRUE((q.transpose() * q).isApprox(Mat::Identity(2, 2), 1e-14));
}

TEST(Linalg, PrincipalAnglesOfRotatedLines)
{
  Mat a(2, 1), b(2, 1);
  a << 1, 0;
  b << std::cos(0.3), std::sin(0.3);
  EXPECT_NEAR(max_principal_angle(a, b), 0.3, 1e-14);
}

TEST(Linalg, DerivedSeedsAreDistinctAndStable)
{
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}
