#ifndef POLARIS_SYMSPACE_HPP
#define POLARIS_SYMSPACE_HPP

#include "polaris/liealg.hpp"
#include "polaris/manifold.hpp"

#include <cstdint>

namespace polaris
{

/// Lie algebra with an involutive automorphism theta and its eigenspace
/// split g = k + p (k: +1, p: -1).
struct SymmetricPair
{
  LieAlgebra algebra;
  Mat theta;
  Subspace k;
  Subspace p;

  /// Max residual of [k,k] in k, [k,p] in p, [p,p] in k.
  double grading_residual() const;
};

/// Splits g into the eigenspaces of theta. Throws when theta is not an
/// involutive isometric automorphism (message carries the worst residual).
SymmetricPair cartan_decompose(const LieAlgebra& lie, const Mat& theta, double tol = 1e-9);

/// Involution given by a map on the matrix realization.
Mat involution_from_realization(const LieAlgebra& lie, const std::function<CMat(const CMat&)>& f);

/// Maximal abelian subspace a of p, certified by re-deriving it as the
/// centralizer of independent generic elements of a.
Subspace maximal_abelian(const SymmetricPair& pair, std::uint64_t seed, const RankThreshold& thr = {});

/// R(X,Y)Z = -[[X,Y],Z] on p.
Vec curvature_operator(const SymmetricPair& pair, const Vec& x, const Vec& y, const Vec& z, double tol = 1e-8);
double sectional_curvature(const SymmetricPair& pair, const Vec& x, const Vec& y, double tol = 1e-8);

/// Sampling parameters for once-broken geodesics.
struct BrokenGeodesicSampler
{
  int geodesics = 100;
  double min_length = 0.1;
  double max_length = 1.5;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;
};

struct ProbeVerdict
{
  bool passed = true;
  double worst_residual = 0.0;
  int worst_geodesic = -1;
  /// first leg direction, break direction (in S coordinates) and leg lengths
  Vec first_direction;
  Vec second_direction;
  double first_length = 0.0;
  double second_length = 0.0;
};

/// Transports S along S-admissible once-broken geodesics from the base point
/// o = eK and measures R(Pu,Pv)Pw against P(S). Transport along Exp(tX)o is
/// the left translation, so points are tracked as group elements g and
/// transported vectors as Ad(g) applied to p. Requires a realization.
ProbeVerdict cartan_hermann_probe(const SymmetricPair& pair, const Subspace& s, const BrokenGeodesicSampler& sampler);

/// Same probe on a model manifold; s is an orthonormal basis (ambient
/// coordinates) of a subspace of T_p M.
ProbeVerdict cartan_hermann_probe(const ModelManifold& manifold, const Vec& point, const Mat& s,
                                  const BrokenGeodesicSampler& sampler);

}  // namespace polaris

#endif
