#ifndef POLARIS_POLARITY_HPP
#define POLARIS_POLARITY_HPP

#include "polaris/symspace.hpp"

#include <optional>

namespace polaris
{

/// Representation of a Lie algebra by antisymmetric matrices on R^n.
/// generators[i] is the image of the i-th basis vector of the algebra.
struct OrthogonalRep
{
  LieAlgebra algebra;
  std::vector<Mat> generators;
  bool restrict_to_sphere = false;
  int space = 0;

  int space_dim() const { return space; }
  int count() const { return static_cast<int>(generators.size()); }
  /// Sum x_i A_i.
  Mat generator(const Vec& x) const;
  /// Columns A_i v (spanning the orbit tangent at v).
  Mat orbit_tangent(const Vec& v) const;
  double antisymmetry_residual() const;
  double representation_residual() const;
  void validate(double tol = 1e-9) const;
};

OrthogonalRep make_rep(const LieAlgebra& lie, std::vector<Mat> generators, bool restrict_to_sphere = false);

/// Isometric action of the group of a representation on a model manifold
/// sitting inside the representation space.
struct GroupAction
{
  OrthogonalRep rep;
  ModelManifold manifold = ModelManifold::euclidean(1);

  static GroupAction linear(const OrthogonalRep& rep);
  static GroupAction on(const OrthogonalRep& rep, const ModelManifold& manifold);

  /// Random point of the manifold.
  Vec sample_point(Rng& rng) const;
  /// Orthonormal basis (ambient columns) of the orbit tangent at x.
  Mat orbit_basis(const Vec& x) const;
  /// Orthonormal basis of the normal space to the orbit inside T_x M.
  Mat normal_basis(const Vec& x) const;
  /// exp(sum t_i A_i).
  Mat group_element(const Vec& t) const;
};

/// Precomputed exp(s A_i) for fast one-parameter moves.
class OneParameterGroups
{
public:
  explicit OneParameterGroups(const OrthogonalRep& rep);
  Mat exp(int i, double s) const;
  int count() const { return static_cast<int>(m_vectors.size()); }

private:
  std::vector<CMat> m_vectors;
  std::vector<CMat> m_inverses;
  std::vector<Eigen::VectorXcd> m_values;
};

struct PairingWitness
{
  int generator = -1;
  Vec v;
  Vec w;
  double pairing = 0.0;
};

struct PolarityVerdict
{
  bool polar = false;
  /// negative verdict whose witness is below the robustness floor
  bool indeterminate = false;
  int cohomogeneity = 0;
  std::optional<Subspace> section;
  std::optional<PairingWitness> witness;
  double residual = 0.0;
  Vec basepoint;
};

/// Floor a negative verdict's witness must exceed to count as robust.
inline constexpr double kRobustWitness = 1e-6;

Vec find_regular_point(const GroupAction& action, std::uint64_t seed, const RankThreshold& thr = {});
Vec find_regular_point(const OrthogonalRep& rep, std::uint64_t seed, const RankThreshold& thr = {});
int orbit_rank(const OrthogonalRep& rep, const Vec& x, const RankThreshold& thr = {});
int cohomogeneity(const GroupAction& action, std::uint64_t seed, const RankThreshold& thr = {});
int cohomogeneity(const OrthogonalRep& rep, std::uint64_t seed, const RankThreshold& thr = {});

/// Exact pairing test on the normal space at a regular point.
PolarityVerdict is_polar_rep(const OrthogonalRep& rep, std::uint64_t seed, double tol = 1e-9);
PolarityVerdict is_polar_rep_at(const OrthogonalRep& rep, const Vec& p, double tol = 1e-9);
/// Linear models go through the pairing test; products of spheres are
/// decided only in cohomogeneity <= 1 (throws otherwise).
PolarityVerdict is_polar(const GroupAction& action, std::uint64_t seed, double tol = 1e-9);

/// Isotropy algebra at p acting on the normal space of the orbit in T_p M.
/// The result acts linearly (no sphere restriction).
OrthogonalRep slice_rep(const GroupAction& action, const Vec& p, const RankThreshold& thr = {});
OrthogonalRep slice_rep(const OrthogonalRep& rep, const Vec& p, const RankThreshold& thr = {});

struct OrbifoldVerdict
{
  bool orbifold = true;
  int slice_cohomogeneity = 0;
  int isotropy_dim = 0;
  bool short_circuit = false;
  std::optional<PolarityVerdict> slice_verdict;
};

OrbifoldVerdict orbifold_point_test(const GroupAction& action, const Vec& p, std::uint64_t seed, double tol = 1e-9);

struct HomogeneousVerdict
{
  bool polar = false;
  bool hyperpolar = false;
  bool indeterminate = false;
  int orbit_dim = 0;
  /// 𝔪 = 𝔭 ∩ (Ad(g^-1) 𝔥)^⊥ at the regularized basepoint
  Subspace section;
  /// Ad(g^-1) 𝔥 used at the basepoint
  Subspace conjugate;
  double lts_residual = 0.0;
  double orthogonality_residual = 0.0;
  double abelian_residual = 0.0;
  std::vector<int> witness;
  int conjugation_draw = 0;
};

/// Polar criterion for a subgroup H acting on the symmetric space G/K.
HomogeneousVerdict is_polar_homogeneous(const SymmetricPair& pair, const Subspace& h, std::uint64_t seed,
                                        double tol = 1e-9);
HomogeneousVerdict is_hyperpolar_homogeneous(const SymmetricPair& pair, const Subspace& h, std::uint64_t seed,
                                             double tol = 1e-9);

/// Isotropy representation of k on p (coordinates in the orthonormal basis of p).
OrthogonalRep s_representation(const SymmetricPair& pair);
/// Adjoint representation on g in an orthonormal frame.
OrthogonalRep adjoint_representation(const LieAlgebra& lie);
/// Block sum of two representations of the same algebra.
OrthogonalRep diagonal_sum(const OrthogonalRep& a, const OrthogonalRep& b);

}  // namespace polaris

#endif
