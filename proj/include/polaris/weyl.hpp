#ifndef POLARIS_WEYL_HPP
#define POLARIS_WEYL_HPP

#include "polaris/polarity.hpp"

namespace polaris
{

/// Linear functional on a (coordinates w.r.t. its orthonormal basis).
struct Root
{
  Vec covector;
  int multiplicity = 1;
};

struct RestrictedRootSystem
{
  Subspace a;
  std::vector<Root> roots;
  /// dimension of the zero eigenspace (k_0 + a for a symmetric pair)
  int zero_dim = 0;
  /// smallest gap between distinct eigenvalue clusters
  double min_gap = 0.0;
  /// largest spread inside one cluster
  double max_spread = 0.0;

  int total_multiplicity() const;
};

/// Roots from the eigenclusters of (ad H)^2 on g for a generic unit H in a.
RestrictedRootSystem restricted_roots(const SymmetricPair& pair, const Subspace& a, std::uint64_t seed,
                                      double gap = 1e-6);

/// Roots of a polar representation on its section from the orbit quadratic
/// form T(H) = sum_j (B_j H)(B_j H)^T over an orthonormal basis B_j.
RestrictedRootSystem representation_roots(const OrthogonalRep& rep, const Subspace& section, std::uint64_t seed,
                                          double gap = 1e-6);

struct ReflectionGroup
{
  std::vector<Mat> generators;
  std::vector<Mat> elements;

  int order() const { return static_cast<int>(elements.size()); }
  /// max deviation of products from the element list
  double closure_residual() const;
};

Mat reflection(const Vec& covector);

ReflectionGroup weyl_group_closure(const RestrictedRootSystem& roots, int cap = 5000);

/// Max over group elements and roots of the distance from w(root) to the root set.
double root_permutation_residual(const ReflectionGroup& w, const RestrictedRootSystem& roots);

struct OptimizerConfig
{
  int restarts = 32;
  int evaluations = 500;
  double initial_step = 1.0;
  std::uint64_t seed = 1;
};

struct QuotientDistance
{
  double value = 0.0;
  Mat group_element;
  int evaluations = 0;
};

/// Upper bound for the distance between the orbits of p and q.
QuotientDistance quotient_distance(const GroupAction& action, const Vec& p, const Vec& q,
                                   const OptimizerConfig& cfg = {});

/// Distance in section / W between x and y (section coordinates are ambient).
double section_distance(const GroupAction& action, const Subspace& section, const ReflectionGroup& w, const Vec& x,
                        const Vec& y);

/// Acts with a section-coordinate matrix on an ambient point of the section.
Vec apply_on_section(const Subspace& section, const Mat& w, const Vec& x);

struct SectionSampler
{
  int samples = 10000;
  double near = 1e-3;
  double match = 1e-2;
  std::uint64_t seed = 1;
};

struct SectionOrbitReport
{
  bool passed = true;
  bool sparse = false;
  int samples = 0;
  int landed = 0;
  double worst_distance = 0.0;
};

/// Gp ∩ Σ ⊂ W p: group samples are pulled onto Σ by Gauss-Newton on the
/// distance to Σ, then matched against the W-orbit of p.
SectionOrbitReport section_orbit_check(const GroupAction& action, const Subspace& section, const ReflectionGroup& w,
                                       const Vec& p, const SectionSampler& sampler = {});

struct ReductionSampler
{
  int pairs = 200;
  std::uint64_t seed = 1;
  OptimizerConfig optimizer;
};

struct ReductionReport
{
  int pairs = 0;
  double max_relative = 0.0;
  /// max of quotient - section/W (must stay below 1e-6)
  double max_excess = 0.0;
  int worst_pair = -1;
};

ReductionReport reduction_isometry_check(const GroupAction& action, const Subspace& section, const ReflectionGroup& w,
                                         const ReductionSampler& sampler = {});

}  // namespace polaris

#endif
