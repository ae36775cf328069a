#ifndef POLARIS_MANIFOLD_HPP
#define POLARIS_MANIFOLD_HPP

#include "polaris/linalg.hpp"

#include <string>
#include <vector>

namespace polaris
{

enum class ManifoldKind
{
  Euclidean,
  UnitSphere,
  ProductOfSpheres
};

std::string to_string(ManifoldKind kind);
ManifoldKind parse_manifold_kind(const std::string& name);

/// Concrete ambient model embedded in R^n on which geodesics, parallel
/// transport and curvature are closed-form. A product of spheres is
/// S^{n1-1}(r1) x S^{n2-1}(r2) inside R^{n1} + R^{n2}.
class ModelManifold
{
public:
  static ModelManifold euclidean(int n);
  static ModelManifold unit_sphere(int n);
  static ModelManifold product_of_spheres(int n1, double r1, int n2, double r2);

  ManifoldKind kind() const { return m_kind; }
  int ambient_dim() const { return m_ambient; }
  /// Intrinsic dimension.
  int dim() const;
  const std::vector<int>& block_dims() const { return m_blocks; }
  const std::vector<double>& radii() const { return m_radii; }

  bool contains(const Vec& x, double tol = 1e-9) const;
  /// Nearest point of the model (radial normalization per factor).
  Vec retract(const Vec& x) const;
  /// Orthogonal projection of an ambient vector onto T_x M.
  Vec project(const Vec& x, const Vec& v) const;
  Mat tangent_projector(const Vec& x) const;
  /// Orthonormal basis of T_x M (columns, ambient coordinates).
  Mat tangent_basis(const Vec& x) const;

  Vec exp(const Vec& x, const Vec& v) const;
  /// Velocity of t -> exp(x, t v) at time t.
  Vec geodesic_velocity(const Vec& x, const Vec& v, double t) const;
  /// Parallel transport of w along t -> exp(x, t v) from 0 to t.
  Vec transport(const Vec& x, const Vec& v, const Vec& w, double t) const;
  /// R(X,Y)Z with the convention K(X,Y) = <R(X,Y)Y, X> for orthonormal X, Y.
  Vec curvature(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) const;
  double sectional_curvature(const Vec& x, const Vec& X, const Vec& Y) const;
  double distance(const Vec& x, const Vec& y) const;

private:
  ModelManifold(ManifoldKind kind, std::vector<int> blocks, std::vector<double> radii);

  ManifoldKind m_kind = ManifoldKind::Euclidean;
  int m_ambient = 0;
  std::vector<int> m_blocks;
  std::vector<double> m_radii;
};

}  // namespace polaris

#endif
