#include "polaris/manifold.hpp"

#include <cmath>

namespace polaris
{

std::string to_string(ManifoldKind kind)
{
  switch (kind)
  {
  case ManifoldKind::Euclidean:
    return "euclidean";
  case ManifoldKind::UnitSphere:
    return "unit-sphere";
  case ManifoldKind::ProductOfSpheres:
    return "product-of-spheres";
  }
  return "unknown";
}

ManifoldKind parse_manifold_kind(const std::string& name)
{
  if (name == "euclidean")
    return ManifoldKind::Euclidean;
  if (name == "unit-sphere" || name == "sphere")
    return ManifoldKind::UnitSphere;
  if (name == "product-of-spheres" || name == "product-spheres")
    return ManifoldKind::ProductOfSpheres;
  throw Error("unknown manifold kind '" + name + "'");
}

ModelManifold::ModelManifold(ManifoldKind kind, std::vector<int> blocks, std::vector<double> radii)
    : m_kind(kind), m_blocks(std::move(blocks)), m_radii(std::move(radii))
{
  for (int b : m_blocks)
  {
    if (b < 1)
      throw Error("manifold block dimension must be positive");
    m_ambient += b;
  }
  for (double r : m_radii)
    if (!(r > 0.0))
      throw Error("sphere radii must be positive");
}

ModelManifold ModelManifold::euclidean(int n)
{
  return ModelManifold(ManifoldKind::Euclidean, {n}, {});
}

ModelManifold ModelManifold::unit_sphere(int n)
{
  return ModelManifold(ManifoldKind::UnitSphere, {n}, {1.0});
}

ModelManifold ModelManifold::product_of_spheres(int n1, double r1, int n2, double r2)
{
  return ModelManifold(ManifoldKind::ProductOfSpheres, {n1, n2}, {r1, r2});
}

int ModelManifold::dim() const
{
  if (m_kind == ManifoldKind::Euclidean)
    return m_ambient;
  return m_ambient - static_cast<int>(m_blocks.size());
}

namespace
{

// Per-factor helpers for a round sphere of radius r in R^k.

Vec sphere_exp(const Vec& x, const Vec& v, double r)
{
  const double speed = v.norm();
  if (speed == 0.0)
    return x;
  const double a = speed / r;
  return std::cos(a) * x + (r * std::sin(a) / speed) * v;
}

Vec sphere_velocity(const Vec& x, const Vec& v, double r, double t)
{
  const double speed = v.norm();
  if (speed == 0.0)
    return v;
  const double a = speed * t / r;
  return -std::sin(a) * (speed / r) * x + std::cos(a) * v;
}

Vec sphere_transport(const Vec& x, const Vec& v, const Vec& w, double r, double t)
{
  const double speed = v.norm();
  if (speed == 0.0)
    return w;
  const Vec vhat = v / speed;
  const Vec xhat = x / r;
  const double along = w.dot(vhat);
  const double a = speed * t / r;
  return w - along * vhat + along * (std::cos(a) * vhat - std::sin(a) * xhat);
}

}  // namespace

bool ModelManifold::contains(const Vec& x, double tol) const
{
  if (x.size() != m_ambient)
    return false;
  if (m_kind == ManifoldKind::Euclidean)
    return true;
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    if (std::abs(x.segment(off, m_blocks[b]).norm() - m_radii[b]) > tol * m_radii[b])
      return false;
    off += m_blocks[b];
  }
  return true;
}

Vec ModelManifold::retract(const Vec& x) const
{
  if (m_kind == ManifoldKind::Euclidean)
    return x;
  Vec out = x;
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    auto seg = out.segment(off, m_blocks[b]);
    const double n = seg.norm();
    if (n == 0.0)
      throw Error("cannot retract the origin of a sphere factor");
    seg *= m_radii[b] / n;
    off += m_blocks[b];
  }
  return out;
}

Vec ModelManifold::project(const Vec& x, const Vec& v) const
{
  if (m_kind == ManifoldKind::Euclidean)
    return v;
  Vec out = v;
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const Vec xs = x.segment(off, m_blocks[b]);
    const double nn = xs.squaredNorm();
    out.segment(off, m_blocks[b]) -= xs * (xs.dot(v.segment(off, m_blocks[b])) / nn);
    off += m_blocks[b];
  }
  return out;
}

Mat ModelManifold::tangent_projector(const Vec& x) const
{
  Mat p(m_ambient, m_ambient);
  const Mat id = Mat::Identity(m_ambient, m_ambient);
  for (int j = 0; j < m_ambient; ++j)
    p.col(j) = project(x, id.col(j));
  return p;
}

Mat ModelManifold::tangent_basis(const Vec& x) const
{
  // per-factor bases keep product frames block-structured
  Mat out = Mat::Zero(m_ambient, dim());
  int off = 0, col = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const int k = m_blocks[b];
    Mat local;
    if (m_kind == ManifoldKind::Euclidean)
      local = Mat::Identity(k, k);
    else
    {
      const Vec xs = x.segment(off, k) / x.segment(off, k).norm();
      Mat cand(k, k + 1);
      cand.col(0) = xs;
      cand.rightCols(k) = Mat::Identity(k, k);
      Mat q = orthonormalize(cand);
      local = q.rightCols(q.cols() - 1);
    }
    out.block(off, col, k, local.cols()) = local;
    off += k;
    col += static_cast<int>(local.cols());
  }
  return out;
}

Vec ModelManifold::exp(const Vec& x, const Vec& v) const
{
  if (m_kind == ManifoldKind::Euclidean)
    return x + v;
  Vec out(m_ambient);
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const int k = m_blocks[b];
    out.segment(off, k) = sphere_exp(x.segment(off, k), v.segment(off, k), m_radii[b]);
    off += k;
  }
  return out;
}

Vec ModelManifold::geodesic_velocity(const Vec& x, const Vec& v, double t) const
{
  if (m_kind == ManifoldKind::Euclidean)
    return v;
  Vec out(m_ambient);
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const int k = m_blocks[b];
    out.segment(off, k) = sphere_velocity(x.segment(off, k), v.segment(off, k), m_radii[b], t);
    off += k;
  }
  return out;
}

Vec ModelManifold::transport(const Vec& x, const Vec& v, const Vec& w, double t) const
{
  if (m_kind == ManifoldKind::Euclidean)
    return w;
  Vec out(m_ambient);
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const int k = m_blocks[b];
    out.segment(off, k) =
        sphere_transport(x.segment(off, k), v.segment(off, k), w.segment(off, k), m_radii[b], t);
    off += k;
  }
  return out;
}

Vec ModelManifold::curvature(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) const
{
  (void)x;
  Vec out = Vec::Zero(m_ambient);
  if (m_kind == ManifoldKind::Euclidean)
    return out;
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const int k = m_blocks[b];
    const double kappa = 1.0 / (m_radii[b] * m_radii[b]);
    const Vec xs = X.segment(off, k), ys = Y.segment(off, k), zs = Z.segment(off, k);
    out.segment(off, k) = kappa * (ys.dot(zs) * xs - xs.dot(zs) * ys);
    off += k;
  }
  return out;
}

double ModelManifold::sectional_curvature(const Vec& x, const Vec& X, const Vec& Y) const
{
  const double denom = X.squaredNorm() * Y.squaredNorm() - std::pow(X.dot(Y), 2);
  if (denom <= 1e-24 * X.squaredNorm() * Y.squaredNorm())
    throw Error("sectional_curvature: vectors are linearly dependent");
  return curvature(x, X, Y, Y).dot(X) / denom;
}

double ModelManifold::distance(const Vec& x, const Vec& y) const
{
  if (m_kind == ManifoldKind::Euclidean)
    return (x - y).norm();
  double sq = 0.0;
  int off = 0;
  for (std::size_t b = 0; b < m_blocks.size(); ++b)
  {
    const int k = m_blocks[b];
    const double r = m_radii[b];
    const double chord = (x.segment(off, k) - y.segment(off, k)).norm();
    const double d = 2.0 * r * std::asin(std::min(1.0, chord / (2.0 * r)));
    sq += d * d;
    off += k;
  }
  return std::sqrt(sq);
}

}  // namespace polaris
