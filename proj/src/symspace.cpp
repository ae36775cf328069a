#include "polaris/symspace.hpp"

#include <cmath>
#include <sstream>

namespace polaris
{

double SymmetricPair::grading_residual() const
{
  const LieAlgebra& g = algebra;
  double worst = 0.0;
  auto check = [&](const Subspace& a, const Subspace& b, const Subspace& target) {
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j)
        worst = std::max(worst, out_of_span(g.bracket(a.basis.col(i), b.basis.col(j)), target.basis, g.inner()));
  };
  check(k, k, k);
  check(k, p, p);
  check(p, p, k);
  return worst;
}

Mat involution_from_realization(const LieAlgebra& lie, const std::function<CMat(const CMat&)>& f)
{
  Mat theta = lie.induced_map(f);
  // entries are +-1 / 0 up to rounding for the standard models
  for (int i = 0; i < theta.size(); ++i)
    if (std::abs(theta.data()[i]) < 1e-14)
      theta.data()[i] = 0.0;
  return theta;
}

SymmetricPair cartan_decompose(const LieAlgebra& lie, const Mat& theta, double tol)
{
  const int n = lie.dim();
  if (theta.rows() != n || theta.cols() != n)
    throw Error("cartan_decompose: involution has wrong shape");
  const double scale = 1.0 + structure_scale(lie);
  const Mat id = Mat::Identity(n, n);

  const double inv_res = (theta * theta - id).cwiseAbs().maxCoeff();
  if (inv_res > tol)
  {
    std::ostringstream os;
    os << "cartan_decompose: theta is not involutive (residual " << inv_res << ")";
    throw Error(os.str());
  }
  const double iso_res = (theta.transpose() * lie.inner() * theta - lie.inner()).cwiseAbs().maxCoeff();
  if (iso_res > tol * (1.0 + lie.inner().cwiseAbs().maxCoeff()))
  {
    std::ostringstream os;
    os << "cartan_decompose: theta does not preserve the inner product (residual " << iso_res << ")";
    throw Error(os.str());
  }
  double aut_res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
    {
      Vec lhs = theta * lie.bracket(id.col(i), id.col(j));
      Vec rhs = lie.bracket(theta.col(i), theta.col(j));
      aut_res = std::max(aut_res, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  if (aut_res > tol * scale)
  {
    std::ostringstream os;
    os << "cartan_decompose: theta is not an automorphism (residual " << aut_res << ")";
    throw Error(os.str());
  }

  SymmetricPair pair;
  pair.algebra = lie;
  pair.theta = theta;
  // (1 + theta)/2 and (1 - theta)/2 are the eigenprojections
  pair.k = Subspace{lie.name(), orthonormalize(0.5 * (id + theta), lie.inner())};
  pair.p = Subspace{lie.name(), orthonormalize(0.5 * (id - theta), lie.inner())};
  if (pair.k.dim() + pair.p.dim() != n)
    throw Error("cartan_decompose: eigenspaces do not span the algebra");
  return pair;
}

Subspace maximal_abelian(const SymmetricPair& pair, std::uint64_t seed, const RankThreshold& thr)
{
  const LieAlgebra& g = pair.algebra;
  const Subspace& p = pair.p;
  if (p.dim() < 1)
    throw Error("maximal_abelian: p is zero");
  Rng rng(seed);
  constexpr int kAttempts = 16;
  constexpr int kCertificates = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt)
  {
    const Vec x = p.basis * rng.gaussian(p.dim());
    Subspace a = centralizer_in(g, x, p, thr);
    if (a.dim() == 0)
      continue;
    if (!is_abelian_subspace(g, a).holds)
      continue;
    bool certified = true;
    for (int c = 0; c < kCertificates && certified; ++c)
    {
      const Vec y = a.basis * rng.gaussian(a.dim());
      Subspace ay = centralizer_in(g, y, p, thr);
      if (ay.dim() != a.dim() || principal_angles(ay.basis, a.basis, g.inner()).maxCoeff() > 1e-8)
        certified = false;
    }
    if (certified)
      return a;
  }
  throw Error("maximal_abelian: could not certify maximality (degenerate metric or tolerance too tight)");
}

namespace
{

void require_in_p(const SymmetricPair& pair, const Vec& v, double tol, const char* what)
{
  const double r = out_of_span(v, pair.p.basis, pair.algebra.inner());
  if (r > tol * (1.0 + pair.algebra.norm(v)))
    throw Error(std::string(what) + ": input is not in p (residual " + std::to_string(r) + ")");
}

}  // namespace

Vec curvature_operator(const SymmetricPair& pair, const Vec& x, const Vec& y, const Vec& z, double tol)
{
  require_in_p(pair, x, tol, "curvature_operator");
  require_in_p(pair, y, tol, "curvature_operator");
  require_in_p(pair, z, tol, "curvature_operator");
  const LieAlgebra& g = pair.algebra;
  return -g.bracket(g.bracket(x, y), z);
}

double sectional_curvature(const SymmetricPair& pair, const Vec& x, const Vec& y, double tol)
{
  const LieAlgebra& g = pair.algebra;
  const double xx = g.inner(x, x), yy = g.inner(y, y), xy = g.inner(x, y);
  const double denom = xx * yy - xy * xy;
  if (denom <= 1e-20 * xx * yy)
    throw Error("sectional_curvature: vectors are numerically dependent");
  return g.inner(curvature_operator(pair, x, y, y, tol), x) / denom;
}

ProbeVerdict cartan_hermann_probe(const SymmetricPair& pair, const Subspace& s, const BrokenGeodesicSampler& sampler)
{
  const LieAlgebra& g = pair.algebra;
  if (!g.has_realization())
    throw Error("cartan_hermann_probe: symmetric pair needs a matrix realization for transport");
  if (s.dim() == 0)
    return {};
  for (int i = 0; i < s.dim(); ++i)
    require_in_p(pair, s.basis.col(i), 1e-8, "cartan_hermann_probe");
  if (!(sampler.min_length > 0.0) || sampler.max_length < sampler.min_length)
    throw Error("cartan_hermann_probe: sampler produces degenerate legs");

  ProbeVerdict out;
  for (int n = 0; n < sampler.geodesics; ++n)
  {
    Rng rng(derive_seed(sampler.seed, n));
    const Vec c1 = rng.unit(s.dim());
    const Vec c2 = rng.unit(s.dim());
    const double l1 = rng.uniform(sampler.min_length, sampler.max_length);
    const double l2 = rng.uniform(sampler.min_length, sampler.max_length);
    // first leg Exp(t X) o with X in S; the transported S at the break point
    // is Ad(g1) S in the left-trivialized picture, and the second leg leaves
    // in direction Ad(g1) Y with Y in S
    const Vec x = s.basis * c1;
    const Vec y = s.basis * c2;
    const CMat g1 = g.exp(l1 * x);
    const Vec y_at_break = g.adjoint_action(g1) * y;
    const CMat g2 = g.exp(l2 * y_at_break) * g1;
    const Mat ad_g = g.adjoint_action(g2);
    const Mat ps = ad_g * s.basis;
    const Mat ps_basis = orthonormalize(ps, g.inner());

    double worst = 0.0;
    for (int a = 0; a < s.dim(); ++a)
      for (int b = a + 1; b < s.dim(); ++b)
      {
        const Vec uv = g.bracket(ps.col(a), ps.col(b));
        for (int c = 0; c < s.dim(); ++c)
        {
          const Vec r = -g.bracket(uv, ps.col(c));
          worst = std::max(worst, out_of_span(r, ps_basis, g.inner()));
        }
      }
    if (worst > out.worst_residual || out.worst_geodesic < 0)
    {
      out.worst_residual = worst;
      out.worst_geodesic = n;
      out.first_direction = c1;
      out.second_direction = c2;
      out.first_length = l1;
      out.second_length = l2;
    }
  }
  out.passed = out.worst_residual <= sampler.tolerance;
  return out;
}

ProbeVerdict cartan_hermann_probe(const ModelManifold& manifold, const Vec& point, const Mat& s,
                                  const BrokenGeodesicSampler& sampler)
{
  if (!manifold.contains(point))
    throw Error("cartan_hermann_probe: point is not on the manifold");
  if (s.cols() == 0)
    return {};
  if (!(sampler.min_length > 0.0) || sampler.max_length < sampler.min_length)
    throw Error("cartan_hermann_probe: sampler produces degenerate legs");
  for (int i = 0; i < s.cols(); ++i)
    if ((manifold.project(point, s.col(i)) - s.col(i)).norm() > 1e-9)
      throw Error("cartan_hermann_probe: S is not tangent at the point");

  ProbeVerdict out;
  const int k = static_cast<int>(s.cols());
  for (int n = 0; n < sampler.geodesics; ++n)
  {
    Rng rng(derive_seed(sampler.seed, n));
    const Vec c1 = rng.unit(k);
    const Vec c2 = rng.unit(k);
    const double l1 = rng.uniform(sampler.min_length, sampler.max_length);
    const double l2 = rng.uniform(sampler.min_length, sampler.max_length);

    const Vec v1 = s * c1;
    const Vec q1 = manifold.exp(point, l1 * v1);
    Mat s1(s.rows(), k);
    for (int j = 0; j < k; ++j)
      s1.col(j) = manifold.transport(point, l1 * v1, s.col(j), 1.0);
    const Vec v2 = s1 * c2;
    Mat s2(s.rows(), k);
    for (int j = 0; j < k; ++j)
      s2.col(j) = manifold.transport(q1, l2 * v2, s1.col(j), 1.0);
    const Vec q2 = manifold.exp(q1, l2 * v2);
    const Mat basis = orthonormalize(s2);

    double worst = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        for (int c = 0; c < k; ++c)
          worst = std::max(worst, out_of_span(manifold.curvature(q2, s2.col(a), s2.col(b), s2.col(c)), basis));
    if (worst > out.worst_residual || out.worst_geodesic < 0)
    {
      out.worst_residual = worst;
      out.worst_geodesic = n;
      out.first_direction = c1;
      out.second_direction = c2;
      out.first_length = l1;
      out.second_length = l2;
    }
  }
  out.passed = out.worst_residual <= sampler.tolerance;
  return out;
}

}  // namespace polaris
