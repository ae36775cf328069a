#include "polaris/polarity.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace polaris
{

Mat OrthogonalRep::generator(const Vec& x) const
{
  Mat out = Mat::Zero(space, space);
  for (int i = 0; i < count(); ++i)
    out += x(i) * generators[i];
  return out;
}

Mat OrthogonalRep::orbit_tangent(const Vec& v) const
{
  Mat out(space, count());
  for (int i = 0; i < count(); ++i)
    out.col(i) = generators[i] * v;
  return out;
}

double OrthogonalRep::antisymmetry_residual() const
{
  double worst = 0.0;
  for (const Mat& a : generators)
    worst = std::max(worst, (a + a.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

double OrthogonalRep::representation_residual() const
{
  double worst = 0.0;
  const int n = count();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
    {
      Mat lhs = generators[i] * generators[j] - generators[j] * generators[i];
      for (int k = 0; k < n; ++k)
        lhs -= algebra.c(i, j, k) * generators[k];
      worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
    }
  return worst;
}

void OrthogonalRep::validate(double tol) const
{
  if (space < 1)
    throw Error("representation space must be nonempty");
  if (count() != algebra.dim())
    throw Error("representation needs one generator per basis vector of the algebra");
  for (const Mat& a : generators)
    if (a.rows() != space || a.cols() != space)
      throw Error("generator has wrong shape");
  double scale = 1.0;
  for (const Mat& a : generators)
    scale = std::max(scale, a.cwiseAbs().maxCoeff());
  if (double r = antisymmetry_residual(); r > tol * scale)
    throw Error("generators are not antisymmetric (residual " + std::to_string(r) + ")");
  if (double r = representation_residual(); r > tol * scale * scale)
    throw Error("generator commutators do not match the structure constants (residual " + std::to_string(r) + ")");
}

OrthogonalRep make_rep(const LieAlgebra& lie, std::vector<Mat> generators, bool restrict_to_sphere)
{
  OrthogonalRep rep;
  rep.algebra = lie;
  rep.space = generators.empty() ? 0 : static_cast<int>(generators.front().rows());
  rep.generators = std::move(generators);
  rep.restrict_to_sphere = restrict_to_sphere;
  return rep;
}

GroupAction GroupAction::linear(const OrthogonalRep& rep)
{
  return on(rep, rep.restrict_to_sphere ? ModelManifold::unit_sphere(rep.space) : ModelManifold::euclidean(rep.space));
}

GroupAction GroupAction::on(const OrthogonalRep& rep, const ModelManifold& manifold)
{
  if (manifold.ambient_dim() != rep.space)
    throw Error("manifold and representation live in different dimensions");
  GroupAction a;
  a.rep = rep;
  a.manifold = manifold;
  return a;
}

Vec GroupAction::sample_point(Rng& rng) const
{
  Vec x = rng.gaussian(rep.space);
  if (manifold.kind() == ManifoldKind::Euclidean)
    return x;
  return manifold.retract(x);
}

Mat GroupAction::orbit_basis(const Vec& x) const
{
  if (rep.count() == 0)
    return Mat(rep.space, 0);
  return range(rep.orbit_tangent(x));
}

Mat GroupAction::normal_basis(const Vec& x) const
{
  const Mat t = manifold.tangent_basis(x);
  const Mat o = orbit_basis(x);
  if (o.cols() == 0)
    return t;
  // vectors of T_x M orthogonal to the orbit
  const Mat k = kernel(o.transpose() * t);
  return orthonormalize(t * k);
}

Mat GroupAction::group_element(const Vec& t) const
{
  return Mat(rep.generator(t).exp());
}

OneParameterGroups::OneParameterGroups(const OrthogonalRep& rep)
{
  for (const Mat& a : rep.generators)
  {
    // antisymmetric, hence normal: diagonalizable with purely imaginary spectrum
    Eigen::ComplexEigenSolver<CMat> es(a.cast<std::complex<double>>());
    m_vectors.push_back(es.eigenvectors());
    m_inverses.push_back(es.eigenvectors().inverse());
    m_values.push_back(es.eigenvalues());
  }
}

Mat OneParameterGroups::exp(int i, double s) const
{
  const CMat& v = m_vectors[i];
  Eigen::VectorXcd d = (s * m_values[i]).array().exp();
  return (v * d.asDiagonal() * m_inverses[i]).real();
}

int orbit_rank(const OrthogonalRep& rep, const Vec& x, const RankThreshold& thr)
{
  if (rep.count() == 0)
    return 0;
  return numerical_rank(rep.orbit_tangent(x), thr);
}

Vec find_regular_point(const GroupAction& action, std::uint64_t seed, const RankThreshold& thr)
{
  constexpr int kDraws = 64;
  Rng rng(seed);
  Vec best;
  int best_rank = -1;
  for (int k = 0; k < kDraws; ++k)
  {
    Vec x = action.sample_point(rng);
    const int r = orbit_rank(action.rep, x, thr);
    if (r > best_rank)
    {
      best_rank = r;
      best = x;
    }
  }
  return best;
}

Vec find_regular_point(const OrthogonalRep& rep, std::uint64_t seed, const RankThreshold& thr)
{
  return find_regular_point(GroupAction::linear(rep), seed, thr);
}

int cohomogeneity(const GroupAction& action, std::uint64_t seed, const RankThreshold& thr)
{
  const Vec p = find_regular_point(action, seed, thr);
  return action.manifold.dim() - orbit_rank(action.rep, p, thr);
}

int cohomogeneity(const OrthogonalRep& rep, std::uint64_t seed, const RankThreshold& thr)
{
  return cohomogeneity(GroupAction::linear(rep), seed, thr);
}

namespace
{

double generator_scale(const OrthogonalRep& rep)
{
  double s = 0.0;
  for (const Mat& a : rep.generators)
    s = std::max(s, a.norm());
  return 1.0 + s;
}

}  // namespace

PolarityVerdict is_polar_rep_at(const OrthogonalRep& rep, const Vec& p, double tol)
{
  PolarityVerdict out;
  out.basepoint = p;
  const int rank = orbit_rank(rep, p);
  out.cohomogeneity = rep.space - rank - (rep.restrict_to_sphere ? 1 : 0);
  // normal space of the orbit in V; on spheres it contains p itself
  Mat sigma = rank == 0 ? Mat(Mat::Identity(rep.space, rep.space))
                        : orthogonal_complement(range(rep.orbit_tangent(p)), rep.space);
  double worst = 0.0;
  PairingWitness wit;
  for (int i = 0; i < rep.count(); ++i)
  {
    const Mat pairing = sigma.transpose() * rep.generators[i] * sigma;
    Eigen::Index r, c;
    const double m = pairing.cwiseAbs().maxCoeff(&r, &c);
    if (m > worst)
    {
      worst = m;
      wit.generator = i;
      wit.v = sigma.col(r);
      wit.w = sigma.col(c);
      wit.pairing = pairing(r, c);
    }
  }
  out.residual = worst;
  if (worst <= tol * generator_scale(rep))
  {
    out.polar = true;
    out.section = Subspace{"V", sigma};
    return out;
  }
  out.polar = false;
  out.indeterminate = worst < kRobustWitness;
  out.witness = wit;
  return out;
}

PolarityVerdict is_polar_rep(const OrthogonalRep& rep, std::uint64_t seed, double tol)
{
  return is_polar_rep_at(rep, find_regular_point(rep, seed), tol);
}

PolarityVerdict is_polar(const GroupAction& action, std::uint64_t seed, double tol)
{
  if (action.manifold.kind() != ManifoldKind::ProductOfSpheres)
  {
    OrthogonalRep rep = action.rep;
    rep.restrict_to_sphere = action.manifold.kind() == ManifoldKind::UnitSphere;
    return is_polar_rep(rep, seed, tol);
  }
  const Vec p = find_regular_point(action, seed);
  PolarityVerdict out;
  out.basepoint = p;
  out.cohomogeneity = action.manifold.dim() - orbit_rank(action.rep, p);
  if (out.cohomogeneity > 1)
    throw Error("polarity on a product of spheres is only decided in cohomogeneity <= 1");
  // a normal geodesic through a regular point meets every orbit orthogonally
  out.polar = true;
  out.section = Subspace{"T_pM", action.normal_basis(p)};
  return out;
}

OrthogonalRep slice_rep(const GroupAction& action, const Vec& p, const RankThreshold& thr)
{
  const OrthogonalRep& rep = action.rep;
  const LieAlgebra& g = rep.algebra;
  const Mat normal = action.normal_basis(p);
  OrthogonalRep out;
  out.space = static_cast<int>(normal.cols());
  if (rep.count() == 0)
    return out;
  // isotropy algebra in orthonormal algebra coordinates y = R x
  const Mat rinv = g.metric_factor().inverse();
  const Mat k = kernel(rep.orbit_tangent(p) * rinv, thr);
  if (k.cols() == 0)
    return out;
  const Subspace iso{g.name(), rinv * k};
  out.algebra = subalgebra(g, iso);
  for (int j = 0; j < iso.dim(); ++j)
    out.generators.push_back(normal.transpose() * rep.generator(iso.basis.col(j)) * normal);
  return out;
}

OrthogonalRep slice_rep(const OrthogonalRep& rep, const Vec& p, const RankThreshold& thr)
{
  return slice_rep(GroupAction::linear(rep), p, thr);
}

OrbifoldVerdict orbifold_point_test(const GroupAction& action, const Vec& p, std::uint64_t seed, double tol)
{
  if (!action.manifold.contains(p))
    throw Error("orbifold_point_test: point is not on the manifold");
  OrbifoldVerdict out;
  const OrthogonalRep slice = slice_rep(action, p);
  out.isotropy_dim = slice.count();
  if (slice.space == 0)
  {
    out.short_circuit = true;
    return out;
  }
  out.slice_cohomogeneity = slice.space - (slice.count() ? orbit_rank(slice, find_regular_point(slice, seed)) : 0);
  if (out.slice_cohomogeneity <= 2)
  {
    out.short_circuit = true;
    out.orbifold = true;
    return out;
  }
  out.slice_verdict = is_polar_rep(slice, seed, tol);
  out.orbifold = out.slice_verdict->polar;
  return out;
}

HomogeneousVerdict is_polar_homogeneous(const SymmetricPair& pair, const Subspace& h, std::uint64_t seed, double tol)
{
  const LieAlgebra& g = pair.algebra;
  if (h.dim() == 0)
    throw Error("is_polar_homogeneous: h is zero");
  if (auto v = is_subalgebra(g, h, 1e-8); !v.holds)
    throw Error("is_polar_homogeneous: h is not a subalgebra (residual " + std::to_string(v.residual) + ")");

  const Mat& gram = g.inner();
  const Mat& pb = pair.p.basis;
  auto projected_rank = [&](const Mat& hb) { return numerical_rank(metric_factor(gram) * pb * (pb.transpose() * gram * hb)); };

  // conjugate h until its orbit through o has maximal dimension
  constexpr int kDraws = 64;
  Rng rng(seed);
  Mat best = h.basis;
  int best_rank = projected_rank(h.basis);
  int best_draw = 0, hits = 1;
  if (g.has_realization())
  {
    for (int k = 1; k < kDraws; ++k)
    {
      const Vec x = g.whole().basis * (std::numbers::pi * rng.gaussian(g.dim()));
      const Mat hb = g.adjoint_action(g.exp(-x)) * h.basis;
      const int r = projected_rank(hb);
      if (r > best_rank)
      {
        best_rank = r;
        best = hb;
        best_draw = k;
        hits = 1;
      }
      else if (r == best_rank)
        ++hits;
    }
    if (hits < 8)
      throw Error("is_polar_homogeneous: basepoint regularization did not stabilize after 64 conjugations");
  }

  HomogeneousVerdict out;
  out.orbit_dim = best_rank;
  out.conjugation_draw = best_draw;
  out.conjugate = Subspace{g.name(), orthonormalize(best, gram)};
  const Mat& hb = out.conjugate.basis;
  const Mat k = kernel(hb.transpose() * gram * pb);
  out.section = Subspace{g.name(), pb * k};
  const Subspace& m = out.section;

  const double scale = 1.0 + structure_scale(g);
  const Verdict lts = is_lie_triple_system(g, m, tol);
  out.lts_residual = lts.residual;
  double orth = 0.0;
  std::vector<int> orth_witness;
  for (int a = 0; a < m.dim(); ++a)
    for (int b = a + 1; b < m.dim(); ++b)
    {
      const Vec br = g.bracket(m.basis.col(a), m.basis.col(b));
      for (int j = 0; j < hb.cols(); ++j)
      {
        const double v = std::abs(g.inner(br, hb.col(j)));
        if (v > orth)
        {
          orth = v;
          orth_witness = {a, b, j};
        }
      }
    }
  out.orthogonality_residual = orth;
  const Verdict ab = is_abelian_subspace(g, m, tol);
  out.abelian_residual = ab.residual;

  const bool orth_ok = orth <= tol * scale;
  out.polar = lts.holds && orth_ok;
  out.hyperpolar = out.polar && ab.holds;
  if (!out.polar)
  {
    out.witness = lts.holds ? orth_witness : lts.witness;
    out.indeterminate = std::max(lts.holds ? 0.0 : lts.residual, orth_ok ? 0.0 : orth) < kRobustWitness;
  }
  return out;
}

HomogeneousVerdict is_hyperpolar_homogeneous(const SymmetricPair& pair, const Subspace& h, std::uint64_t seed,
                                             double tol)
{
  return is_polar_homogeneous(pair, h, seed, tol);
}

OrthogonalRep s_representation(const SymmetricPair& pair)
{
  const LieAlgebra& g = pair.algebra;
  const Mat& pb = pair.p.basis;
  OrthogonalRep rep;
  rep.space = pair.p.dim();
  if (pair.k.dim() == 0)
    return rep;
  rep.algebra = subalgebra(g, pair.k);
  for (int j = 0; j < pair.k.dim(); ++j)
    rep.generators.push_back(pb.transpose() * g.inner() * g.ad(pair.k.basis.col(j)) * pb);
  return rep;
}

OrthogonalRep adjoint_representation(const LieAlgebra& lie)
{
  const Mat& r = lie.metric_factor();
  const Mat rinv = r.inverse();
  std::vector<Mat> gens;
  const Mat id = Mat::Identity(lie.dim(), lie.dim());
  for (int i = 0; i < lie.dim(); ++i)
    gens.push_back(r * lie.ad(id.col(i)) * rinv);
  return make_rep(lie, std::move(gens));
}

OrthogonalRep diagonal_sum(const OrthogonalRep& a, const OrthogonalRep& b)
{
  if (a.count() != b.count())
    throw Error("diagonal_sum: representations of different algebras");
  std::vector<Mat> gens;
  const int n = a.space + b.space;
  for (int i = 0; i < a.count(); ++i)
  {
    Mat m = Mat::Zero(n, n);
    m.topLeftCorner(a.space, a.space) = a.generators[i];
    m.bottomRightCorner(b.space, b.space) = b.generators[i];
    gens.push_back(m);
  }
  return make_rep(a.algebra, std::move(gens), a.restrict_to_sphere);
}

}  // namespace polaris
