#include "polaris/weyl.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

namespace polaris
{

int RestrictedRootSystem::total_multiplicity() const
{
  int s = 0;
  for (const Root& r : roots)
    s += r.multiplicity;
  return s;
}

namespace
{

struct Cluster
{
  double value = 0.0;
  std::vector<int> members;
};

// Splits sorted eigenvalues wherever consecutive values differ by more than gap.
std::vector<Cluster> cluster_values(const Vec& sorted, double gap, double* min_gap, double* max_spread)
{
  std::vector<Cluster> out;
  *min_gap = std::numeric_limits<double>::infinity();
  *max_spread = 0.0;
  for (int i = 0; i < sorted.size(); ++i)
  {
    if (out.empty() || sorted(i) - sorted(i - 1) > gap)
    {
      if (!out.empty())
        *min_gap = std::min(*min_gap, sorted(i) - sorted(i - 1));
      out.push_back({sorted(i), {i}});
    }
    else
    {
      out.back().members.push_back(i);
      *max_spread = std::max(*max_spread, sorted(i) - sorted(out.back().members.front()));
    }
  }
  for (Cluster& c : out)
  {
    double s = 0.0;
    for (int i : c.members)
      s += sorted(i);
    c.value = s / static_cast<double>(c.members.size());
  }
  return out;
}

// Groups covectors that agree within tol; returns (representative, count).
std::vector<Root> group_covectors(const std::vector<Vec>& covs, double tol)
{
  std::vector<Root> out;
  for (const Vec& c : covs)
  {
    bool found = false;
    for (Root& r : out)
      if ((r.covector - c).norm() <= tol * (1.0 + c.norm()))
      {
        ++r.multiplicity;
        found = true;
        break;
      }
    if (!found)
      out.push_back({c, 1});
  }
  return out;
}

void append_pairs(RestrictedRootSystem& sys, const std::vector<Root>& positive)
{
  for (const Root& r : positive)
  {
    sys.roots.push_back(r);
    sys.roots.push_back({-r.covector, r.multiplicity});
  }
}

std::string gap_report(const char* what, double min_gap, double max_spread)
{
  std::ostringstream os;
  os << what << ": eigenvalue clustering is ambiguous (smallest gap " << min_gap << ", largest cluster spread "
     << max_spread << ")";
  return os.str();
}

}  // namespace

RestrictedRootSystem restricted_roots(const SymmetricPair& pair, const Subspace& a, std::uint64_t seed, double gap)
{
  const LieAlgebra& g = pair.algebra;
  if (a.dim() == 0)
    throw Error("restricted_roots: a is zero");
  if (!is_abelian_subspace(g, a).holds)
    throw Error("restricted_roots: a is not abelian");
  RestrictedRootSystem sys;
  sys.a = a;

  Rng rng(seed);
  const Vec hc = rng.unit(a.dim());
  const Vec h = a.basis * hc;
  const Mat& r = g.metric_factor();
  const Mat rinv = r.inverse();
  const Mat adh = r * g.ad(h) * rinv;  // antisymmetric in the orthonormal frame
  Eigen::SelfAdjointEigenSolver<Mat> es(adh * adh);
  const Vec mu = -es.eigenvalues().reverse();  // lambda(H)^2, ascending
  const Mat vecs = es.eigenvectors().rowwise().reverse();
  const auto clusters = cluster_values(mu, gap, &sys.min_gap, &sys.max_spread);

  const Mat& pb = pair.p.basis;
  const Mat proj_p = pb * pb.transpose() * g.inner();
  for (const Cluster& c : clusters)
  {
    if (std::abs(c.value) <= gap)
    {
      sys.zero_dim += static_cast<int>(c.members.size());
      continue;
    }
    if (c.members.size() % 2 != 0)
      throw Error(gap_report("restricted_roots", sys.min_gap, sys.max_spread));
    Mat e(g.dim(), static_cast<int>(c.members.size()));
    for (std::size_t j = 0; j < c.members.size(); ++j)
      e.col(static_cast<int>(j)) = rinv * vecs.col(c.members[j]);
    const Mat ep = orthonormalize(proj_p * e, g.inner());
    if (2 * ep.cols() != e.cols())
      throw Error(gap_report("restricted_roots", sys.min_gap, sys.max_spread));
    const double lam = std::sqrt(c.value);
    std::vector<Vec> covs;
    for (int j = 0; j < ep.cols(); ++j)
    {
      const Vec y = ep.col(j);
      const Vec z = g.bracket(h, y) / lam;
      Vec cov(a.dim());
      for (int b = 0; b < a.dim(); ++b)
        cov(b) = g.inner(g.bracket(a.basis.col(b), y), z);
      covs.push_back(cov);
    }
    append_pairs(sys, group_covectors(covs, 1e-6));
  }
  return sys;
}

RestrictedRootSystem representation_roots(const OrthogonalRep& rep, const Subspace& section, std::uint64_t seed,
                                          double gap)
{
  if (section.dim() == 0)
    throw Error("representation_roots: section is zero");
  RestrictedRootSystem sys;
  sys.a = section;
  if (rep.count() == 0)
  {
    sys.zero_dim = rep.space;
    return sys;
  }
  const LieAlgebra& g = rep.algebra;
  const Mat rinv = g.metric_factor().inverse();
  std::vector<Mat> b;
  for (int j = 0; j < rep.count(); ++j)
    b.push_back(rep.generator(rinv.col(j)));

  Rng rng(seed);
  const Vec h = section.basis * rng.unit(section.dim());
  Mat t = Mat::Zero(rep.space, rep.space);
  for (const Mat& bj : b)
  {
    const Vec v = bj * h;
    t += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(t);
  const auto clusters = cluster_values(es.eigenvalues(), gap, &sys.min_gap, &sys.max_spread);
  for (const Cluster& c : clusters)
  {
    if (std::abs(c.value) <= gap)
    {
      sys.zero_dim += static_cast<int>(c.members.size());
      continue;
    }
    const double lam = std::sqrt(c.value);
    std::vector<Vec> covs;
    for (int idx : c.members)
    {
      const Vec y = es.eigenvectors().col(idx);
      Mat x = Mat::Zero(rep.space, rep.space);
      for (const Mat& bj : b)
        x += (bj * h).dot(y) * bj;
      x /= lam;
      Vec cov(section.dim());
      for (int k = 0; k < section.dim(); ++k)
        cov(k) = (x * section.basis.col(k)).dot(y);
      covs.push_back(cov);
    }
    append_pairs(sys, group_covectors(covs, 1e-6));
  }
  return sys;
}

double ReflectionGroup::closure_residual() const
{
  double worst = 0.0;
  for (const Mat& x : elements)
    for (const Mat& y : elements)
    {
      const Mat xy = x * y;
      double best = std::numeric_limits<double>::infinity();
      for (const Mat& z : elements)
        best = std::min(best, (xy - z).cwiseAbs().maxCoeff());
      worst = std::max(worst, best);
    }
  return worst;
}

Mat reflection(const Vec& covector)
{
  const double nn = covector.squaredNorm();
  if (nn == 0.0)
    throw Error("reflection: zero root");
  return Mat::Identity(covector.size(), covector.size()) - 2.0 * covector * covector.transpose() / nn;
}

ReflectionGroup weyl_group_closure(const RestrictedRootSystem& roots, int cap)
{
  const int n = roots.a.dim();
  if (n == 0)
    throw Error("weyl_group_closure: a is zero");
  constexpr double kSame = 1e-8;
  auto index_of = [&](const std::vector<Mat>& list, const Mat& m) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if ((list[i] - m).cwiseAbs().maxCoeff() < kSame)
        return static_cast<int>(i);
    return -1;
  };
  ReflectionGroup w;
  for (const Root& r : roots.roots)
  {
    Mat s = reflection(r.covector);
    if (index_of(w.generators, s) < 0)
      w.generators.push_back(s);
  }
  w.elements.push_back(Mat::Identity(n, n));
  std::deque<int> queue{0};
  while (!queue.empty())
  {
    const Mat x = w.elements[queue.front()];
    queue.pop_front();
    for (const Mat& s : w.generators)
    {
      Mat y = s * x;
      if (index_of(w.elements, y) >= 0)
        continue;
      if (static_cast<int>(w.elements.size()) >= cap)
        throw Error("weyl_group_closure: closure exceeded " + std::to_string(cap) + " elements");
      w.elements.push_back(y);
      queue.push_back(static_cast<int>(w.elements.size()) - 1);
    }
  }
  return w;
}

double root_permutation_residual(const ReflectionGroup& w, const RestrictedRootSystem& roots)
{
  double worst = 0.0;
  for (const Mat& x : w.elements)
    for (const Root& r : roots.roots)
    {
      // covectors transform by the inverse transpose, which is x for orthogonal x
      const Vec img = x * r.covector;
      double best = std::numeric_limits<double>::infinity();
      for (const Root& s : roots.roots)
        best = std::min(best, (img - s.covector).norm());
      worst = std::max(worst, best);
    }
  return worst;
}

namespace
{

double objective(const GroupAction& action, const Vec& p, const Vec& gq)
{
  if (action.manifold.kind() == ManifoldKind::ProductOfSpheres)
  {
    const double d = action.manifold.distance(p, gq);
    return d * d;
  }
  return (p - gq).squaredNorm();
}

// Newton steps on f(s) = |p - exp(sum s_i A_i) g q|^2 in the left chart.
Mat newton_polish(const GroupAction& action, const Vec& p, const Vec& q, Mat g, int* evals)
{
  const OrthogonalRep& rep = action.rep;
  const int n = rep.count();
  double f = objective(action, p, g * q);
  for (int it = 0; it < 30; ++it)
  {
    const Vec gq = g * q;
    Vec grad(n);
    Mat hess(n, n);
    for (int i = 0; i < n; ++i)
    {
      grad(i) = -2.0 * p.dot(rep.generators[i] * gq);
      for (int j = 0; j <= i; ++j)
      {
        const Mat sym = rep.generators[i] * rep.generators[j] + rep.generators[j] * rep.generators[i];
        hess(i, j) = hess(j, i) = -p.dot(sym * gq);
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hess);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    Vec s = Vec::Zero(n);
    for (int k = 0; k < n; ++k)
    {
      const double mu = es.eigenvalues()(k);
      if (mu > 1e-10 * std::max(top, 1e-300))
        s -= (es.eigenvectors().col(k).dot(grad) / mu) * es.eigenvectors().col(k);
    }
    if (s.norm() < 1e-15)
      break;
    const Mat cand = Mat(rep.generator(s).exp()) * g;
    const double fc = objective(action, p, cand * q);
    ++*evals;
    if (!(fc < f))
      break;
    g = cand;
    f = fc;
  }
  return g;
}

}  // namespace

QuotientDistance quotient_distance(const GroupAction& action, const Vec& p, const Vec& q, const OptimizerConfig& cfg)
{
  const OrthogonalRep& rep = action.rep;
  QuotientDistance best;
  best.value = action.manifold.distance(p, q);
  best.group_element = Mat::Identity(rep.space, rep.space);
  if (rep.count() == 0)
    return best;
  const OneParameterGroups groups(rep);
  const bool linear_chord = action.manifold.kind() != ManifoldKind::ProductOfSpheres;
  double best_f = objective(action, p, q);

  for (int r = 0; r < cfg.restarts; ++r)
  {
    Rng rng(derive_seed(cfg.seed, r));
    Mat g = Mat::Identity(rep.space, rep.space);
    if (r > 0)
    {
      Vec t(rep.count());
      for (int i = 0; i < t.size(); ++i)
        t(i) = rng.uniform(-std::numbers::pi, std::numbers::pi);
      g = action.group_element(t);
    }
    double f = objective(action, p, g * q);
    int evals = 1;
    double step = cfg.initial_step;
    while (evals < cfg.evaluations && step > 1e-12)
    {
      bool improved = false;
      for (int i = 0; i < rep.count() && evals < cfg.evaluations; ++i)
        for (double sign : {1.0, -1.0})
        {
          const Mat cand = groups.exp(i, sign * step) * g;
          const double fc = objective(action, p, cand * q);
          ++evals;
          if (fc < f)
          {
            g = cand;
            f = fc;
            improved = true;
            break;
          }
        }
      if (!improved)
        step *= 0.5;
    }
    if (linear_chord)
    {
      g = newton_polish(action, p, q, g, &evals);
      f = objective(action, p, g * q);
    }
    best.evaluations += evals;
    if (f < best_f)
    {
      best_f = f;
      best.group_element = g;
    }
  }
  best.value = action.manifold.distance(p, best.group_element * q);
  return best;
}

Vec apply_on_section(const Subspace& section, const Mat& w, const Vec& x)
{
  const Vec c = section.basis.transpose() * x;
  return x + section.basis * (w * c - c);
}

double section_distance(const GroupAction& action, const Subspace& section, const ReflectionGroup& w, const Vec& x,
                        const Vec& y)
{
  double best = std::numeric_limits<double>::infinity();
  for (const Mat& e : w.elements)
    best = std::min(best, action.manifold.distance(x, apply_on_section(section, e, y)));
  return best;
}

SectionOrbitReport section_orbit_check(const GroupAction& action, const Subspace& section, const ReflectionGroup& w,
                                       const Vec& p, const SectionSampler& sampler)
{
  const OrthogonalRep& rep = action.rep;
  if (out_of_span(p, section.basis) > 1e-9 * (1.0 + p.norm()))
    throw Error("section_orbit_check: p is not on the section");
  SectionOrbitReport out;
  out.samples = sampler.samples;
  const Mat q = Mat::Identity(rep.space, rep.space) - section.basis * section.basis.transpose();
  std::vector<Vec> images;
  for (const Mat& e : w.elements)
    images.push_back(apply_on_section(section, e, p));

  Rng rng(sampler.seed);
  for (int s = 0; s < sampler.samples; ++s)
  {
    Vec t(rep.count());
    for (int i = 0; i < t.size(); ++i)
      t(i) = rng.uniform(-std::numbers::pi, std::numbers::pi);
    Mat g = action.group_element(t);
    // Gauss-Newton on |(1 - P_sigma) g p|^2 over left perturbations
    for (int it = 0; it < 25; ++it)
    {
      const Vec gp = g * p;
      const Vec r = q * gp;
      if (r.norm() < 1e-13 * (1.0 + p.norm()))
        break;
      Mat jac(rep.space, rep.count());
      for (int i = 0; i < rep.count(); ++i)
        jac.col(i) = q * rep.generators[i] * gp;
      const Vec step = jac.completeOrthogonalDecomposition().solve(-r);
      g = Mat(rep.generator(step).exp()) * g;
    }
    const Vec gp = g * p;
    if ((q * gp).norm() >= sampler.near)
      continue;
    ++out.landed;
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& img : images)
      best = std::min(best, (gp - img).norm());
    out.worst_distance = std::max(out.worst_distance, best);
  }
  out.sparse = out.landed == 0;
  out.passed = out.worst_distance < sampler.match;
  return out;
}

ReductionReport reduction_isometry_check(const GroupAction& action, const Subspace& section, const ReflectionGroup& w,
                                         const ReductionSampler& sampler)
{
  ReductionReport out;
  out.pairs = sampler.pairs;
  out.max_excess = -std::numeric_limits<double>::infinity();
  auto sample = [&](Rng& rng) {
    Vec x = section.basis * rng.gaussian(section.dim());
    return action.manifold.kind() == ManifoldKind::Euclidean ? x : action.manifold.retract(x);
  };
  for (int k = 0; k < sampler.pairs; ++k)
  {
    Rng rng(derive_seed(sampler.seed, k));
    const Vec x = sample(rng);
    const Vec y = sample(rng);
    OptimizerConfig cfg = sampler.optimizer;
    cfg.seed = derive_seed(sampler.optimizer.seed, 1000003 + k);
    const double qd = quotient_distance(action, x, y, cfg).value;
    const double sw = section_distance(action, section, w, x, y);
    const double rel = std::abs(qd - sw) / std::max(sw, 1e-6);
    if (rel >= out.max_relative)
    {
      out.max_relative = rel;
      out.worst_pair = k;
    }
    out.max_excess = std::max(out.max_excess, qd - sw);
  }
  return out;
}

}  // namespace polaris
