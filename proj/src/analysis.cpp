#include "polaris/analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>

namespace polaris
{

using nlohmann::json;

bool AnalysisReport::passed() const
{
  for (const CheckRecord& r : records)
    if (r.status == "fail")
      return false;
  return true;
}

const std::vector<std::string>& known_checks()
{
  static const std::vector<std::string> names{
      "polarity",    "hyperpolarity",           "cohomogeneity", "slice-scan",  "orbifold-points",
      "weyl",        "reduction-isometry",      "jacobi-scan",   "variational-completeness",
      "oneill",      "transversal",             "cartan-probe",  "rescale-probe"};
  return names;
}

std::vector<std::string> parse_checks(const std::string& csv)
{
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos)
      continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    bool known = false;
    for (const std::string& k : known_checks())
      known = known || k == item;
    if (!known)
      throw Error("unknown check '" + item + "'");
    out.push_back(item);
  }
  return out;
}

std::uint64_t default_seed(std::uint64_t fallback)
{
  const char* env = std::getenv("POLARIS_SEED");
  if (!env || !*env)
    return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0')
    throw Error("POLARIS_SEED must be a non-negative integer");
  return v;
}

namespace
{

struct Inapplicable
{
  std::string why;
};

json vec_json(const Vec& v)
{
  json out = json::array();
  for (int i = 0; i < v.size(); ++i)
    out.push_back(v(i));
  return out;
}

const GroupAction& need_action(const Model& m)
{
  if (!m.action)
    throw Inapplicable{"check needs a group action on a model manifold"};
  return *m.action;
}

const SymmetricPair& need_pair(const Model& m)
{
  if (!m.pair)
    throw Inapplicable{"check needs a symmetric pair"};
  return *m.pair;
}

OrbitGeodesic model_geodesic(const Model& m, const AnalysisOptions& o, std::uint64_t seed)
{
  const GroupAction& act = need_action(m);
  const Vec p = m.basepoint ? *m.basepoint : find_regular_point(act, seed);
  Vec xi;
  if (m.direction)
    xi = *m.direction;
  else
  {
    const Mat n = act.normal_basis(p);
    if (n.cols() == 0)
      throw Inapplicable{"orbit has no normal directions"};
    xi = n.col(0);
  }
  return make_orbit_geodesic(act, p, xi, 0.0, m.geodesic_end, o.step);
}

std::optional<bool> known_polar(const Model& m, std::uint64_t seed, double tol)
{
  try
  {
    return is_polar(*m.action, seed, tol).polar;
  }
  catch (const Error&)
  {
    return std::nullopt;
  }
}

json focal_json(const std::vector<FocalPoint>& f)
{
  json out = json::array();
  for (const FocalPoint& p : f)
    out.push_back({{"t", p.t}, {"multiplicity", p.multiplicity}});
  return out;
}

void check_polarity(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  r.tolerance = o.tol;
  if (m.kind == ModelKind::HomogeneousPair)
  {
    const SymmetricPair& pair = need_pair(m);
    if (!m.subgroup)
    {
      const PolarityVerdict v = is_polar_rep(s_representation(pair), r.seed, o.tol);
      r.verdict = v.polar;
      r.value = v.cohomogeneity;
      r.residual = v.residual;
      return;
    }
    const HomogeneousVerdict v = is_polar_homogeneous(pair, *m.subgroup, r.seed, o.tol);
    r.verdict = v.polar;
    r.value = v.section.dim();
    r.residual = std::max(v.lts_residual, v.orthogonality_residual);
    r.details = {{"orbit_dim", v.orbit_dim},
                 {"lts_residual", v.lts_residual},
                 {"orthogonality_residual", v.orthogonality_residual},
                 {"indeterminate", v.indeterminate},
                 {"witness", v.witness}};
    return;
  }
  const GroupAction& act = need_action(m);
  PolarityVerdict v;
  try
  {
    v = is_polar(act, r.seed, o.tol);
  }
  catch (const Error& e)
  {
    throw Inapplicable{e.what()};
  }
  r.verdict = v.polar;
  r.value = v.cohomogeneity;
  r.residual = v.residual;
  r.details["indeterminate"] = v.indeterminate;
  r.details["basepoint"] = vec_json(v.basepoint);
  if (v.witness)
    r.details["witness"] = {{"generator", v.witness->generator + 1},
                            {"pairing", v.witness->pairing},
                            {"v", vec_json(v.witness->v)},
                            {"w", vec_json(v.witness->w)}};
  if (act.manifold.kind() != ManifoldKind::ProductOfSpheres)
  {
    // the verdict must not depend on the regular point
    int agree = 0;
    for (int k = 0; k < 20; ++k)
      agree += is_polar(act, derive_seed(r.seed, 100 + k), o.tol).polar == v.polar ? 1 : 0;
    r.details["stable_points"] = agree;
    if (agree != 20)
      r.verdict = std::nullopt, r.note = "verdict depends on the regular point";
  }
}

void check_hyperpolarity(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  r.tolerance = o.tol;
  if (m.kind == ModelKind::HomogeneousPair && m.subgroup)
  {
    const SymmetricPair& pair = need_pair(m);
    const HomogeneousVerdict v = is_hyperpolar_homogeneous(pair, *m.subgroup, r.seed, o.tol);
    r.verdict = v.hyperpolar;
    r.residual = v.hyperpolar ? v.abelian_residual : 0.0;
    // largest sectional curvature of the section along basis planes
    const Mat& b = v.section.basis;
    double top = 0.0;
    for (int i = 0; i < b.cols(); ++i)
      for (int j = i + 1; j < b.cols(); ++j)
        top = std::max(top, sectional_curvature(pair, b.col(i), b.col(j)));
    r.value = top;
    r.details = {{"polar", v.polar},
                 {"section_dim", v.section.dim()},
                 {"abelian_residual", v.abelian_residual},
                 {"max_section_curvature", top},
                 {"positive_plane", top > 1e-8}};
    return;
  }
  if (m.kind == ModelKind::HomogeneousPair)
  {
    r.verdict = true;
    r.value = 0.0;
    r.note = "isotropy action of a symmetric pair";
    return;
  }
  const GroupAction& act = need_action(m);
  PolarityVerdict v;
  try
  {
    v = is_polar(act, r.seed, o.tol);
  }
  catch (const Error& e)
  {
    throw Inapplicable{e.what()};
  }
  // linear sections are flat; on spheres only one-dimensional sections are
  const bool flat = act.manifold.kind() == ManifoldKind::Euclidean || v.cohomogeneity <= 1;
  r.verdict = v.polar && flat;
  r.value = v.cohomogeneity;
  r.residual = v.polar ? v.residual : 0.0;
  r.details = {{"polar", v.polar}, {"flat_section", flat}};
}

void check_cohomogeneity(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  if (m.kind == ModelKind::HomogeneousPair && m.subgroup)
  {
    const HomogeneousVerdict v = is_polar_homogeneous(need_pair(m), *m.subgroup, r.seed, o.tol);
    r.value = v.section.dim();
    r.details = {{"orbit_dim", v.orbit_dim}};
  }
  else if (m.kind == ModelKind::HomogeneousPair)
    r.value = cohomogeneity(s_representation(need_pair(m)), r.seed);
  else
    r.value = cohomogeneity(need_action(m), r.seed);
  r.verdict = true;
}

void check_slice_scan(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const GroupAction& act = need_action(m);
  std::vector<Vec> points;
  if (m.singular_point)
    points.push_back(*m.singular_point);
  Rng rng(r.seed);
  while (points.size() < 50)
    points.push_back(act.sample_point(rng));
  bool all = true;
  int nontrivial = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k)
  {
    const OrthogonalRep slice = slice_rep(act, points[k]);
    if (slice.count() == 0 || slice.space == 0)
      continue;
    ++nontrivial;
    const PolarityVerdict v = is_polar_rep(slice, derive_seed(r.seed, k), o.tol);
    if (v.polar)
      worst = std::max(worst, v.residual);
    all = all && v.polar;
  }
  r.verdict = all;
  r.value = static_cast<int>(points.size());
  r.residual = worst;
  r.tolerance = o.tol;
  r.details = {{"nontrivial_slices", nontrivial}};
}

void check_orbifold(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const GroupAction& act = need_action(m);
  std::vector<Vec> points;
  if (m.singular_point)
    points.push_back(*m.singular_point);
  points.push_back(m.basepoint ? *m.basepoint : find_regular_point(act, r.seed));
  bool all = true;
  json pts = json::array();
  for (std::size_t k = 0; k < points.size(); ++k)
  {
    const OrbifoldVerdict v = orbifold_point_test(act, points[k], derive_seed(r.seed, k), o.tol);
    all = all && v.orbifold;
    pts.push_back({{"point", vec_json(points[k])},
                   {"orbifold", v.orbifold},
                   {"isotropy_dim", v.isotropy_dim},
                   {"slice_cohomogeneity", v.slice_cohomogeneity}});
    if (k == 0)
      r.value = v.slice_cohomogeneity;
  }
  r.verdict = all;
  r.tolerance = o.tol;
  r.details = {{"points", pts}};
}

struct WeylData
{
  Subspace section;
  RestrictedRootSystem roots;
  ReflectionGroup group;
};

WeylData rep_weyl(const Model& m, const AnalysisOptions& o, std::uint64_t seed)
{
  const GroupAction& act = need_action(m);
  if (act.manifold.kind() != ManifoldKind::Euclidean)
    throw Inapplicable{"Weyl group is computed for linear representations"};
  const PolarityVerdict v = is_polar_rep(act.rep, seed, o.tol);
  if (!v.polar)
    throw Inapplicable{"representation is not polar"};
  WeylData w;
  w.section = *v.section;
  w.roots = representation_roots(act.rep, w.section, seed);
  w.group = weyl_group_closure(w.roots);
  return w;
}

void check_weyl(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  RestrictedRootSystem roots;
  ReflectionGroup group;
  if (m.kind == ModelKind::HomogeneousPair)
  {
    const SymmetricPair& pair = need_pair(m);
    const Subspace a = maximal_abelian(pair, r.seed);
    roots = restricted_roots(pair, a, r.seed);
    group = weyl_group_closure(roots);
  }
  else
  {
    WeylData w = rep_weyl(m, o, r.seed);
    roots = std::move(w.roots);
    group = std::move(w.group);
  }
  const double perm = root_permutation_residual(group, roots);
  const double closure = group.closure_residual();
  r.value = group.order();
  r.residual = std::max(perm, closure);
  r.tolerance = 1e-8;
  r.verdict = r.residual < r.tolerance;
  json mult = json::array();
  for (const Root& root : roots.roots)
    mult.push_back(root.multiplicity);
  r.details = {{"roots", roots.roots.size()},
               {"multiplicities", mult},
               {"rank", roots.a.dim()},
               {"zero_dim", roots.zero_dim},
               {"min_gap", roots.min_gap}};
}

void check_reduction(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const WeylData w = rep_weyl(m, o, r.seed);
  const GroupAction& act = need_action(m);
  ReductionSampler sampler;
  sampler.seed = r.seed;
  sampler.optimizer.seed = derive_seed(r.seed, 1);
  const ReductionReport red = reduction_isometry_check(act, w.section, w.group, sampler);
  SectionSampler ss;
  ss.samples = 1000;
  ss.seed = derive_seed(r.seed, 2);
  Rng rng(derive_seed(r.seed, 3));
  const Vec p = w.section.basis * rng.gaussian(w.section.dim());
  const SectionOrbitReport so = section_orbit_check(act, w.section, w.group, p, ss);
  r.value = red.max_relative;
  r.residual = red.max_relative;
  r.tolerance = 1e-3;
  r.verdict = red.max_relative < 1e-3 && red.max_excess <= 1e-6 && so.passed;
  r.details = {{"pairs", red.pairs},
               {"max_excess", red.max_excess},
               {"weyl_order", w.group.order()},
               {"orbit_samples", so.samples},
               {"orbit_landed", so.landed},
               {"orbit_worst_distance", so.worst_distance},
               {"orbit_check", so.passed}};
}

void check_jacobi(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const OrbitGeodesic g = model_geodesic(m, o, r.seed);
  const Mat lambda = n_jacobi_space(g);
  const FieldFamily closed = jacobi_integrate(g, lambda, g.a, g.b, JacobiMethod::ClosedForm);
  const FieldFamily rk = jacobi_integrate(g, lambda, g.a, g.b, JacobiMethod::RungeKutta);
  double cross = 0.0;
  for (std::size_t i = 0; i < closed.times.size(); ++i)
    cross = std::max(cross, (closed.value[i] - rk.value[i]).cwiseAbs().maxCoeff());
  // Killing restrictions evaluated directly against their Jacobi propagation
  const KillingRestrictions kill = killing_restrictions(g, g.a, g.b);
  const OrthogonalRep& rep = g.action.rep;
  double killing = 0.0;
  if (rep.count() > 0)
  {
    Mat init(2 * g.dim(), rep.count());
    for (int i = 0; i < rep.count(); ++i)
      init.col(i) << g.frame0.transpose() * (rep.generators[i] * g.p),
          g.frame0.transpose() * (rep.generators[i] * g.xi);
    const FieldFamily prop = jacobi_integrate(g, init, g.a, g.b, JacobiMethod::ClosedForm);
    for (std::size_t i = 0; i < prop.times.size(); ++i)
      killing = std::max(killing, (prop.value[i] - kill.fields.value[i]).cwiseAbs().maxCoeff());
  }
  const std::vector<FocalPoint> focal = focal_points(g, g.a, g.b);
  r.residual = std::max(cross, killing);
  r.tolerance = 1e-8;
  r.verdict = r.residual < r.tolerance;
  r.value = focal.empty() ? json(nullptr) : json(focal.front().t);
  r.details = {{"focal", focal_json(focal)},
               {"rk4_residual", cross},
               {"killing_residual", killing},
               {"killing_dim", kill.dim()},
               {"interval", {g.a, g.b}}};
  const ModelManifold& man = g.action.manifold;
  if (man.kind() == ManifoldKind::ProductOfSpheres && man.block_dims() == std::vector<int>{3, 3} &&
      man.radii()[0] == 1.0)
  {
    const SkewGeodesicReport f = skew_geodesic_check(man.radii()[1]);
    const double worst = std::max({f.speed_residual, f.acceleration, f.orthogonality, f.exp_residual});
    r.details["skew_geodesic"] = {{"radius", f.radius},
                             {"speed_residual", f.speed_residual},
                             {"acceleration", f.acceleration},
                             {"orthogonality", f.orthogonality},
                             {"exp_residual", f.exp_residual}};
    r.verdict = *r.verdict && worst < 1e-9;
  }
}

void check_completeness(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const OrbitGeodesic g = model_geodesic(m, o, r.seed);
  const CompletenessVerdict v = variational_completeness_probe(g, g.a, g.b, 1e-6);
  r.residual = v.worst_angle;
  r.tolerance = 1e-6;
  r.value = v.worst_angle;
  bool verdict = v.complete;
  r.details = {{"focal", focal_json(v.focal)}, {"worst_time", v.worst_time}};
  if (v.witness.size() > 0 && !v.complete)
    r.details["witness"] = vec_json(v.witness);
  if (g.action.manifold.kind() == ManifoldKind::Euclidean)
  {
    try
    {
      const TangencyReport d = tangency_probe(g.action.rep, g.p, derive_seed(r.seed, 1));
      r.details["tangency"] = {{"holds", d.tangency_holds},
                               {"worst_residual", d.worst_tangency},
                               {"worst_eigenfield", d.worst_eigenfield},
                               {"eigenvalues", vec_json(d.eigenvalues)},
                               {"tangent_angle", d.tangent_angle},
                               {"tangent_agreement", d.tangent_agreement}};
      verdict = verdict && d.tangency_holds && d.tangent_agreement;
    }
    catch (const Error& e)
    {
      r.details["tangency"] = {{"skipped", e.what()}};
    }
  }
  r.verdict = verdict;
}

void check_oneill(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const OrbitGeodesic g = model_geodesic(m, o, r.seed);
  const Mat n = g.action.normal_basis(g.p);
  if (n.cols() < 2)
    throw Inapplicable{"horizontal space has no planes (cohomogeneity one)"};
  // a horizontal unit vector orthogonal to the geodesic direction
  Mat cand(n.rows(), n.cols() + 1);
  cand << g.xi, n;
  const Mat q = orthonormalize(cand);
  const Vec y = q.col(1);
  OptimizerConfig cfg;
  cfg.seed = r.seed;
  const OneillReport rep = oneill_check(g.action, g.p, g.xi, y, cfg, o.step);
  r.value = rep.k_star_fd;
  r.residual = rep.tensor_residual;
  r.tolerance = 1e-6;
  r.verdict = rep.tensor_residual < 1e-6 && rep.formula_residual < 1e-2;
  r.details = {{"k_sigma", rep.k_sigma},
               {"k_star_fd", rep.k_star_fd},
               {"three_a_squared", rep.a_closed},
               {"three_a_squared_path", rep.a_tensor_path},
               {"formula_residual", rep.formula_residual},
               {"formula_tolerance", 1e-2}};
}

void check_transversal(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  const OrbitGeodesic g = model_geodesic(m, o, r.seed);
  const TransversalSystem sys = transversal_system(g);
  const TransversalDiagnostics d = diagnose(sys, r.seed);
  const ConjugateScan cs = conjugate_scan(sys);
  const std::optional<bool> polar = known_polar(m, r.seed, o.tol);
  bool ok = d.rank_constant && d.orthogonality < 1e-8 && d.antisymmetry < 1e-8 && d.block_structure < 1e-8 &&
            d.curvature_symmetry < 1e-8 && d.curvature_min_eigenvalue > -1e-9 && d.claim_vertical < 1e-6 &&
            d.claim_frame < 1e-6 && d.projected_residual < 1e-6 && d.omega_lambda < 1e-10 &&
            d.omega_upsilon < 1e-10 && d.omega_drift < 1e-8 && cs.sturm_consistent;
  if (polar && *polar)
    ok = ok && d.max_a_regular < 2e-6;
  r.verdict = ok;
  r.residual = std::max({d.claim_vertical, d.claim_frame, d.projected_residual});
  r.tolerance = 1e-6;
  r.value = cs.times.empty() ? json(nullptr) : json(cs.times.front().t);
  json conj = json::array();
  for (const ConjugateTime& c : cs.times)
    conj.push_back({{"t", c.t}, {"multiplicity", c.multiplicity}});
  r.details = {{"vertical_rank", sys.rank()},
               {"horizontal_dim", sys.horizontal.front().cols()},
               {"orthogonality", d.orthogonality},
               {"antisymmetry", d.antisymmetry},
               {"block_structure", d.block_structure},
               {"curvature_symmetry", d.curvature_symmetry},
               {"curvature_min_eigenvalue", d.curvature_min_eigenvalue},
               {"max_a_regular", d.max_a_regular},
               {"claim_vertical", d.claim_vertical},
               {"claim_frame", d.claim_frame},
               {"projected_residual", d.projected_residual},
               {"omega_lambda", d.omega_lambda},
               {"omega_upsilon", d.omega_upsilon},
               {"omega_drift", d.omega_drift},
               {"conjugate", conj},
               {"index", cs.index},
               {"index_refined", cs.index_refined},
               {"sturm_consistent", cs.sturm_consistent}};
  if (polar)
    r.details["polar"] = *polar;
  const double mid = 0.5 * (g.a + g.b);
  const BumpReport bump = bump_index_form(sys, mid, std::min(1.0, 0.5 * (g.b - g.a)));
  r.details["bump"] = {{"t0", mid},
                       {"halfwidth", bump.halfwidth},
                       {"energy", bump.energy},
                       {"curvature_term", bump.curvature_term},
                       {"index_form", bump.index_form}};
}

void check_cartan(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  r.tolerance = 1e-8;
  if (m.kind != ModelKind::HomogeneousPair)
  {
    const OrbitGeodesic g = model_geodesic(m, o, r.seed);
    const Mat s = g.action.normal_basis(g.p);
    BrokenGeodesicSampler sampler;
    sampler.seed = r.seed;
    const ProbeVerdict v = cartan_hermann_probe(g.action.manifold, g.p, s, sampler);
    r.verdict = v.passed;
    r.value = v.worst_residual;
    r.residual = v.worst_residual;
    r.details = {{"subspace", "normal space at the base point"}, {"dim", s.cols()}};
    return;
  }
  const SymmetricPair& pair = need_pair(m);
  const LieAlgebra& lie = pair.algebra;
  if (!lie.has_realization())
    throw Inapplicable{"probe needs a matrix realization"};
  BrokenGeodesicSampler sampler;
  sampler.seed = r.seed;
  const Subspace a = maximal_abelian(pair, r.seed);
  const ProbeVerdict flat = cartan_hermann_probe(pair, a, sampler);
  Rng rng(derive_seed(r.seed, 1));
  int agree = 0, lts_cases = 0, other_cases = 0;
  double lts_worst = flat.worst_residual, other_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k)
  {
    Subspace s{"p", Mat()};
    if (k < 50)
    {
      // conjugates of the flat are Lie triple systems
      const Vec x = pair.k.basis * rng.gaussian(pair.k.dim());
      s.basis = orthonormalize(lie.adjoint_action(lie.exp(x)) * a.basis, lie.inner());
    }
    else
    {
      const int dim = std::min(2, pair.p.dim());
      s.basis = orthonormalize(pair.p.basis * Mat(Mat::NullaryExpr(pair.p.dim(), dim, [&] { return rng.normal(); })),
                               lie.inner());
    }
    BrokenGeodesicSampler local = sampler;
    local.seed = derive_seed(r.seed, 10 + k);
    const bool lts = is_lie_triple_system(lie, s, 1e-9).holds;
    const ProbeVerdict v = cartan_hermann_probe(pair, s, local);
    agree += v.passed == lts ? 1 : 0;
    if (lts)
    {
      ++lts_cases;
      lts_worst = std::max(lts_worst, v.worst_residual);
    }
    else
    {
      ++other_cases;
      other_min = std::min(other_min, v.worst_residual);
    }
  }
  bool ok = flat.passed && agree == 100 && (other_cases == 0 || other_min > 1e-3);
  json details = {{"flat_residual", flat.worst_residual},
                  {"agreement", agree},
                  {"lts_cases", lts_cases},
                  {"non_lts_cases", other_cases},
                  {"lts_worst_residual", lts_worst},
                  {"non_lts_min_residual", other_cases ? json(other_min) : json(nullptr)}};
  if (m.subgroup)
  {
    const HomogeneousVerdict hv = is_polar_homogeneous(pair, *m.subgroup, r.seed, o.tol);
    if (hv.polar)
    {
      const ProbeVerdict sec = cartan_hermann_probe(pair, hv.section, sampler);
      details["section_residual"] = sec.worst_residual;
      ok = ok && sec.passed;
      lts_worst = std::max(lts_worst, sec.worst_residual);
    }
  }
  r.verdict = ok;
  r.value = flat.worst_residual;
  r.residual = lts_worst;
  r.details = details;
}

void check_rescale(const Model& m, const AnalysisOptions& o, CheckRecord& r)
{
  (void)o;
  const GroupAction& act = need_action(m);
  if (act.manifold.kind() == ManifoldKind::Euclidean)
    throw Inapplicable{"rescale probe runs on sphere models"};
  if (!m.singular_point || !m.slice_direction)
    throw Inapplicable{"model has no singular point with a slice direction"};
  std::vector<double> lambdas;
  for (int k = 1; k <= 6; ++k)
    lambdas.push_back(std::ldexp(1.0, -k));
  const RescaleReport rep = rescale_probe(act, *m.singular_point, *m.slice_direction, lambdas, r.seed);
  const double last = rep.scaled_curvature.back();
  r.value = last;
  r.residual = rep.slice_polar ? last : 0.0;
  r.tolerance = 1e-2;
  r.verdict = rep.slice_polar ? (last < 1e-2 && rep.decreasing) : last >= 1e-2;
  r.details = {{"lambdas", rep.lambdas},
               {"scaled_curvature", rep.scaled_curvature},
               {"slice_polar", rep.slice_polar},
               {"decreasing", rep.decreasing}};
}

using CheckFn = void (*)(const Model&, const AnalysisOptions&, CheckRecord&);

CheckFn dispatch(const std::string& name)
{
  if (name == "polarity")
    return check_polarity;
  if (name == "hyperpolarity")
    return check_hyperpolarity;
  if (name == "cohomogeneity")
    return check_cohomogeneity;
  if (name == "slice-scan")
    return check_slice_scan;
  if (name == "orbifold-points")
    return check_orbifold;
  if (name == "weyl")
    return check_weyl;
  if (name == "reduction-isometry")
    return check_reduction;
  if (name == "jacobi-scan")
    return check_jacobi;
  if (name == "variational-completeness")
    return check_completeness;
  if (name == "oneill")
    return check_oneill;
  if (name == "transversal")
    return check_transversal;
  if (name == "cartan-probe")
    return check_cartan;
  if (name == "rescale-probe")
    return check_rescale;
  throw Error("unknown check '" + name + "'");
}

std::uint64_t check_seed(std::uint64_t base, const std::string& name)
{
  const auto& names = known_checks();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      return derive_seed(base, i);
  return base;
}

void settle(CheckRecord& r)
{
  if (!r.verdict)
  {
    r.status = r.expected.is_null() ? "inapplicable" : "fail";
    return;
  }
  bool pass;
  if (r.expected.is_object() && r.expected.contains("verdict"))
  {
    pass = *r.verdict == r.expected["verdict"].get<bool>();
    if (r.expected.contains("value"))
    {
      const double tol = r.expected.value("value_tolerance", 0.0);
      pass = pass && r.value.is_number() &&
             std::abs(r.value.get<double>() - r.expected["value"].get<double>()) <= tol;
    }
  }
  else
    pass = *r.verdict;
  r.status = pass ? "pass" : "fail";
}

CheckRecord run_check(const Model& model, const AnalysisOptions& options, const std::string& name,
                      const json& expected)
{
  CheckRecord r;
  r.check = name;
  r.seed = check_seed(options.seed, name);
  if (expected.is_object() && expected.contains(name))
    r.expected = expected[name];
  const auto start = std::chrono::steady_clock::now();
  try
  {
    dispatch(name)(model, options, r);
  }
  catch (const Inapplicable& e)
  {
    r.verdict.reset();
    r.note = e.why;
  }
  catch (const Error& e)
  {
    r.verdict.reset();
    r.note = e.what();
    r.expected = r.expected.is_null() ? json{{"verdict", true}} : r.expected;
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  settle(r);
  return r;
}

}  // namespace

AnalysisReport analyze(const Model& model, const AnalysisOptions& options, const json& expected)
{
  if (!(options.step > 0.0) || options.step > 1e-2)
    throw Error("step size rejected: h must lie in (0, 1e-2]");
  if (!(options.tol > 0.0))
    throw Error("tolerance must be positive");
  AnalysisReport report;
  report.entry = model.name;
  if (options.parallel)
  {
    std::vector<std::future<CheckRecord>> jobs;
    for (const std::string& name : options.checks)
      jobs.push_back(std::async(std::launch::async, run_check, std::cref(model), std::cref(options), name,
                                std::cref(expected)));
    for (auto& j : jobs)
      report.records.push_back(j.get());
  }
  else
    for (const std::string& name : options.checks)
      report.records.push_back(run_check(model, options, name, expected));
  return report;
}

AnalysisReport analyze_entry(const CatalogEntry& entry, const AnalysisOptions& options)
{
  const Model model = entry.build();
  return analyze(model, options, entry.expected);
}

}  // namespace polaris
