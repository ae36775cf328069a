#include "polaris/report.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace polaris;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what)
  {
    if (!cond)
    {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

OrbitGeodesic entry_geodesic(const Model& m, double end = M_PI)
{
  return make_orbit_geodesic(*m.action, *m.basepoint, *m.direction, 0.0, end);
}

void polarity_verdicts(Outcome& o)
{
  for (auto [name, polar, coh] : {std::tuple{"su2_adjoint", true, 1}, std::tuple{"so3_sym_traceless", true, 2},
                                  std::tuple{"su2_diag_double", false, 3}})
  {
    const auto t0 = Clock::now();
    const OrthogonalRep rep = catalog_entry(name).build().action->rep;
    const PolarityVerdict v = is_polar_rep(rep, 1);
    o.require(v.polar == polar && v.cohomogeneity == coh, std::string(name) + " verdict");
    if (!polar)
    {
      o.require(v.witness && std::abs(v.witness->pairing) > 1e-6, "witness pairing above 1e-6");
      int stable = 0;
      for (int k = 0; k < 20; ++k)
        stable += is_polar_rep(rep, derive_seed(2024, k)).polar == polar ? 1 : 0;
      o.require(stable == 20, "stable over 20 regular points");
      o.detail << " witness=" << (v.witness ? std::abs(v.witness->pairing) : 0.0) << " stable=" << stable << "/20";
    }
    const double dt = seconds_since(t0);
    o.require(dt < 1.0, std::string(name) + " under 1 s");
    o.detail << " " << name << "=(" << (v.polar ? "polar" : "non-polar") << "," << v.cohomogeneity << "," << dt << "s)";
  }
}

void homogeneous_criterion(Outcome& o)
{
  const auto t0 = Clock::now();
  const Model h = catalog_entry("hermann_su3").build();
  const HomogeneousVerdict hv = is_hyperpolar_homogeneous(*h.pair, *h.subgroup, 1);
  o.require(hv.hyperpolar && hv.abelian_residual < 1e-12, "hermann_su3 hyperpolar");
  const Model t = catalog_entry("t2_cp2").build();
  const HomogeneousVerdict tv = is_hyperpolar_homogeneous(*t.pair, *t.subgroup, 1);
  o.require(tv.polar && !tv.hyperpolar, "t2_cp2 polar, not hyperpolar");
  double top = 0;
  for (int i = 0; i < tv.section.dim(); ++i)
    for (int j = i + 1; j < tv.section.dim(); ++j)
      top = std::max(top, sectional_curvature(*t.pair, tv.section.basis.col(i), tv.section.basis.col(j)));
  o.require(top > 1e-8, "positive section curvature");
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "under 1 s");
  o.detail << " hermann_abelian_residual=" << hv.abelian_residual << " t2_section_curvature=" << top << " time=" << dt
           << "s";
}

void weyl_criterion(Outcome& o)
{
  const auto t0 = Clock::now();
  const SymmetricPair pair = su3_real_form_pair();
  const RestrictedRootSystem roots = restricted_roots(pair, maximal_abelian(pair, 1), 1);
  bool simple = roots.roots.size() == 6;
  for (const Root& r : roots.roots)
    simple = simple && r.multiplicity == 1;
  const int order = weyl_group_closure(roots).order();
  o.require(simple && order == 6, "su(3)/so(3): six simple roots, order 6");
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  Mat theta = -Mat::Identity(3, 3);
  theta(2, 2) = 1;
  int rank_one = 0;
  for (const SymmetricPair& p : {cartan_decompose(su2, theta), su3_projective_pair()})
  {
    const int ord = weyl_group_closure(restricted_roots(p, maximal_abelian(p, 1), 1)).order();
    o.require(ord == 2, "rank one order 2");
    rank_one += ord == 2;
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "under 1 s");
  o.detail << " roots=" << roots.roots.size() << " order=" << order << " rank_one_order_two=" << rank_one << "/2 time=" << dt
           << "s";
}

void reduction_criterion(Outcome& o)
{
  const auto t0 = Clock::now();
  for (const char* name : {"su2_adjoint", "so3_sym_traceless"})
  {
    const GroupAction act = *catalog_entry(name).build().action;
    const PolarityVerdict v = is_polar_rep(act.rep, 1);
    const ReflectionGroup w = weyl_group_closure(representation_roots(act.rep, *v.section, 1));
    ReductionSampler s;
    s.pairs = 200;
    const ReductionReport r = reduction_isometry_check(act, *v.section, w, s);
    o.require(r.pairs == 200 && r.max_relative < 1e-3 && r.max_excess <= 1e-6, name);
    o.detail << " " << name << "=(rel " << r.max_relative << ", excess " << r.max_excess << ")";
  }
  const double dt = seconds_since(t0);
  o.require(dt < 30.0, "under 30 s");
  o.detail << " time=" << dt << "s";
}

void oneill_criterion(Outcome& o)
{
  const auto t0 = Clock::now();
  const Model hopf = catalog_entry("hopf_s1_s3").build();
  const Mat n = hopf.action->normal_basis(*hopf.basepoint);
  const OneillReport r = oneill_check(*hopf.action, *hopf.basepoint, n.col(0), n.col(1));
  o.require(std::abs(r.k_star_fd - 4.0) <= 1e-2, "K* = 4 +- 1e-2");
  o.require(r.tensor_residual < 1e-6, "A-tensor path residual");
  o.detail << " K*=" << r.k_star_fd << " tensor_residual=" << r.tensor_residual;
  double worst = 0;
  for (const char* name : {"su2_adjoint", "so3_sym_traceless", "so2_s2", "so3_s2xs2"})
  {
    const TransversalSystem sys = transversal_system(entry_geodesic(catalog_entry(name).build()));
    for (std::size_t i = 0; i < sys.times.size(); ++i)
      if (sys.regular[i])
        worst = std::max(worst, sys.a_tensor[i].norm());
  }
  o.require(worst < 2e-6, "polar A_t below 2e-6");
  const double dt = seconds_since(t0);
  o.require(dt < 30.0, "under 30 s");
  o.detail << " polar_max_A=" << worst << " time=" << dt << "s";
}

void transversal_criterion(Outcome& o)
{
  const TransversalSystem sys = transversal_system(entry_geodesic(catalog_entry("hopf_s1_s3").build()));
  const ConjugateScan cs = conjugate_scan(sys);
  const double first = cs.times.empty() ? -1.0 : cs.times.front().t;
  o.require(std::abs(first - M_PI / 2) <= 1e-4, "first conjugate time pi/2");
  const TransversalDiagnostics d = diagnose(sys, 1);
  o.require(d.projected_residual < 1e-6, "projected N-Jacobi residual");
  o.require(d.claim_vertical < 1e-6 && d.claim_frame < 1e-6, "vertical and frame claims");
  o.detail << " first=" << first << " projected=" << d.projected_residual << " claim_vertical=" << d.claim_vertical
           << " claim_frame=" << d.claim_frame;
}

void symplectic_criterion(Outcome& o)
{
  double drift = 0, lambda = 0, upsilon = 0;
  int systems = 0;
  for (const CatalogEntry& e : catalog_list())
  {
    const Model m = e.build();
    if (!m.action || !m.basepoint || !m.direction)
      continue;
    const TransversalDiagnostics d = diagnose(transversal_system(entry_geodesic(m)), 1);
    drift = std::max(drift, d.omega_drift);
    lambda = std::max(lambda, d.omega_lambda);
    upsilon = std::max(upsilon, d.omega_upsilon);
    ++systems;
  }
  o.require(drift < 1e-8, "drift below 1e-8");
  o.require(lambda < 1e-10 && upsilon < 1e-10, "omega vanishes on Lambda and Upsilon");
  o.detail << " systems=" << systems << " drift=" << drift << " lambda=" << lambda << " upsilon=" << upsilon;
}

void completeness_criterion(Outcome& o)
{
  std::vector<std::pair<std::string, OrbitGeodesic>> cases;
  for (const char* name : {"so2_s2", "su2_adjoint"})
    cases.emplace_back(name, entry_geodesic(catalog_entry(name).build()));
  const GroupAction srep = GroupAction::linear(s_representation(su3_real_form_pair()));
  const Vec p = find_regular_point(srep, 1);
  cases.emplace_back("su3/so3 s-rep", make_orbit_geodesic(srep, p, srep.normal_basis(p).col(0), 0.0, M_PI));
  for (const auto& [name, g] : cases)
  {
    const CompletenessVerdict v = variational_completeness_probe(g, 0.0, M_PI);
    o.require(v.complete && v.worst_angle < 1e-6 && !v.focal.empty(), name);
    o.detail << " " << name << "=(angle " << v.worst_angle << ", focal " << v.focal.size() << ")";
  }
  const Model dbl = catalog_entry("su2_diag_double").build();
  const TangencyReport d = tangency_probe(dbl.action->rep, *dbl.basepoint, 1);
  o.require(!d.tangency_holds, "su2_diag_double fails tangency");
  o.detail << " su2_diag_double_tangency=" << d.worst_tangency << " at eigenfield " << d.worst_eigenfield;
}

void cartan_criterion(Outcome& o)
{
  const SymmetricPair pair = su3_real_form_pair();
  const LieAlgebra& lie = pair.algebra;
  const Subspace a = maximal_abelian(pair, 1);
  BrokenGeodesicSampler sampler;
  sampler.geodesics = 100;
  const ProbeVerdict flat = cartan_hermann_probe(pair, a, sampler);
  o.require(flat.passed && flat.worst_residual < 1e-8, "flat passes");
  Rng rng(77);
  int agree = 0, failing = 0;
  double lts_worst = 0, other_min = 1e9;
  for (int k = 0; k < 100; ++k)
  {
    Subspace s{"p", Mat()};
    if (k < 50)
      s.basis = orthonormalize(lie.adjoint_action(lie.exp(pair.k.basis * rng.gaussian(pair.k.dim()))) * a.basis,
                               lie.inner());
    else
      s.basis = orthonormalize(pair.p.basis * Mat(Mat::NullaryExpr(pair.p.dim(), 2, [&] { return rng.normal(); })),
                               lie.inner());
    BrokenGeodesicSampler local = sampler;
    local.seed = derive_seed(5, k);
    const bool lts = is_lie_triple_system(lie, s).holds;
    const ProbeVerdict v = cartan_hermann_probe(pair, s, local);
    agree += v.passed == lts;
    if (k >= 50)
    {
      failing += !v.passed && v.worst_residual > 1e-3;
      other_min = std::min(other_min, v.worst_residual);
    }
    else
      lts_worst = std::max(lts_worst, v.worst_residual);
  }
  o.require(failing == 50, "all non-LTS planes fail above 1e-3");
  o.require(agree == 100, "agreement with the LTS test");
  o.detail << " flat=" << flat.worst_residual << " conjugate_flats_worst=" << lts_worst << " non_lts_failing=" << failing
           << "/50 non_lts_min=" << other_min << " agreement=" << agree << "/100";
}

void skew_geodesic_criterion(Outcome& o)
{
  const SkewGeodesicReport f = skew_geodesic_check(std::pow(2.0, 0.25), 20.0);
  o.require(f.speed_residual < 1e-9 && f.acceleration < 1e-9 && f.exp_residual < 1e-9, "unit-speed geodesic");
  o.require(f.orthogonality < 1e-9, "normal to the orbits");
  o.detail << " speed=" << f.speed_residual << " acceleration=" << f.acceleration << " orthogonality=" << f.orthogonality
           << " exp=" << f.exp_residual;
}

void rescale_criterion(Outcome& o)
{
  std::vector<double> lambdas;
  for (int k = 1; k <= 6; ++k)
    lambdas.push_back(std::ldexp(1.0, -k));
  const Model m = catalog_entry("su2_diag_s5").build();
  const RescaleReport r = rescale_probe(*m.action, *m.singular_point, *m.slice_direction, lambdas, 1);
  o.require(r.slice_polar, "polar slice");
  o.require(r.decreasing && r.scaled_curvature.back() < 1e-2, "decreasing below 1e-2 at 1/64");
  o.detail << " scaled_curvature=";
  for (double v : r.scaled_curvature)
    o.detail << v << ",";
}

std::pair<int, std::string> run_cli(const std::string& args)
{
  FILE* pipe = popen((std::string(POLARIS_CLI) + " " + args).c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  return {WEXITSTATUS(pclose(pipe)), out};
}

void determinism_criterion(Outcome& o)
{
  const auto t0 = Clock::now();
  const auto first = run_cli("analyze --entry all --seed 1 --json");
  const double dt = seconds_since(t0);
  const auto second = run_cli("analyze --entry all --seed 1 --json");
  o.require(first.first == 0, "exit code 0");
  o.require(first.second == second.second && !first.second.empty(), "byte-identical reports");
  o.require(dt < 300.0, "under 5 minutes");
  const nlohmann::json doc = nlohmann::json::parse(first.second);
  o.require(doc["schema"] == kReportSchema && doc["status"] == "pass", "schema and status");
  std::size_t records = 0;
  for (const auto& r : doc["reports"])
    records += r["records"].size();
  o.detail << " exit=" << first.first << " bytes=" << first.second.size() << " entries=" << doc["reports"].size()
           << " records=" << records << " time=" << dt << "s";
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"polarity verdicts", polarity_verdicts},
      {"symmetric-space criterion", homogeneous_criterion},
      {"Weyl groups", weyl_criterion},
      {"reduction isometry", reduction_criterion},
      {"O'Neill formula", oneill_criterion},
      {"transversal Jacobi equation", transversal_criterion},
      {"symplectic structure", symplectic_criterion},
      {"variational completeness", completeness_criterion},
      {"Cartan/Hermann probe", cartan_criterion},
      {"skew horizontal geodesic", skew_geodesic_criterion},
      {"orbifold rescaling", rescale_criterion},
      {"determinism and schema", determinism_criterion}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i)
  {
    Outcome o;
    try
    {
      criteria[i].second(o);
    }
    catch (const std::exception& e)
    {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "):" << o.detail.str()
              << std::endl;
  }
  std::cout << (failed ? "FAIL" : "PASS") << " " << criteria.size() - failed << "/" << criteria.size()
            << " criteria" << std::endl;
  return failed ? 1 : 0;
}
