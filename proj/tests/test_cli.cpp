#include "polaris/model_io.hpp"
#include "polaris/report.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sys/wait.h>

using namespace polaris;
using nlohmann::json;

namespace
{

struct CliRun
{
  int code = 0;
  std::string out;
};

CliRun run_cli(const std::string& args, const std::string& env = "")
{
  const std::string cmd = env + " " + POLARIS_CLI + std::string(" ") + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  r.code = WEXITSTATUS(pclose(pipe));
  return r;
}

json su2_doc()
{
  return {{"schema", 1}, {"kind", "lie-algebra"}, {"dim", 3}, {"structure", {{1, 2, 3, 1}, {2, 3, 1, 1}, {1, 3, 2, -1}}}};
}

}  // namespace

TEST(ModelIo, MinimalAbelianAlgebra)
{
  const Model m = model_from_json({{"schema", 1}, {"kind", "lie-algebra"}, {"dim", 2}, {"structure", json::array()}});
  EXPECT_EQ(m.kind, ModelKind::LieAlgebraOnly);
  EXPECT_EQ(m.algebra.dim(), 2);
  Rng rng(1);
  EXPECT_LT(m.algebra.bracket(rng.gaussian(2), rng.gaussian(2)).norm(), 1e-15);
}

TEST(ModelIo, CyclicStructureGivesSu2)
{
  const Model m = model_from_json(su2_doc());
  const LieAlgebra su2 = build_classical(ClassicalFamily::SpecialUnitary, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        EXPECT_DOUBLE_EQ(m.algebra.c(i, j, k), su2.c(i, j, k));
  EXPECT_LT(m.algebra.jacobi_residual(), 1e-14);
}

TEST(ModelIo, AntisymmetryViolationNamesTheTriple)
{
  json doc = su2_doc();
  doc["structure"].push_back({2, 1, 3, 1});
  try
  {
    model_from_json(doc);
    FAIL() << "expected rejection";
  }
  catch (const Error& e)
  {
    EXPECT_NE(std::string(e.what()).find("(1,2,3)"), std::string::npos) << e.what();
  }
}

TEST(ModelIo, FieldLevelDiagnostics)
{
  auto message = [](const json& doc) {
    try
    {
      model_from_json(doc);
    }
    catch (const Error& e)
    {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message({{"kind", "lie-algebra"}, {"dim", 1}}).find("'schema'"), std::string::npos);
  EXPECT_NE(message({{"schema", 1}, {"kind", "lie-algebra"}}).find("'dim'"), std::string::npos);
  json bad = su2_doc();
  bad["structure"][1] = {2, 4, 1, 1};
  EXPECT_NE(message(bad).find("'structure[1]'"), std::string::npos);
  json rep = su2_doc();
  rep["kind"] = "representation";
  EXPECT_NE(message(rep).find("'generators'"), std::string::npos);
  json jac = su2_doc();
  jac["structure"][0] = {1, 2, 3, 2};
  EXPECT_FALSE(message(jac).empty());
}

TEST(ModelIo, RepresentationRoundTrip)
{
  for (const char* name : {"su2_adjoint", "hopf_s1_s3", "so3_s2xs2", "t2_cp2"})
  {
    const Model m = catalog_entry(name).build();
    const json doc = model_to_json(m);
    const Model back = model_from_json(doc);
    EXPECT_EQ(back.kind, m.kind) << name;
    if (m.subgroup)
    {
      // the subgroup basis is re-orthonormalized on load
      EXPECT_LT(principal_angles(back.subgroup->basis, m.subgroup->basis, m.algebra.inner()).maxCoeff(), 1e-12) << name;
      json a = doc, b = model_to_json(back);
      a.erase("subalgebra");
      b.erase("subalgebra");
      EXPECT_EQ(a, b) << name;
    }
    else
      EXPECT_EQ(model_to_json(back), doc) << name;
  }
}

TEST(ModelIo, LoadsInlineDocument)
{
  EXPECT_EQ(load_model(su2_doc().dump()).algebra.dim(), 3);
  EXPECT_THROW(load_model("/nonexistent/model.json"), Error);
}

TEST(Catalog, EntriesAreUniqueAndReconstruct)
{
  const auto& list = catalog_list();
  EXPECT_GE(list.size(), 8u);
  std::set<std::string> names;
  for (const CatalogEntry& e : list)
  {
    EXPECT_TRUE(names.insert(e.name).second) << e.name;
    const Model m = e.build();
    m.algebra.validate(1e-9);
    if (m.action)
      m.action->rep.validate(1e-9);
    if (m.pair)
      EXPECT_LT(m.pair->grading_residual(), 1e-10);
    for (const auto& [check, _] : e.expected.items())
      EXPECT_NE(std::find(e.suite.begin(), e.suite.end(), check), e.suite.end()) << e.name << " " << check;
  }
  const Model s = catalog_entry("so3_s2xs2").build();
  EXPECT_NEAR(std::pow(s.action->manifold.radii()[1], 2), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(catalog_entry("missing"), Error);
}

TEST(Analysis, ParseChecks)
{
  EXPECT_EQ(parse_checks("polarity, weyl").size(), 2u);
  EXPECT_TRUE(parse_checks("").empty());
  EXPECT_THROW(parse_checks("polarity,bogus"), Error);
}

TEST(Analysis, InapplicableChecksAreRecorded)
{
  AnalysisOptions o;
  o.checks = {"weyl", "rescale-probe"};
  const AnalysisReport r = analyze(catalog_entry("su2_diag_double").build(), o);
  for (const CheckRecord& rec : r.records)
  {
    EXPECT_EQ(rec.status, "inapplicable");
    EXPECT_FALSE(rec.note.empty());
  }
  EXPECT_TRUE(r.passed());
}

TEST(Analysis, RejectsCoarseStep)
{
  AnalysisOptions o;
  o.step = 0.02;
  EXPECT_THROW(analyze(catalog_entry("so2_s2").build(), o), Error);
}

TEST(Analysis, ExpectedValuesDecideStatus)
{
  const CatalogEntry& e = catalog_entry("hopf_s1_s3");
  AnalysisOptions o;
  o.checks = {"oneill", "polarity"};
  const AnalysisReport r = analyze_entry(e, o);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].check, "oneill");
  EXPECT_NEAR(r.records[0].value.get<double>(), 4.0, 1e-2);
  EXPECT_EQ(r.records[1].status, "pass");
  EXPECT_FALSE(*r.records[1].verdict);
  EXPECT_TRUE(r.records[1].details.contains("witness"));
  // without the expectation a false verdict fails
  const AnalysisReport bare = analyze(e.build(), o);
  EXPECT_EQ(bare.records[1].status, "fail");
  EXPECT_FALSE(bare.passed());
}

TEST(Analysis, SequentialAndParallelAgree)
{
  const CatalogEntry& e = catalog_entry("so2_s2");
  AnalysisOptions o;
  o.checks = e.suite;
  const json a = report_to_json(analyze_entry(e, o));
  o.parallel = false;
  EXPECT_EQ(a.dump(), report_to_json(analyze_entry(e, o)).dump());
}

TEST(Report, JsonRoundTripIsLossless)
{
  const CatalogEntry& e = catalog_entry("su2_adjoint");
  AnalysisOptions o;
  o.checks = {"polarity", "weyl", "jacobi-scan"};
  const AnalysisReport r = analyze_entry(e, o);
  const json doc = report_to_json(r);
  EXPECT_EQ(doc["schema"], kReportSchema);
  EXPECT_EQ(report_to_json(report_from_json(doc)), doc);
  for (const json& rec : doc["records"])
    for (const char* key : {"check", "verdict", "value", "residual", "tolerance", "seed"})
      EXPECT_TRUE(rec.contains(key)) << key;
}

TEST(Report, TextKeepsTheVerdictSet)
{
  AnalysisOptions o;
  o.checks = {"polarity", "hyperpolarity", "weyl"};
  const AnalysisReport r = analyze_entry(catalog_entry("su2_diag_double"), o);
  const std::string text = emit_report(r, ReportFormat::Text);
  for (const CheckRecord& rec : r.records)
  {
    const std::string verdict = rec.verdict ? (*rec.verdict ? "true" : "false") : "n/a";
    EXPECT_NE(text.find(rec.check + ": " + rec.status + " verdict=" + verdict), std::string::npos);
  }
}

TEST(Report, PassedResidualsStayWithinTolerance)
{
  for (const CatalogEntry& e : catalog_list())
  {
    AnalysisOptions o;
    o.checks = e.suite;
    for (const std::string& drop : {"reduction-isometry", "cartan-probe"})
      o.checks.erase(std::remove(o.checks.begin(), o.checks.end(), drop), o.checks.end());
    for (const CheckRecord& rec : analyze_entry(e, o).records)
      if (rec.status == "pass" && rec.verdict && *rec.verdict)
        EXPECT_LE(rec.residual, rec.tolerance) << e.name << " " << rec.check;
  }
}

TEST(Cli, ListShowsCatalog)
{
  const CliRun r = run_cli("list");
  EXPECT_EQ(r.code, 0);
  for (const CatalogEntry& e : catalog_list())
    EXPECT_NE(r.out.find(e.name), std::string::npos);
}

TEST(Cli, EmptyCheckListPasses)
{
  const CliRun r = run_cli("analyze --entry su2_adjoint --checks ''");
  EXPECT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["records"].empty());
  EXPECT_EQ(doc["status"], "pass");
}

TEST(Cli, FailingPolarityExitsOneWithWitness)
{
  const std::string path = testing::TempDir() + "double.json";
  std::ofstream(path) << model_to_json(catalog_entry("su2_diag_double").build()).dump();
  const CliRun r = run_cli("analyze --model " + path + " --checks polarity --json");
  EXPECT_EQ(r.code, 1);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["status"], "fail");
  EXPECT_TRUE(doc["records"][0]["details"].contains("witness"));
}

TEST(Cli, UsageErrorsExitTwo)
{
  EXPECT_EQ(run_cli("analyze --entry su2_adjoint --step 0.5").code, 2);
  EXPECT_EQ(run_cli("analyze --entry nosuch").code, 2);
  EXPECT_EQ(run_cli("analyze --entry su2_adjoint --checks bogus").code, 2);
  EXPECT_EQ(run_cli("analyze").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("analyze --model '{\"schema\": 2}'").code, 2);
}

TEST(Cli, SeedFlagOverridesEnvironment)
{
  const std::string args = "analyze --entry hopf_s1_s3 --checks polarity,jacobi-scan";
  const CliRun env = run_cli(args, "POLARIS_SEED=7");
  const CliRun flag = run_cli(args + " --seed 7", "POLARIS_SEED=99");
  const CliRun plain = run_cli(args + " --seed 7");
  EXPECT_EQ(env.out, plain.out);
  EXPECT_EQ(flag.out, plain.out);
  EXPECT_NE(run_cli(args, "POLARIS_SEED=8").out, plain.out);
}

TEST(Cli, TextAndFileOutput)
{
  const std::string path = testing::TempDir() + "report.txt";
  const CliRun r = run_cli("analyze --entry so2_s2 --checks polarity --text --out " + path);
  EXPECT_EQ(r.code, 0);
  std::ifstream f(path);
  const std::string text((std::istreambuf_iterator<char>(f)), {});
  EXPECT_NE(text.find("polarity: pass"), std::string::npos);
  EXPECT_NE(text.find("status pass"), std::string::npos);
}
