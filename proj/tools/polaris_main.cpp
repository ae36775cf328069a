#include "polaris/model_io.hpp"
#include "polaris/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace polaris;

namespace
{

int run_list()
{
  for (const CatalogEntry& e : catalog_list())
    std::cout << e.name << "\t" << to_string(e.kind) << "\t" << e.summary << "\n";
  return 0;
}

struct AnalyzeArgs
{
  std::string entry;
  std::string model;
  std::string checks;
  bool checks_given = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol = 1e-9;
  double step = 1e-3;
  bool text = false;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a)
{
  AnalysisOptions base;
  base.seed = a.seed_given ? a.seed : default_seed(1);
  base.tol = a.tol;
  base.step = a.step;
  if (a.checks_given)
    base.checks = parse_checks(a.checks);

  std::vector<AnalysisReport> reports;
  if (!a.model.empty())
  {
    const Model model = load_model(a.model);
    if (!a.checks_given)
      base.checks = known_checks();
    reports.push_back(analyze(model, base));
  }
  else
  {
    std::vector<const CatalogEntry*> entries;
    if (a.entry == "all")
      for (const CatalogEntry& e : catalog_list())
        entries.push_back(&e);
    else
      entries.push_back(&catalog_entry(a.entry));
    for (const CatalogEntry* e : entries)
    {
      AnalysisOptions o = base;
      if (!a.checks_given)
        o.checks = e->suite;
      reports.push_back(analyze_entry(*e, o));
    }
  }

  const std::string doc = emit_reports(reports, a.text ? ReportFormat::Text : ReportFormat::Json);
  if (a.out.empty())
    std::cout << doc;
  else
  {
    std::ofstream f(a.out);
    if (!(f << doc))
    {
      std::cerr << "error: cannot write " << a.out << "\n";
      return 2;
    }
  }
  for (const AnalysisReport& r : reports)
    if (!r.passed())
      return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"polaris: polarity and variational completeness of isometric actions"};
  app.require_subcommand(1);
  CLI::App* list = app.add_subcommand("list", "list the built-in catalog");

  AnalyzeArgs args;
  CLI::App* an = app.add_subcommand("analyze", "run checks on a catalog entry or a model file");
  auto* entry = an->add_option("--entry", args.entry, "catalog entry name, or 'all'");
  auto* model = an->add_option("--model", args.model, "model file or inline JSON");
  entry->excludes(model);
  model->excludes(entry);
  auto* checks = an->add_option("--checks", args.checks, "comma separated checks (default: entry suite)");
  auto* seed = an->add_option("--seed", args.seed, "base seed (overrides POLARIS_SEED)");
  an->add_option("--tol", args.tol, "numerical tolerance");
  an->add_option("--step", args.step, "grid step h, at most 1e-2");
  auto* json_flag = an->add_flag("--json", "JSON report (default)");
  auto* text_flag = an->add_flag("--text", args.text, "text report");
  json_flag->excludes(text_flag);
  an->add_option("--out", args.out, "write the report to a file");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e);
    return 2;
  }

  try
  {
    if (list->parsed())
      return run_list();
    if (args.entry.empty() && args.model.empty())
    {
      std::cerr << "error: analyze needs --entry or --model\n";
      return 2;
    }
    args.checks_given = checks->count() > 0;
    args.seed_given = seed->count() > 0;
    return run_analyze(args);
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
