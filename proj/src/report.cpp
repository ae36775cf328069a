#include "polaris/report.hpp"

#include <cstdio>
#include <sstream>

namespace polaris
{

using nlohmann::json;

namespace
{

json record_json(const CheckRecord& r)
{
  return {{"check", r.check},
          {"status", r.status},
          {"verdict", r.verdict ? json(*r.verdict) : json(nullptr)},
          {"value", r.value},
          {"residual", r.residual},
          {"tolerance", r.tolerance},
          {"seed", r.seed},
          {"expected", r.expected},
          {"details", r.details},
          {"note", r.note}};
}

std::string number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string value_text(const json& v)
{
  if (v.is_null())
    return "-";
  if (v.is_number_float())
    return number(v.get<double>());
  return v.dump();
}

void text_block(std::ostringstream& out, const AnalysisReport& report)
{
  out << "entry " << report.entry << "\n";
  for (const CheckRecord& r : report.records)
  {
    out << "  " << r.check << ": " << r.status << " verdict="
        << (r.verdict ? (*r.verdict ? "true" : "false") : "n/a") << " value=" << value_text(r.value)
        << " residual=" << number(r.residual) << " tol=" << number(r.tolerance) << " seed=" << r.seed;
    if (!r.note.empty())
      out << " (" << r.note << ")";
    out << "\n";
  }
  out << "status " << (report.passed() ? "pass" : "fail") << "\n";
}

}  // namespace

json report_to_json(const AnalysisReport& report)
{
  json records = json::array();
  for (const CheckRecord& r : report.records)
    records.push_back(record_json(r));
  return {{"schema", kReportSchema},
          {"entry", report.entry},
          {"records", records},
          {"status", report.passed() ? "pass" : "fail"}};
}

AnalysisReport report_from_json(const json& doc)
{
  if (!doc.is_object() || doc.value("schema", 0) != kReportSchema)
    throw Error("report: unsupported schema");
  AnalysisReport report;
  report.entry = doc.at("entry").get<std::string>();
  for (const json& j : doc.at("records"))
  {
    CheckRecord r;
    r.check = j.at("check").get<std::string>();
    r.status = j.at("status").get<std::string>();
    if (!j.at("verdict").is_null())
      r.verdict = j.at("verdict").get<bool>();
    r.value = j.at("value");
    r.residual = j.at("residual").is_null() ? 0.0 : j.at("residual").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.expected = j.at("expected");
    r.details = j.at("details");
    r.note = j.at("note").get<std::string>();
    report.records.push_back(std::move(r));
  }
  return report;
}

std::string emit_report(const AnalysisReport& report, ReportFormat format)
{
  if (format == ReportFormat::Json)
    return report_to_json(report).dump(2) + "\n";
  std::ostringstream out;
  text_block(out, report);
  return out.str();
}

std::string emit_reports(const std::vector<AnalysisReport>& reports, ReportFormat format)
{
  if (reports.size() == 1)
    return emit_report(reports.front(), format);
  bool all = true;
  for (const AnalysisReport& r : reports)
    all = all && r.passed();
  if (format == ReportFormat::Json)
  {
    json list = json::array();
    for (const AnalysisReport& r : reports)
      list.push_back(report_to_json(r));
    return json{{"schema", kReportSchema}, {"reports", list}, {"status", all ? "pass" : "fail"}}.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const AnalysisReport& r : reports)
    text_block(out, r);
  out << "overall " << (all ? "pass" : "fail") << "\n";
  return out.str();
}

}  // namespace polaris
