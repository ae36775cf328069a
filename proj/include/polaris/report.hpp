#ifndef POLARIS_REPORT_HPP
#define POLARIS_REPORT_HPP

#include "polaris/analysis.hpp"

namespace polaris
{

inline constexpr int kReportSchema = 1;

enum class ReportFormat
{
  Json,
  Text
};

nlohmann::json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& doc);

std::string emit_report(const AnalysisReport& report, ReportFormat format);
/// Several reports (one per entry) in one document.
std::string emit_reports(const std::vector<AnalysisReport>& reports, ReportFormat format);

}  // namespace polaris

#endif
