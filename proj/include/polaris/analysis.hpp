#ifndef POLARIS_ANALYSIS_HPP
#define POLARIS_ANALYSIS_HPP

#include "polaris/catalog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polaris
{

/// One check outcome. `verdict` is empty when the check does not apply.
struct CheckRecord
{
  std::string check;
  /// "pass", "fail" or "inapplicable"
  std::string status;
  std::optional<bool> verdict;
  nlohmann::json value;
  double residual = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json expected;
  nlohmann::json details = nlohmann::json::object();
  std::string note;
  /// seconds; never serialized to json
  double runtime = 0.0;
};

struct AnalysisReport
{
  std::string entry;
  std::vector<CheckRecord> records;

  bool passed() const;
};

struct AnalysisOptions
{
  std::vector<std::string> checks;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double step = 1e-3;
  bool parallel = true;
};

/// Check identifiers in canonical order.
const std::vector<std::string>& known_checks();

/// Splits a comma separated list; unknown names raise Error.
std::vector<std::string> parse_checks(const std::string& csv);

/// Runs the requested checks. Expected outcomes (keyed by check) decide pass
/// or fail when present; otherwise a record passes when its property holds.
AnalysisReport analyze(const Model& model, const AnalysisOptions& options,
                       const nlohmann::json& expected = nlohmann::json::object());

/// Catalog entry with its expectations; an empty check list in `options`
/// runs nothing, use `entry.suite` for the full suite.
AnalysisReport analyze_entry(const CatalogEntry& entry, const AnalysisOptions& options);

/// Reads POLARIS_SEED, falling back to the given default.
std::uint64_t default_seed(std::uint64_t fallback = 1);

}  // namespace polaris

#endif
