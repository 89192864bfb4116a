#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heavynet/config.hpp"
#include "heavynet/harness.hpp"

namespace heavynet {

inline constexpr std::string_view kVersion = "0.1.0";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

enum class ReportFormat { kCsv, kJson };
ReportFormat parse_report_format(std::string_view s);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);  // array of objects keyed by column

Table convergence_table(const ConvergenceReport& r);
Table verdict_table(const std::vector<Verdict>& verdicts);
Table ratio_table(const RatioReport& r);
Table example013_table(const Example013Report& r);

// Sidecar: command, seed, version, the full configuration, extra key/value
// pairs and the verdicts with their thresholds.
std::string report_metadata(std::string_view command, const Config& cfg,
                            const std::vector<std::pair<std::string, std::string>>& extra,
                            const std::vector<Verdict>& verdicts);

// Writes <dir>/<stem>.csv (or .json) and <dir>/<stem>.meta.json; returns the
// table path.
std::filesystem::path emit_report(const std::filesystem::path& dir, std::string_view stem,
                                  const Table& table, std::string_view metadata,
                                  ReportFormat format);

}  // namespace heavynet
