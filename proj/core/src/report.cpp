#include "heavynet/report.hpp"

#include <json.hpp>

#include "heavynet/errors.hpp"
#include "heavynet/graph_io.hpp"

namespace heavynet {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double x) { return format_double(x); }

std::string list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ";" : "") + fmt(xs[i]);
  return out;
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "row width differs from the header");
  }
  rows.push_back(std::move(row));
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument, "format must be csv or json");
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += "\n";
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = row[i];
    a.push_back(std::move(o));
  }
  return a.dump(1) + "\n";
}

Table convergence_table(const ConvergenceReport& r) {
  Table t;
  t.columns = {"m", "ok", "nodes", "method", "seconds", "nu", "macro", "ratios", "rescaled",
               "parasitic", "corridor_mass", "flatness", "flatness_guard", "residuals", "error"};
  for (const auto& row : r.rows) {
    t.add_row({std::to_string(row.m), row.ok ? "1" : "0", std::to_string(row.nodes), row.method,
               fmt(row.seconds), list(row.nu), list(row.macro), list(row.ratios),
               list(row.rescaled), fmt(row.parasitic), list(row.corridor_mass),
               list(row.flatness), fmt(row.flatness_guard), list(row.residuals), row.error});
  }
  return t;
}

Table verdict_table(const std::vector<Verdict>& verdicts) {
  Table t;
  t.columns = {"criterion", "pass", "value", "threshold", "detail"};
  for (const auto& v : verdicts) {
    t.add_row({v.criterion, v.pass ? "PASS" : "FAIL", fmt(v.value), fmt(v.threshold), v.detail});
  }
  return t;
}

Table ratio_table(const RatioReport& r) {
  Table t;
  t.columns = {"m",     "ratios",          "target_ratios", "max_ratio_error", "delta",
               "bound", "delta_qualifies", "bound_holds",   "epsilon_holds"};
  for (const auto& row : r.rows) {
    t.add_row({std::to_string(row.m), list(row.ratios), list(row.target_ratios),
               fmt(row.max_ratio_error), fmt(row.delta), fmt(row.bound),
               row.delta_qualifies ? "1" : "0", row.bound_holds ? "1" : "0",
               row.epsilon_holds ? "1" : "0"});
  }
  return t;
}

Table example013_table(const Example013Report& r) {
  Table t;
  t.columns = {"check", "value", "expected", "tolerance", "pass"};
  for (const auto& c : r.checks) {
    t.add_row({c.name, fmt(c.value), fmt(c.expected), fmt(c.tolerance), c.pass ? "PASS" : "FAIL"});
  }
  return t;
}

std::string report_metadata(std::string_view command, const Config& cfg,
                            const std::vector<std::pair<std::string, std::string>>& extra,
                            const std::vector<Verdict>& verdicts) {
  nlohmann::json j;
  j["command"] = std::string(command);
  j["version"] = std::string(kVersion);
  j["seed"] = cfg.seed;
  j["config"] = nlohmann::json::parse(write_config(cfg));
  for (const auto& [k, v] : extra) j["info"][k] = v;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : verdicts) {
    vs.push_back({{"criterion", v.criterion},
                  {"pass", v.pass},
                  {"value", v.value},
                  {"threshold", v.threshold},
                  {"kind", "empirical guard"},
                  {"detail", v.detail}});
  }
  j["verdicts"] = std::move(vs);
  return j.dump(2) + "\n";
}

std::filesystem::path emit_report(const std::filesystem::path& dir, std::string_view stem,
                                  const Table& table, std::string_view metadata,
                                  ReportFormat format) {
  const std::string base(stem);
  const std::filesystem::path path =
      dir / (base + (format == ReportFormat::kCsv ? ".csv" : ".json"));
  write_file(path, format == ReportFormat::kCsv ? to_csv(table) : to_json(table));
  write_file(dir / (base + ".meta.json"), metadata);
  return path;
}

}  // namespace heavynet
