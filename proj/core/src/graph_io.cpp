#include "heavynet/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "heavynet/errors.hpp"

namespace heavynet {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view token) {
  Int value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kParse, "bad integer '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "to_chars failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kParse, "bad number '" + std::string(token) + "'");
  }
  return value;
}

std::string write_graph_text(const MeasuredGraph& g) {
  std::string out = "n " + std::to_string(g.vertex_count()) + "\nm";
  for (double m : g.measures()) {
    out += ' ';
    out += format_double(m);
  }
  out += '\n';
  for (const Edge& e : g.edges()) {
    out += "e " + std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' + format_double(e.weight);
    if (e.color) out += ' ' + std::to_string(*e.color);
    out += '\n';
  }
  return out;
}

MeasuredGraph read_graph_text(std::string_view text) {
  std::size_t n = 0;
  bool have_n = false;
  std::vector<double> measures;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (tok[0] == "n") {
      if (tok.size() != 2) throw Error(ErrorCode::kParse, "malformed header" + where);
      n = parse_int<std::size_t>(tok[1]);
      have_n = true;
    } else if (tok[0] == "m") {
      for (std::size_t i = 1; i < tok.size(); ++i) measures.push_back(parse_double(tok[i]));
    } else if (tok[0] == "e") {
      if (tok.size() != 4 && tok.size() != 5) {
        throw Error(ErrorCode::kParse, "malformed edge" + where);
      }
      Edge e{parse_int<std::size_t>(tok[1]), parse_int<std::size_t>(tok[2]),
             parse_double(tok[3]), std::nullopt};
      if (tok.size() == 5) e.color = parse_int<int>(tok[4]);
      edges.push_back(e);
    } else {
      throw Error(ErrorCode::kParse, "unknown record '" + std::string(tok[0]) + "'" + where);
    }
  }
  if (!have_n) throw Error(ErrorCode::kParse, "missing 'n' header");
  if (measures.size() != n) {
    throw Error(ErrorCode::kParse, "expected " + std::to_string(n) + " measures, got " +
                                       std::to_string(measures.size()));
  }
  return MeasuredGraph(std::move(measures), edges);
}

std::string write_graph_json(const MeasuredGraph& g) {
  nlohmann::json j;
  j["n"] = g.vertex_count();
  j["measures"] = std::vector<double>(g.measures().begin(), g.measures().end());
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::json je = {{"u", e.u}, {"v", e.v}, {"w", e.weight}};
    if (e.color) je["color"] = *e.color;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j.dump(1) + "\n";
}

MeasuredGraph read_graph_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto n = j.at("n").get<std::size_t>();
    auto measures = j.at("measures").get<std::vector<double>>();
    if (measures.size() != n) throw Error(ErrorCode::kParse, "measure count does not match n");
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      Edge e{je.at("u").get<std::size_t>(), je.at("v").get<std::size_t>(),
             je.at("w").get<double>(), std::nullopt};
      if (je.contains("color")) e.color = je.at("color").get<int>();
      edges.push_back(e);
    }
    return MeasuredGraph(std::move(measures), edges);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, ex.what());
  }
}

MeasuredGraph load_graph(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return path.extension() == ".json" ? read_graph_json(text) : read_graph_text(text);
}

void save_graph(const MeasuredGraph& g, const std::filesystem::path& path) {
  write_file(path, path.extension() == ".json" ? write_graph_json(g) : write_graph_text(g));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path.string());
  out << contents;
}

}  // namespace heavynet
