#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "heavynet/measured_graph.hpp"

namespace heavynet {

// Shortest decimal that parses back to the identical double.
std::string format_double(double x);
double parse_double(std::string_view token);

// Line-oriented text form:
//   n <count>
//   m <v0> <v1> ...
//   e <u> <v> <weight> [color]        (one line per stored edge)
// Blank lines and lines starting with '#' are ignored on input.
std::string write_graph_text(const MeasuredGraph& g);
MeasuredGraph read_graph_text(std::string_view text);

// Structured form: {"n": .., "measures": [..], "edges": [{"u","v","w","color"?}]}.
std::string write_graph_json(const MeasuredGraph& g);
MeasuredGraph read_graph_json(std::string_view text);

// Picks the form from the extension (.json -> structured, otherwise text).
MeasuredGraph load_graph(const std::filesystem::path& path);
void save_graph(const MeasuredGraph& g, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace heavynet
