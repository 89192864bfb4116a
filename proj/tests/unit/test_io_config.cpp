#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "expect_error.hpp"
#include "heavynet/config.hpp"
#include "heavynet/graph_io.hpp"
#include "heavynet/inverse_spectral.hpp"
#include "heavynet/report.hpp"
#include "heavynet/topology.hpp"

using namespace heavynet;
using heavynet::testing::corpus;
using heavynet::testing::random_connected_graph;

TEST(GraphText, RoundTripIsBitExact) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const MeasuredGraph g = random_connected_graph(rng, 3 + static_cast<std::size_t>(trial), 5);
    EXPECT_EQ(read_graph_text(write_graph_text(g)), g);
    EXPECT_EQ(read_graph_json(write_graph_json(g)), g);
  }
}

TEST(GraphText, CorpusRoundTripAndColors) {
  for (const auto& [name, g] : corpus()) EXPECT_EQ(read_graph_text(write_graph_text(g)), g) << name;
  const MeasuredGraph g = read_graph_text("# comment\nn 3\nm 1 2 3\n\ne 0 1 0.5 1\ne 1 2 2\n");
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0].color, 1);
  EXPECT_FALSE(g.edges()[1].color.has_value());
  EXPECT_EQ(read_graph_json(write_graph_json(g)).edges()[0].color, 1);
}

TEST(GraphText, RejectsMalformedInput) {
  EXPECT_ERROR_CODE(read_graph_text("n 2\nm 1\n"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(read_graph_text("n 2\nm 1 1\ne 0 5 1\n"), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(read_graph_text("n 2\nm 1 1\nq 0 1 1\n"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(read_graph_json("{\"n\": 2"), ErrorCode::kParse);
}

TEST(GraphText, FileRoundTripPicksFormatByExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "heavynet_io_test";
  std::filesystem::create_directories(dir);
  const MeasuredGraph g = p3_graph(2.0, 1.0);
  save_graph(g, dir / "g.json");
  save_graph(g, dir / "g.graph");
  EXPECT_EQ(load_graph(dir / "g.json"), g);
  EXPECT_EQ(load_graph(dir / "g.graph"), g);
  EXPECT_EQ(read_file(dir / "g.json").front(), '{');
  std::filesystem::remove_all(dir);
}

TEST(Doubles, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) {
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_ERROR_CODE(parse_double("1.5x"), ErrorCode::kParse);
}

TEST(SurfaceJson, RoundTrip) {
  const SurfaceModel s{p3_graph(3.0, 1.0), {1, 0, 2}};
  const SurfaceModel back = read_surface_model(write_surface_model(s));
  EXPECT_EQ(back.dual_graph, s.dual_graph);
  EXPECT_EQ(back.vertex_genera, s.vertex_genera);
  EXPECT_ERROR_CODE(read_surface_model("{\"areas\": [1]}"), ErrorCode::kParse);
}

TEST(ConfigJson, RoundTripPreservesEveryField) {
  Config c;
  c.seed = 42;
  c.targets = {0.5, 2.0, 2.5};
  c.N = 7;
  c.padding = {9.0, 10.0, 11.0};
  c.block = "diamond";
  c.m_list = {6, 8};
  c.sweep.prescribe.restarts = 5;
  c.sweep.assembly.wiring.gap_slack = 0.25;
  c.sweep.thresholds.reduction_error = 0.3;
  const Config back = read_config(write_config(c));
  EXPECT_EQ(write_config(back), write_config(c));
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.block, "diamond");
  EXPECT_EQ(back.sweep.prescribe.restarts, 5u);
  EXPECT_DOUBLE_EQ(back.sweep.assembly.wiring.gap_slack, 0.25);
  EXPECT_DOUBLE_EQ(back.sweep.thresholds.reduction_error, 0.3);
}

TEST(ConfigJson, PartialFilesKeepDefaultsAndUnknownKeysFail) {
  const Config c = read_config("{\"seed\": 3, \"wiring\": {\"resample_budget\": 7}}");
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.sweep.assembly.wiring.resample_budget, 7u);
  EXPECT_EQ(c.targets, (std::vector<double>{1.0, 3.0}));
  EXPECT_ERROR_CODE(read_config("{\"sed\": 3}"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(read_config("{\"wiring\": {\"slack\": 1}}"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(read_config("{\"seed\": \"x\"}"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(Config{.block = "cube"}.block_model(2), ErrorCode::kInvalidArgument);
}

TEST(ConfigJson, TargetAndBlockFollowSettings) {
  Config c;
  c.targets = {1.0, 2.0};
  c.N = 7;
  c.port_conductance = 2.0;
  EXPECT_EQ(c.target().N, 7u);
  EXPECT_DOUBLE_EQ(c.block_model(3).ports[2].conductance, 2.0);
  EXPECT_EQ(c.block_model(3).colors(), 3u);
}

TEST(Tables, CsvQuotingAndJson) {
  Table t;
  t.columns = {"name", "value"};
  t.add_row({"plain", "1"});
  t.add_row({"with,comma", "say \"hi\""});
  EXPECT_EQ(to_csv(t), "name,value\nplain,1\n\"with,comma\",\"say \"\"hi\"\"\"\n");
  const std::string j = to_json(t);
  EXPECT_NE(j.find("\"with,comma\""), std::string::npos);
  EXPECT_ERROR_CODE(t.add_row({"short"}), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::kJson);
  EXPECT_ERROR_CODE(parse_report_format("xml"), ErrorCode::kInvalidArgument);
}

TEST(Tables, EmitWritesTableAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "heavynet_emit_test";
  std::filesystem::remove_all(dir);
  Table t;
  t.columns = {"a"};
  t.add_row({"1"});
  const std::string meta = report_metadata("unit", Config{}, {{"k", "v"}}, {{"x", true, 1.0, 2.0, ""}});
  const auto path = emit_report(dir, "out", t, meta, ReportFormat::kCsv);
  EXPECT_EQ(path.filename(), "out.csv");
  EXPECT_EQ(read_file(dir / "out.csv"), "a\n1\n");
  const std::string side = read_file(dir / "out.meta.json");
  EXPECT_NE(side.find("\"command\""), std::string::npos);
  EXPECT_NE(side.find("\"unit\""), std::string::npos);
  std::filesystem::remove_all(dir);
}
