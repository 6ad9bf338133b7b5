#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "mpsm/config.hpp"
#include "mpsm/error.hpp"
#include "mpsm/io.hpp"
#include "support.hpp"

namespace mpsm {
namespace {

namespace fs = std::filesystem;

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(PointCloudIoTest, ParsesRows) {
  const auto cloud = io::parse_point_cloud("0,0\n1.5,-2\r\n\n3e1,4\n");
  ASSERT_EQ(cloud.size(), 3u);
  EXPECT_EQ(cloud.dimension(), 2);
  EXPECT_EQ(cloud.point(1)[1], -2.0);
  EXPECT_EQ(cloud.point(2)[0], 30.0);
}

TEST(PointCloudIoTest, NamesFileAndLine) {
  EXPECT_EQ(error_of([] { io::parse_point_cloud("0,0\n1,x\n", "pts.csv"); }), "pts.csv:2: malformed number 'x'");
  EXPECT_EQ(error_of([] { io::parse_point_cloud("0,0\n1,2,3\n", "pts.csv"); }),
            "pts.csv:2: expected 2 columns, found 3");
  EXPECT_THROW(io::parse_point_cloud("", "pts.csv"), InputError);
  EXPECT_THROW(io::parse_point_cloud("nan,1\n"), InputError);
  EXPECT_THROW(io::read_point_cloud("/nonexistent/dir/pts.csv"), InputError);
}

TEST(GraphIoTest, InternsLabels) {
  const auto g = io::parse_graph("# triangle\na b\nb c\nc a\n", std::nullopt);
  EXPECT_EQ(g.vertex_count, 3);
  EXPECT_EQ(g.edges.size(), 3u);
  EXPECT_EQ(g.labels, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(GraphIoTest, ReadsAttributes) {
  const auto g = io::parse_graph("x y\n", std::string("vertex,mass,charge\ny,2,0.5\nx,1,-1\n"));
  ASSERT_EQ(g.vertex_count, 2);
  ASSERT_EQ(g.attributes.size(), 2u);
  const auto* mass = g.find_attribute("mass");
  ASSERT_NE(mass, nullptr);
  // Dense ids follow the attribute rows.
  EXPECT_EQ(g.labels[0], "y");
  EXPECT_EQ(mass->values, (std::vector<double>{2, 1}));
  EXPECT_EQ(g.edges.size(), 1u);
}

TEST(GraphIoTest, RowIndexLabelsWithoutVertexColumn) {
  const auto g = io::parse_graph("0 2\n", std::string("w\n5\n6\n7\n"));
  EXPECT_EQ(g.vertex_count, 3);
  EXPECT_EQ(g.find_attribute("w")->values, (std::vector<double>{5, 6, 7}));
}

TEST(GraphIoTest, RejectsMalformedInput) {
  EXPECT_EQ(error_of([] { io::parse_graph("a b\na a\n", std::nullopt, "g.txt"); }), "g.txt:2: self-loop at 'a'");
  EXPECT_EQ(error_of([] { io::parse_graph("a b\nb a\n", std::nullopt, "g.txt"); }), "g.txt:2: duplicate edge b a");
  EXPECT_THROW(io::parse_graph("a b c\n", std::nullopt), InputError);
  EXPECT_THROW(io::parse_graph("a b\n", std::string("vertex,w\na,1\n")), InputError);
  EXPECT_THROW(io::parse_graph("a b\n", std::string("vertex,w\na,1\nb,z\n")), InputError);
}

TEST(ComplexJsonTest, RoundTrip) {
  testing::Rng rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing::random_complex(rng, 7, 1 + trial % 3, 5);
    const auto back = io::complex_from_json(io::complex_to_json(c));
    EXPECT_EQ(back.parameters(), c.parameters());
    EXPECT_EQ(back.simplices(), c.simplices());
    EXPECT_EQ(back.values(), c.values());
    EXPECT_EQ(back.vertex_count(), c.vertex_count());
  }
  EXPECT_THROW(io::complex_from_json(nlohmann::json::parse("{\"parameters\": 2}")), InputError);
}

TEST(MeasureJsonTest, RoundTrip) {
  testing::Rng rng(113);
  const auto mu = testing::random_measure(rng, 3, 5, 4, 2.0);
  EXPECT_EQ(io::measure_from_json(io::measure_to_json(mu)), mu);
  EXPECT_EQ(io::measure_from_json(io::measure_to_json(SignedMeasure(2))), SignedMeasure(2));
  EXPECT_THROW(io::measure_from_json(nlohmann::json::parse(R"({"n": 1, "atoms": [[0.0, 0.5]]})")), InputError);
  EXPECT_THROW(io::measure_from_json(nlohmann::json::parse(R"({"n": 2, "atoms": [[0.0, 1]]})")), InputError);
}

TEST(FormatTest, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2.0), "2");
  testing::Rng rng(127);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
}

TEST(FormatTest, GramCsv) {
  GramMatrix g{2, {1.0, 0.5, 0.5, 1.0}};
  const std::string ids[] = {"a", "b"};
  EXPECT_EQ(io::gram_to_csv(g, ids), "a,b\n1,0.5\n0.5,1\n");
  EXPECT_THROW(io::gram_to_csv(g, std::span<const std::string>(ids, 1)), std::invalid_argument);
}

TEST(FileTest, AtomicWriteCreatesParents) {
  const auto dir = fs::temp_directory_path() / "mpsm_io_test";
  fs::remove_all(dir);
  const auto path = dir / "nested" / "out.txt";
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  EXPECT_EQ(io::read_file(path), "second");
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  fs::remove_all(dir);
}

TEST(ConfigTest, DefaultsAreValid) {
  PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.parameters(), 2);
  EXPECT_EQ(cfg.max_dimension(), 2);
}

TEST(ConfigTest, IniRoundTrip) {
  PipelineConfig cfg;
  cfg.filtration.kind = FiltrationConfig::Kind::LowerStar;
  cfg.filtration.attributes = {"mass", "degree"};
  cfg.homology.degrees = {0};
  cfg.homology.field = 2;
  cfg.grid = {35, 0.05};
  cfg.measure.kind = MeasureConfig::Kind::Euler;
  cfg.vectorization.kind = VectorizationConfig::Kind::SlicedWasserstein;
  cfg.vectorization.bandwidths = {0.1, 0.25};
  cfg.vectorization.directions = 17;
  cfg.vectorization.sigma = 0.3;
  cfg.scales = {1, 2};
  cfg.seed = 1234567890123ULL;
  const auto back = PipelineConfig::from_ini(cfg.to_ini());
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(back.hash(), cfg.hash());
  EXPECT_EQ(PipelineConfig::from_ini(PipelineConfig().to_ini()), PipelineConfig());
}

TEST(ConfigTest, PartialDocumentKeepsDefaults) {
  const auto cfg = PipelineConfig::from_ini("[grid]\nresolution = 7\n");
  EXPECT_EQ(cfg.grid.resolution, 7);
  EXPECT_EQ(cfg.homology, HomologyConfig());
}

TEST(ConfigTest, RejectsUnknownKeys) {
  EXPECT_THROW(PipelineConfig::from_ini("[grid]\nresolutoin = 7\n"), InputError);
  EXPECT_THROW(PipelineConfig::from_ini("[gird]\nresolution = 7\n"), InputError);
  EXPECT_THROW(PipelineConfig::from_ini("[measure]\nkind = betti\n"), InputError);
  EXPECT_THROW(PipelineConfig::load("/nonexistent/config.ini"), InputError);
}

TEST(ConfigTest, ValidationNamesTheField) {
  auto message = [](auto mutate) {
    PipelineConfig cfg;
    mutate(cfg);
    return error_of([&] { cfg.validate(); });
  };
  EXPECT_NE(message([](PipelineConfig& c) { c.grid.resolution = 1; }).find("grid.resolution"), std::string::npos);
  EXPECT_NE(message([](PipelineConfig& c) { c.grid.beta = 0.5; }).find("grid.beta"), std::string::npos);
  EXPECT_NE(message([](PipelineConfig& c) { c.homology.degrees = {0, 0}; }).find("homology.degrees"),
            std::string::npos);
  EXPECT_NE(message([](PipelineConfig& c) { c.homology.field = 12; }), "");
  EXPECT_NE(message([](PipelineConfig& c) { c.filtration.descriptor = "degree"; }).find("filtration.descriptor"),
            std::string::npos);
  EXPECT_NE(message([](PipelineConfig& c) { c.filtration.kind = FiltrationConfig::Kind::LowerStar; })
                .find("filtration.attributes"),
            std::string::npos);
  EXPECT_NE(message([](PipelineConfig& c) { c.scales = {1}; }).find("vectorization.scales"), std::string::npos);
  EXPECT_NE(message([](PipelineConfig& c) { c.vectorization.bandwidths = {1, -1}; }).find("bandwidths"),
            std::string::npos);
}

TEST(ConfigTest, HashTracksContent) {
  PipelineConfig a, b;
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 64u);
  b.seed = 1;
  EXPECT_NE(a.hash(), b.hash());
}

}  // namespace
}  // namespace mpsm
