#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mpsm/error.hpp"
#include "mpsm/io.hpp"
#include "mpsm/pipeline.hpp"
#include "support.hpp"

namespace mpsm {
namespace {

namespace fs = std::filesystem;

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mpsm_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path cloud(const std::string& name, int points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::string text;
    for (int i = 0; i < points; ++i) text += io::format_double(u(rng)) + "," + io::format_double(u(rng)) + "\n";
    io::write_file_atomic(dir_ / name, text);
    return dir_ / name;
  }

  fs::path dir_;
};

TEST_F(PipelineTest, FunctionRipsConvolutionSmoke) {
  PipelineConfig cfg;
  cfg.filtration.max_edge_length = 0.5;
  cfg.grid.resolution = 10;
  const auto report = run_pipeline({cloud("a.csv", 25, 1), cloud("b.csv", 25, 2)}, cfg, dir_ / "out");
  EXPECT_EQ(report.failures(), 0);
  EXPECT_EQ(report.exit_code(), 0);
  for (const std::string id : {"a", "b"}) {
    const auto text = io::read_file(dir_ / "out" / (id + ".features.csv"));
    const auto meta = io::read_json(dir_ / "out" / (id + ".meta.json"));
    // Two degrees, an 11 x 11 padded grid each.
    EXPECT_EQ(meta["feature_length"], 2 * 11 * 11);
    EXPECT_FALSE(text.empty());
  }
  const auto manifest = io::read_json(dir_ / "out" / "manifest.json");
  EXPECT_EQ(manifest["config_hash"], cfg.hash());
  EXPECT_EQ(manifest["samples"].size(), 2u);
}

TEST_F(PipelineTest, LowerStarEulerHasZeroMass) {
  io::write_file_atomic(dir_ / "g.txt", "a b\nb c\nc a\nc d\n");
  io::write_file_atomic(dir_ / "g.attrs.csv", "vertex,x,y\na,0,1\nb,1,0\nc,2,2\nd,0.5,3\n");
  PipelineConfig cfg;
  cfg.filtration.kind = FiltrationConfig::Kind::LowerStar;
  cfg.filtration.attributes = {"x", "y"};
  cfg.measure.kind = MeasureConfig::Kind::Euler;
  cfg.vectorization.kind = VectorizationConfig::Kind::None;
  const auto report = run_pipeline({dir_ / "g.txt"}, cfg, dir_ / "out");
  ASSERT_EQ(report.failures(), 0);
  const auto mu = io::measure_from_json(io::read_json(dir_ / "out" / "g.euler.json"));
  EXPECT_FALSE(mu.empty());
  EXPECT_EQ(mu.total_mass(), 0);
}

TEST_F(PipelineTest, GraphDescriptorAxes) {
  io::write_file_atomic(dir_ / "p.txt", "0 1\n1 2\n2 3\n");
  PipelineConfig cfg;
  cfg.filtration.kind = FiltrationConfig::Kind::LowerStar;
  cfg.filtration.attributes = {"degree", "hks:1"};
  const auto sample = build_sample_complex(dir_ / "p.txt", cfg);
  EXPECT_EQ(sample.complex.parameters(), 2);
  EXPECT_EQ(sample.complex.size(), 7u);
}

TEST_F(PipelineTest, MalformedRowIsNamed) {
  io::write_file_atomic(dir_ / "bad.csv", "0,0\n1,1\n2,oops\n");
  PipelineConfig cfg;
  try {
    run_pipeline({dir_ / "bad.csv"}, cfg, dir_ / "out");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.csv:3"), std::string::npos) << e.what();
  }
  EXPECT_FALSE(fs::exists(dir_ / "out" / "manifest.json"));
}

TEST_F(PipelineTest, KeepGoingRecordsFailures) {
  io::write_file_atomic(dir_ / "bad.csv", "0,0\n1\n");
  PipelineConfig cfg;
  cfg.grid.resolution = 5;
  const auto report = run_pipeline({cloud("good.csv", 10, 3), dir_ / "bad.csv"}, cfg, dir_ / "out", {1, true});
  EXPECT_EQ(report.failures(), 1);
  EXPECT_EQ(report.exit_code(), 2);
  const auto manifest = io::read_json(dir_ / "out" / "manifest.json");
  EXPECT_TRUE(manifest["samples"][1].contains("error"));
  EXPECT_TRUE(manifest["samples"][0].contains("outputs"));
}

TEST_F(PipelineTest, InvalidConfigIsAnInputError) {
  PipelineConfig cfg;
  cfg.grid.resolution = 0;
  EXPECT_THROW(run_pipeline({cloud("a.csv", 5, 1)}, cfg, dir_ / "out"), InputError);
}

TEST_F(PipelineTest, DuplicateStemsGetDistinctIds) {
  fs::create_directories(dir_ / "x");
  io::write_file_atomic(dir_ / "x" / "a.csv", "0,0\n1,1\n");
  PipelineConfig cfg;
  cfg.grid.resolution = 4;
  const auto report = run_pipeline({cloud("a.csv", 6, 1), dir_ / "x" / "a.csv"}, cfg, dir_ / "out");
  ASSERT_EQ(report.samples.size(), 2u);
  EXPECT_NE(report.samples[0].id, report.samples[1].id);
}

TEST_F(PipelineTest, RunsAreByteIdentical) {
  PipelineConfig cfg;
  cfg.filtration.max_edge_length = 0.6;
  cfg.grid.resolution = 8;
  cfg.seed = 77;
  const std::vector<fs::path> inputs{cloud("a.csv", 20, 4), cloud("b.csv", 20, 5), cloud("c.csv", 20, 6)};
  run_pipeline(inputs, cfg, dir_ / "one", {1, false});
  run_pipeline(inputs, cfg, dir_ / "two", {3, false});
  for (const auto& entry : fs::directory_iterator(dir_ / "one"))
    EXPECT_EQ(io::read_file(entry.path()), io::read_file(dir_ / "two" / entry.path().filename()))
        << entry.path().filename();

  cfg.vectorization.kind = VectorizationConfig::Kind::SlicedWasserstein;
  run_pipeline(inputs, cfg, dir_ / "sw1");
  run_pipeline(inputs, cfg, dir_ / "sw2", {2, false});
  EXPECT_EQ(io::read_file(dir_ / "sw1" / "gram_h0.csv"), io::read_file(dir_ / "sw2" / "gram_h0.csv"));
  EXPECT_EQ(io::read_file(dir_ / "sw1" / "manifest.json"), io::read_file(dir_ / "sw2" / "manifest.json"));
}

TEST(SeedTest, DerivedSeedsDifferPerSample) {
  EXPECT_EQ(derive_seed(5, 0), derive_seed(5, 0));
  EXPECT_NE(derive_seed(5, 0), derive_seed(5, 1));
  EXPECT_NE(derive_seed(5, 0), derive_seed(6, 0));
}

AttributedGraph path_graph(int n) {
  AttributedGraph g;
  g.vertex_count = n;
  for (int v = 0; v + 1 < n; ++v) g.edges.emplace_back(v, v + 1);
  return g;
}

TEST(StabilityTest, IdenticalFunctionsGiveZeroRow) {
  const auto g = path_graph(3);
  const std::vector<std::vector<double>> f{{0, 1, 2}, {2, 0, 1}};
  StabilityOptions opt;
  opt.euler = true;
  const auto rows = stability_rows(g, {f, f}, 0, opt);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].l1, 0.0);
  EXPECT_EQ(rows[0].kr1, 0.0);
  EXPECT_EQ(rows[0].sw_distance, 0.0);
  EXPECT_EQ(rows[0].conv_l2, 0.0);
  EXPECT_EQ(rows[0].euler_kr1, 0.0);
}

TEST(StabilityTest, L1SumsOverVerticesAndEdges) {
  const auto g = path_graph(2);
  const std::vector<std::vector<double>> f{{0, 0}, {0, 0}};
  const std::vector<std::vector<double>> h{{1, 0}, {0, 0.5}};
  const auto rows = stability_rows(g, {f, h}, 0, StabilityOptions());
  ASSERT_EQ(rows.size(), 1u);
  // Vertices: 1 + 0.5; the edge takes the maximum on each axis: 1 + 0.5.
  EXPECT_DOUBLE_EQ(rows[0].l1, 3.0);
  EXPECT_TRUE(rows[0].hilbert_ok());
}

TEST(StabilityTest, ExperimentShape) {
  testing::Rng rng(131);
  const auto g = testing::random_graph(rng, 8, 0.4);
  StabilityOptions opt;
  opt.euler = true;
  opt.image_resolution = 12;
  const auto table = stability_experiment(g, 4, 2, 0.2, opt);
  ASSERT_EQ(table.rows.size(), 2u * 6u);
  EXPECT_EQ(table.rows.front().walk, 0);
  EXPECT_EQ(table.rows.back().walk, 1);
  EXPECT_EQ(table.hilbert_violations(), 0u);
  EXPECT_EQ(table.euler_violations(), 0u);
  const auto csv = table.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "walk,i,j,l1,kr1,sw_distance,conv_l2,euler_kr1");
}

}  // namespace
}  // namespace mpsm
