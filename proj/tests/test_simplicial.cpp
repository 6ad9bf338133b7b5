#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <gtest/gtest.h>

#include "mpsm/descriptors.hpp"
#include "mpsm/simplicial.hpp"
#include "support.hpp"

namespace mpsm {
namespace {

std::map<std::vector<Vertex>, std::vector<double>> as_map(const FilteredComplex& c) {
  std::map<std::vector<Vertex>, std::vector<double>> m;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto v = c.simplex(i).vertices();
    auto f = c.value(i);
    m[{v.begin(), v.end()}] = {f.begin(), f.end()};
  }
  return m;
}

TEST(SimplexTest, SortsAndRejectsBadInput) {
  Simplex s{3, 1, 2};
  EXPECT_EQ(s.dimension(), 2);
  EXPECT_EQ(s[0], 1);
  EXPECT_EQ(s.facet(0), (Simplex{2, 3}));
  EXPECT_THROW(Simplex(std::vector<Vertex>{}), std::invalid_argument);
  EXPECT_THROW((Simplex{1, 1}), std::invalid_argument);
  EXPECT_THROW((Simplex{-1, 2}), std::invalid_argument);
}

TEST(RipsTest, RightTriangle) {
  const auto cloud = PointCloud::from_rows({{0, 0}, {1, 0}, {0, 1}});
  const auto c = build_rips(cloud, 2, 2);
  const auto m = as_map(c);
  ASSERT_EQ(m.size(), 7u);
  EXPECT_EQ(m.at({0}), std::vector<double>{0});
  EXPECT_EQ(m.at({0, 1}), std::vector<double>{1});
  EXPECT_EQ(m.at({0, 2}), std::vector<double>{1});
  EXPECT_DOUBLE_EQ(m.at({1, 2})[0], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(m.at({0, 1, 2})[0], std::sqrt(2.0));
  EXPECT_TRUE(validate_complex(c).ok());
}

TEST(RipsTest, SinglePointAndFarPair) {
  EXPECT_EQ(build_rips(PointCloud::from_rows({{4, 4}}), 1, 3).size(), 1u);
  const auto c = build_rips(PointCloud::from_rows({{0, 0}, {3, 0}}), 1, 1);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.max_dimension(), 0);
}

TEST(RipsTest, EmptyCloudIsAnError) {
  try {
    build_rips(PointCloud{}, 1, 1);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "empty input");
  }
}

TEST(RipsTest, CountsMatchSubsetEnumeration) {
  testing::Rng rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> size(1, 10), dim(0, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = size(rng), k = dim(rng);
    const double r = 0.2 + 0.6 * u(rng);
    std::vector<std::vector<double>> rows(n, std::vector<double>(2));
    for (auto& p : rows)
      for (double& x : p) x = u(rng);
    const auto cloud = PointCloud::from_rows(rows);
    std::size_t expected = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) > k + 1) continue;
      double diam = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if ((mask >> i & 1) && (mask >> j & 1)) diam = std::max(diam, cloud.distance(i, j));
      if (diam <= r) ++expected;
    }
    const auto c = build_rips(cloud, r, k);
    EXPECT_EQ(c.size(), expected);
    EXPECT_TRUE(validate_complex(c).ok());
  }
}

TEST(FunctionRipsTest, TwoPoints) {
  const auto cloud = PointCloud::from_rows({{0, 0}, {1, 0}});
  const std::vector<double> d{2, 5};
  const auto m = as_map(build_function_rips(cloud, d, 2, 1));
  EXPECT_EQ(m.at({0}), (std::vector<double>{0, -2}));
  EXPECT_EQ(m.at({1}), (std::vector<double>{0, -5}));
  EXPECT_EQ(m.at({0, 1}), (std::vector<double>{1, -2}));
}

TEST(FunctionRipsTest, ConstantValuesProjectToRips) {
  testing::Rng rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> rows(8, std::vector<double>(3));
  for (auto& p : rows)
    for (double& x : p) x = u(rng);
  const auto cloud = PointCloud::from_rows(rows);
  const std::vector<double> d(8, 1.5);
  const auto f = as_map(build_function_rips(cloud, d, 0.8, 2));
  const auto r = as_map(build_rips(cloud, 0.8, 2));
  ASSERT_EQ(f.size(), r.size());
  for (const auto& [s, v] : r) {
    EXPECT_EQ(f.at(s)[0], v[0]);
    EXPECT_EQ(f.at(s)[1], -1.5);
  }
}

TEST(FunctionRipsTest, LengthMismatch) {
  const std::vector<double> none;
  EXPECT_THROW(build_function_rips(PointCloud{}, none, 1, 1), std::invalid_argument);
  const std::vector<double> one{1};
  EXPECT_THROW(build_function_rips(PointCloud::from_rows({{0}, {1}}), one, 1, 1), std::invalid_argument);
}

TEST(LowerStarTest, PathAndNoEdges) {
  AttributedGraph g;
  g.vertex_count = 2;
  g.edges = {{0, 1}};
  g.attributes = {{"a", {0, 1}}};
  const auto m = as_map(lower_star_multifiltration(g, {"a"}));
  EXPECT_EQ(m.at({0}), std::vector<double>{0});
  EXPECT_EQ(m.at({1}), std::vector<double>{1});
  EXPECT_EQ(m.at({0, 1}), std::vector<double>{1});

  g.edges.clear();
  EXPECT_EQ(lower_star_multifiltration(g, {"a"}).max_dimension(), 0);
}

TEST(LowerStarTest, TriangleComponentwiseMax) {
  AttributedGraph g;
  g.vertex_count = 3;
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  g.attributes = {{"x", {0, 3, 1}}, {"y", {2, 0, 1}}};
  const auto m = as_map(lower_star_multifiltration(g, {"x", "y"}));
  EXPECT_EQ(m.at({0, 1}), (std::vector<double>{3, 2}));
  EXPECT_EQ(m.at({1, 2}), (std::vector<double>{3, 1}));
  EXPECT_EQ(m.at({0, 2}), (std::vector<double>{1, 2}));
}

TEST(LowerStarTest, UnknownAttributeListsAvailableNames) {
  AttributedGraph g;
  g.vertex_count = 1;
  g.attributes = {{"alpha", {0}}, {"beta", {1}}};
  try {
    lower_star_multifiltration(g, {"gamma"});
    FAIL();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("alpha"), std::string::npos);
    EXPECT_NE(msg.find("beta"), std::string::npos);
  }
}

TEST(LowerStarTest, RelabelingIsEquivariant) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_graph(rng, 12, 0.3);
    const auto f = testing::random_vertex_functions(rng, g.vertex_count, 2, 5);
    std::vector<Vertex> perm(g.vertex_count);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    AttributedGraph h;
    h.vertex_count = g.vertex_count;
    for (auto [u, v] : g.edges) h.edges.emplace_back(perm[u], perm[v]);
    std::vector<std::vector<double>> fh(2, std::vector<double>(g.vertex_count));
    for (int a = 0; a < 2; ++a)
      for (int v = 0; v < g.vertex_count; ++v) fh[a][perm[v]] = f[a][v];
    const auto cg = as_map(lower_star(g, f));
    const auto ch = as_map(lower_star(h, fh));
    ASSERT_EQ(cg.size(), ch.size());
    for (const auto& [s, v] : cg) {
      std::vector<Vertex> t;
      for (Vertex x : s) t.push_back(perm[x]);
      std::sort(t.begin(), t.end());
      EXPECT_EQ(ch.at(t), v);
    }
  }
}

TEST(ValidateTest, ReportsMissingFace) {
  FilteredComplex c(1);
  c.add({0}, {0.0});
  c.add({0, 1}, {1.0});
  const auto r = validate_complex(c);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].kind, Violation::Kind::MissingFace);
  EXPECT_EQ(r.violations[0].face, (Simplex{1}));
}

TEST(ValidateTest, ReportsMonotonicityAxis) {
  FilteredComplex c(2);
  c.add({0}, {0.0, 0.0});
  c.add({1}, {0.0, 2.0});
  c.add({0, 1}, {1.0, 1.0});
  const auto r = validate_complex(c);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, Violation::Kind::Monotonicity);
  EXPECT_EQ(r.violations[0].axis, 1);
  EXPECT_EQ(r.violations[0].face, (Simplex{1}));
}

TEST(ValidateTest, ReportsDuplicatesAndNonFiniteValues) {
  FilteredComplex c(1);
  c.add({0}, {0.0});
  c.add({0}, {0.0});
  c.add({1}, {std::nan("")});
  const auto r = validate_complex(c);
  int dup = 0, bad = 0;
  for (const auto& v : r.violations) {
    dup += v.kind == Violation::Kind::Duplicate;
    bad += v.kind == Violation::Kind::BadValue;
  }
  EXPECT_EQ(dup, 1);
  EXPECT_EQ(bad, 1);
}

TEST(ValidateTest, ConstructorsAreValidOnRandomInput) {
  testing::Rng rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> rows(15, std::vector<double>(2));
    for (auto& p : rows)
      for (double& x : p) x = u(rng);
    const auto cloud = PointCloud::from_rows(rows);
    EXPECT_TRUE(validate_complex(build_rips(cloud, 0.5, 3)).ok());
    EXPECT_TRUE(validate_complex(build_function_rips(cloud, kde_codensity(cloud, 0.2), 0.5, 2)).ok());
    auto g = testing::random_graph(rng, 20, 0.2);
    EXPECT_TRUE(validate_complex(lower_star(g, testing::random_vertex_functions(rng, g.vertex_count, 3, 4))).ok());
  }
}

TEST(DescriptorTest, DegreeOnPath) {
  AttributedGraph g;
  g.vertex_count = 3;
  g.edges = {{0, 1}, {1, 2}};
  EXPECT_EQ(degree(g), (std::vector<double>{1, 2, 1}));
}

TEST(DescriptorTest, DtmWithFullMass) {
  const auto cloud = PointCloud::from_rows({{0}, {3}});
  EXPECT_EQ(distance_to_measure(cloud, 1.0), (std::vector<double>{1.5, 1.5}));
}

TEST(DescriptorTest, DtmSmallMassIsZero) {
  const auto cloud = PointCloud::from_rows({{0}, {3}, {7}});
  EXPECT_EQ(distance_to_measure(cloud, 0.1), (std::vector<double>{0, 0, 0}));
}

TEST(DescriptorTest, HeatKernelOnSingleVertexIsZero) {
  AttributedGraph g;
  g.vertex_count = 1;
  EXPECT_EQ(heat_kernel_signature(g, 10), std::vector<double>{0});
}

TEST(DescriptorTest, HeatKernelOnEdge) {
  // Laplacian [[1,-1],[-1,1]]: lambda = 2 with phi = (1,-1)/sqrt 2.
  AttributedGraph g;
  g.vertex_count = 2;
  g.edges = {{0, 1}};
  const auto h = heat_kernel_signature(g, 0.5);
  EXPECT_NEAR(h[0], 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(h[1], 0.5 * std::exp(-1.0), 1e-12);
}

TEST(DescriptorTest, ClosenessConventions) {
  AttributedGraph path;
  path.vertex_count = 3;
  path.edges = {{0, 1}, {1, 2}};
  auto c = closeness(path);
  EXPECT_EQ(c.convention, ClosenessConvention::Standard);
  EXPECT_DOUBLE_EQ(c.values[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.values[1], 1.0);

  AttributedGraph split;
  split.vertex_count = 3;
  split.edges = {{0, 1}};
  c = closeness(split);
  EXPECT_EQ(c.convention, ClosenessConvention::Harmonic);
  EXPECT_DOUBLE_EQ(c.values[0], 1.0);
  EXPECT_DOUBLE_EQ(c.values[2], 0.0);
}

TEST(DescriptorTest, KdeCodensityIsSmallerInDenseRegions) {
  const auto cloud = PointCloud::from_rows({{0}, {0.01}, {0.02}, {5}});
  const auto k = kde_codensity(cloud, 0.1);
  EXPECT_LT(k[1], k[3]);
  EXPECT_LT(k[3], 0.0);
}

TEST(DescriptorTest, NeighbourCodensityCountsWithinRadius) {
  const auto cloud = PointCloud::from_rows({{0}, {0.5}, {2}});
  EXPECT_EQ(neighbour_codensity(cloud, 1.0), (std::vector<double>{-1, -1, 0}));
}

TEST(DescriptorTest, ParseRoundTrip) {
  for (const std::string s : {"degree", "closeness", "hks:10", "kde:0.1", "dtm:0.25", "codegree:0.2"})
    EXPECT_EQ(DescriptorSpec::parse(s).to_string(), s);
  EXPECT_THROW(DescriptorSpec::parse("hks"), std::invalid_argument);
  EXPECT_THROW(DescriptorSpec::parse("kde:abc"), std::invalid_argument);
  EXPECT_THROW(DescriptorSpec::parse("pagerank"), std::invalid_argument);
}

TEST(DescriptorTest, PreconditionsAndInputKinds) {
  const auto cloud = PointCloud::from_rows({{0}, {1}});
  EXPECT_THROW(kde_codensity(cloud, 0), std::invalid_argument);
  EXPECT_THROW(distance_to_measure(cloud, 0), std::invalid_argument);
  EXPECT_THROW(distance_to_measure(cloud, 1.5), std::invalid_argument);
  EXPECT_THROW(vertex_descriptor(cloud, DescriptorSpec::parse("degree")), std::invalid_argument);
  AttributedGraph g;
  g.vertex_count = 1;
  EXPECT_THROW(heat_kernel_signature(g, 0), std::invalid_argument);
  EXPECT_THROW(vertex_descriptor(g, DescriptorSpec::parse("kde:1")), std::invalid_argument);
}

}  // namespace
}  // namespace mpsm
