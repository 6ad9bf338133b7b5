#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mpsm/io.hpp"
#include "mpsm/pipeline.hpp"
#include "mpsm/transport.hpp"
#include "mpsm/vectorize.hpp"

namespace mpsm {

namespace {

using Function = std::vector<std::vector<double>>;  // [axis][vertex]

double simplex_l1(const AttributedGraph& graph, const Function& f, const Function& g) {
  double total = 0;
  for (std::size_t a = 0; a < f.size(); ++a) {
    for (int v = 0; v < graph.vertex_count; ++v) total += std::abs(f[a][v] - g[a][v]);
    for (const auto& [u, v] : graph.edges)
      total += std::abs(std::max(f[a][u], f[a][v]) - std::max(g[a][u], g[a][v]));
  }
  return total;
}

std::vector<double> linspace(double lo, double hi, int k) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = lo + (hi - lo) * i / (k - 1);
  return out;
}

}  // namespace

std::size_t StabilityTable::hilbert_violations() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.hilbert_ok(); }));
}

std::size_t StabilityTable::euler_violations() const {
  if (!euler) return 0;
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.euler_ok(); }));
}

std::string StabilityTable::to_csv() const {
  std::ostringstream os;
  os << "walk,i,j,l1,kr1,sw_distance,conv_l2" << (euler ? ",euler_kr1" : "") << "\n";
  for (const auto& r : rows) {
    os << r.walk << ',' << r.i << ',' << r.j << ',' << io::format_double(r.l1) << ',' << io::format_double(r.kr1)
       << ',' << io::format_double(r.sw_distance) << ',' << io::format_double(r.conv_l2);
    if (euler) os << ',' << io::format_double(r.euler_kr1);
    os << '\n';
  }
  return os.str();
}

std::vector<StabilityRow> stability_rows(const AttributedGraph& graph, const std::vector<Function>& functions,
                                         int walk, const StabilityOptions& options) {
  if (functions.size() < 2) throw std::invalid_argument("at least two functions are required");
  constexpr int kAxes = 2;
  for (const auto& f : functions) {
    if (f.size() != kAxes) throw std::invalid_argument("functions must have two axes");
    for (const auto& axis : f)
      if (static_cast<int>(axis.size()) != graph.vertex_count)
        throw std::invalid_argument("one value per vertex is required");
  }

  // Every value of the walk is a grid value, so no simplex is moved by snapping.
  std::vector<std::vector<double>> exact(kAxes), image_axes(kAxes);
  for (int a = 0; a < kAxes; ++a) {
    for (const auto& f : functions) exact[a].insert(exact[a].end(), f[a].begin(), f[a].end());
    std::sort(exact[a].begin(), exact[a].end());
    exact[a].erase(std::unique(exact[a].begin(), exact[a].end()), exact[a].end());
    image_axes[a] = linspace(exact[a].front(), exact[a].back(), options.image_resolution);
  }
  const GridSpec grid = GridSpec::from_axes(exact);
  const GridSpec image_grid = GridSpec::from_axes(image_axes);

  std::vector<double> bw = default_bandwidths(image_grid);
  if (options.bandwidth > 0) std::fill(bw.begin(), bw.end(), options.bandwidth);
  const auto kernel = KernelSpec::gaussian_bandwidths(bw);
  const auto sw = SWConfig::sample(kAxes, options.directions, options.sigma, options.seed);

  const FieldSpec field(11);
  const int degrees[] = {0};
  std::vector<SignedMeasure> hilbert, euler;
  std::vector<ConvolutionImage> images;
  for (const auto& f : functions) {
    const auto complex = lower_star(graph, f);
    const auto h = hilbert_function(complex, degrees, grid, field);
    hilbert.push_back(interior_part(hilbert_signed_measure(h, 0), grid));
    if (options.euler) euler.push_back(interior_part(euler_signed_measure(complex, grid), grid));
    images.push_back(gaussian_convolution(hilbert.back(), image_grid, kernel));
  }

  std::vector<StabilityRow> rows;
  for (std::size_t i = 0; i < functions.size(); ++i)
    for (std::size_t j = i + 1; j < functions.size(); ++j) {
      StabilityRow r;
      r.walk = walk;
      r.i = static_cast<int>(i);
      r.j = static_cast<int>(j);
      r.l1 = simplex_l1(graph, functions[i], functions[j]);
      r.kr1 = kr_distance(hilbert[i], hilbert[j], GroundNorm::L1);
      const double s = sliced_wasserstein(hilbert[i], hilbert[j], sw);
      r.sw_distance = std::sqrt(std::max(0.0, 2 - 2 * std::exp(-s)));
      r.conv_l2 = image_l2_distance(images[i], images[j]);
      if (options.euler) r.euler_kr1 = kr_distance(euler[i], euler[j], GroundNorm::L1);
      rows.push_back(r);
    }
  return rows;
}

StabilityTable stability_experiment(const AttributedGraph& graph, int steps, int walks, double noise,
                                    const StabilityOptions& options) {
  if (steps < 2) throw std::invalid_argument("steps must be at least 2");
  if (walks < 1) throw std::invalid_argument("walks must be at least 1");
  if (!(noise > 0)) throw std::invalid_argument("noise must be positive");
  if (graph.vertex_count < 1) throw std::invalid_argument("graph has no vertices");
  StabilityTable table;
  table.euler = options.euler;
  for (int w = 0; w < walks; ++w) {
    std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(w)));
    std::uniform_real_distribution<double> step(-noise, noise);
    std::vector<Function> functions;
    functions.emplace_back(2, std::vector<double>(graph.vertex_count, 0.0));
    for (int s = 1; s < steps; ++s) {
      Function next = functions.back();
      for (auto& axis : next)
        for (double& v : axis) v += step(rng);
      functions.push_back(std::move(next));
    }
    auto rows = stability_rows(graph, functions, w, options);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  return table;
}

}  // namespace mpsm
