#include "mpsm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "mpsm/descriptors.hpp"
#include "mpsm/error.hpp"
#include "mpsm/io.hpp"
#include "mpsm/transport.hpp"
#include "mpsm/vectorize.hpp"

namespace mpsm {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

fs::path attributes_path(const fs::path& edges) {
  fs::path p = edges;
  p.replace_extension();
  p += ".attrs.csv";
  return p;
}

std::vector<double> scaled_coords(const SignedMeasure& mu, std::span<const double> scales) {
  std::vector<double> c = mu.coords();
  if (scales.empty()) return c;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= scales[i % scales.size()];
  return c;
}

SignedMeasure rescale(const SignedMeasure& mu, std::span<const double> scales) {
  if (scales.empty() || mu.empty()) return mu;
  return SignedMeasure(mu.dimension(), scaled_coords(mu, scales), mu.weights());
}

nlohmann::json grid_json(const GridSpec& grid, const FilteredComplex& complex) {
  nlohmann::json axes = nlohmann::json::array();
  for (int j = 0; j < grid.parameters(); ++j) {
    auto a = grid.axis(j);
    axes.push_back({{"values", std::vector<double>(a.begin(), a.end() - 1)},
                    {"padding", grid.padding(j)},
                    {"percentiles_of", complex.percentile_source(j) == PercentileSource::AllSimplices
                                           ? "all simplices"
                                           : "vertices"}});
  }
  return {{"beta", grid.beta()}, {"axes", axes}};
}

int exit_code_of(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const InputError&) {
    return 2;
  } catch (const std::invalid_argument&) {
    return 2;
  } catch (const NumericError&) {
    return 3;
  } catch (...) {
    return 3;
  }
}

std::string message_of(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  std::vector<std::jthread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
}

}  // namespace

SampleComplex build_sample_complex(const fs::path& input, const PipelineConfig& config) {
  const auto& f = config.filtration;
  const int max_dim = config.max_dimension();
  switch (f.kind) {
    case FiltrationConfig::Kind::Rips: {
      auto cloud = io::read_point_cloud(input);
      return {build_rips(cloud, f.max_edge_length, max_dim), "rips"};
    }
    case FiltrationConfig::Kind::FunctionRips: {
      auto cloud = io::read_point_cloud(input);
      const auto spec = DescriptorSpec::parse(f.descriptor);
      auto codensity = vertex_descriptor(cloud, spec);
      // The second axis is the lower star of the codensity.
      for (double& v : codensity.values) v = -v;
      return {build_function_rips(cloud, codensity.values, f.max_edge_length, max_dim),
              spec.to_string() + ": " + codensity.note};
    }
    case FiltrationConfig::Kind::LowerStar: {
      const auto attrs = attributes_path(input);
      auto graph = io::read_graph(input, fs::exists(attrs) ? std::optional<fs::path>(attrs) : std::nullopt);
      std::vector<std::vector<double>> axes;
      std::string note;
      for (const auto& name : f.attributes) {
        if (const auto* a = graph.find_attribute(name)) {
          axes.push_back(a->values);
          note += (note.empty() ? "" : "; ") + name;
          continue;
        }
        DescriptorSpec spec;
        try {
          spec = DescriptorSpec::parse(name);
        } catch (const std::invalid_argument&) {
          std::string available;
          for (const auto& a : graph.attributes) available += (available.empty() ? "" : ", ") + a.name;
          throw InputError(input.string() + ": unknown attribute '" + name + "' (available: " +
                           (available.empty() ? "none" : available) + ")");
        }
        auto r = vertex_descriptor(graph, spec);
        axes.push_back(std::move(r.values));
        note += (note.empty() ? "" : "; ") + r.note;
      }
      return {lower_star(graph, axes), note};
    }
  }
  throw std::logic_error("unknown filtration kind");
}

SampleMeasures compute_measures(const FilteredComplex& complex, const PipelineConfig& config, int threads) {
  SampleMeasures out;
  out.grid = make_grid(complex, config.grid.resolution, config.grid.beta);
  if (config.measure.kind == MeasureConfig::Kind::Euler) {
    out.labels.push_back("euler");
    out.measures.push_back(euler_signed_measure(complex, out.grid));
    return out;
  }
  HilbertOptions opts;
  opts.threads = threads;
  const auto h = hilbert_function(complex, config.homology.degrees, out.grid, FieldSpec(config.homology.field), opts);
  for (int d : config.homology.degrees) {
    out.labels.push_back("h" + std::to_string(d));
    out.measures.push_back(hilbert_signed_measure(h, d));
  }
  return out;
}

int PipelineReport::failures() const {
  return static_cast<int>(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return !s.error.empty(); }));
}

int PipelineReport::exit_code() const {
  for (const auto& s : samples)
    if (!s.error.empty()) return s.exit_code;
  return 0;
}

PipelineReport run_pipeline(const std::vector<fs::path>& inputs, const PipelineConfig& config, const fs::path& out,
                            const PipelineOptions& options) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (inputs.empty()) throw std::invalid_argument("no input files");

  PipelineReport report;
  std::map<std::string, int> stems;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    SampleOutcome s;
    s.input = inputs[i];
    s.id = inputs[i].stem().string();
    if (int n = stems[s.id]++; n > 0) s.id += "_" + std::to_string(i);
    s.seed = derive_seed(config.seed, i);
    report.samples.push_back(std::move(s));
  }

  const auto& vec = config.vectorization;
  const std::size_t count = inputs.size();
  const int inner = count >= static_cast<std::size_t>(options.threads) ? 1 : std::max(1, options.threads);
  std::vector<SampleMeasures> measures(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<bool> stop{false};

  parallel_for(count, options.threads, [&](std::size_t i) {
    if (stop) return;
    auto& s = report.samples[i];
    try {
      auto sample = build_sample_complex(s.input, config);
      measures[i] = compute_measures(sample.complex, config, inner);
      const auto& m = measures[i];
      for (const auto& mu : m.measures)
        if (mu.total_mass() != 0) throw NumericError("signed measure of " + s.id + " has non-zero mass");

      nlohmann::json meta{{"id", s.id},
                          {"input", s.input.string()},
                          {"seed", s.seed},
                          {"filtration", to_string(config.filtration.kind)},
                          {"vertex_function", sample.note},
                          {"measure", to_string(config.measure.kind)},
                          {"blocks", m.labels},
                          {"grid", grid_json(m.grid, sample.complex)},
                          {"scales", config.scales}};

      if (vec.kind == VectorizationConfig::Kind::Convolution) {
        auto bw = vec.bandwidths;
        if (bw.empty()) {
          bw = default_bandwidths(m.grid);
          for (std::size_t j = 0; j < bw.size() && !config.scales.empty(); ++j) bw[j] *= config.scales[j];
        }
        const auto kernel = KernelSpec::gaussian_bandwidths(bw);
        std::vector<ConvolutionImage> images;
        for (const auto& mu : m.measures) images.push_back(gaussian_convolution(mu, m.grid, kernel, config.scales));
        const auto features = assemble_features(images);
        meta["kernel"] = {{"kind", "gaussian"}, {"bandwidths", bw}, {"default_bandwidths", vec.bandwidths.empty()}};
        meta["feature_length"] = features.size();
        io::write_file_atomic(out / (s.id + ".features.csv"), io::features_to_csv(features));
        s.outputs.push_back(s.id + ".features.csv");
      } else {
        for (std::size_t b = 0; b < m.measures.size(); ++b) {
          const std::string name = s.id + "." + m.labels[b] + ".json";
          io::write_file_atomic(out / name, io::measure_to_json(m.measures[b]).dump(1) + "\n");
          s.outputs.push_back(name);
        }
      }
      io::write_file_atomic(out / (s.id + ".meta.json"), meta.dump(1) + "\n");
      s.outputs.push_back(s.id + ".meta.json");
    } catch (...) {
      errors[i] = std::current_exception();
      s.error = message_of(errors[i]);
      s.exit_code = exit_code_of(errors[i]);
      s.outputs.clear();
      if (!options.keep_going) stop = true;
    }
  });

  if (!options.keep_going)
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

  nlohmann::json manifest{{"config_hash", config.hash()}, {"config", config.to_ini()}, {"master_seed", config.seed}};

  if (vec.kind == VectorizationConfig::Kind::SlicedWasserstein) {
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < count; ++i)
      if (!errors[i]) ok.push_back(i);
    if (!ok.empty()) {
      const auto cfg = SWConfig::sample(config.parameters(), vec.directions, vec.sigma, config.seed);
      std::vector<std::string> ids;
      for (auto i : ok) ids.push_back(report.samples[i].id);
      const auto& labels = measures[ok.front()].labels;
      for (std::size_t b = 0; b < labels.size(); ++b) {
        std::vector<SignedMeasure> family;
        for (auto i : ok) family.push_back(rescale(measures[i].measures[b], config.scales));
        const auto gram = sw_gram(family, cfg, options.threads);
        const std::string name = "gram_" + labels[b] + ".csv";
        io::write_file_atomic(out / name, io::gram_to_csv(gram, ids));
        report.shared_outputs.push_back(name);
      }
      manifest["sliced_wasserstein"] = {{"directions", vec.directions}, {"sigma", vec.sigma},
                                        {"direction_seed", config.seed}};
    }
  }

  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : report.samples) {
    nlohmann::json j{{"id", s.id}, {"input", s.input.string()}, {"seed", s.seed}};
    if (s.error.empty())
      j["outputs"] = s.outputs;
    else
      j["error"] = s.error;
    samples.push_back(j);
  }
  manifest["samples"] = samples;
  manifest["shared_outputs"] = report.shared_outputs;
  io::write_file_atomic(out / "manifest.json", manifest.dump(1) + "\n");
  return report;
}

BenchWorkload bench_workload(int points, double max_edge_length, double codensity_radius, int resolution,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(static_cast<std::size_t>(points) * 2);
  for (double& c : coords) c = unit(rng);
  const PointCloud cloud(2, std::move(coords));
  auto codensity = neighbour_codensity(cloud, codensity_radius);
  for (double& v : codensity) v = -v;
  auto complex = build_function_rips(cloud, codensity, max_edge_length, 2);
  auto grid = make_grid(complex, resolution, 0.01);
  return {std::move(complex), std::move(grid), {0, 1}};
}

std::vector<BenchTiming> bench_hilbert(const BenchWorkload& workload, const std::vector<int>& thread_counts) {
  std::vector<BenchTiming> out;
  for (int t : thread_counts) {
    HilbertOptions opts;
    opts.threads = t;
    const auto start = std::chrono::steady_clock::now();
    const auto h = hilbert_function(workload.complex, workload.degrees, workload.grid, FieldSpec(11), opts);
    std::size_t atoms = 0;
    for (int d : workload.degrees) atoms += hilbert_signed_measure(h, d).size();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out.push_back({t, elapsed.count(), atoms});
  }
  return out;
}

}  // namespace mpsm
