#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mpsm/config.hpp"
#include "mpsm/descriptors.hpp"
#include "mpsm/error.hpp"
#include "mpsm/homology.hpp"
#include "mpsm/io.hpp"
#include "mpsm/pipeline.hpp"
#include "mpsm/signed_measure.hpp"
#include "mpsm/simplicial.hpp"
#include "mpsm/transport.hpp"

namespace {

using namespace mpsm;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool keep_going = false;
  std::string out;
};

PipelineConfig load_config(const Globals& g) {
  PipelineConfig c = g.config.empty() ? PipelineConfig{} : PipelineConfig::load(g.config);
  if (g.seed) c.seed = *g.seed;
  return c;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    io::write_file_atomic(g.out, text);
  }
}

std::string complex_document(const FilteredComplex& c) {
  const auto report = validate_complex(c);
  if (!report.ok()) throw NumericError("constructed complex is invalid:\n" + report.to_string());
  return io::complex_to_json(c).dump(1) + "\n";
}

template <class T>
void override_if(const CLI::Option* opt, T& target, const T& value) {
  if (opt->count() > 0) target = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed-measure features of multiparameter persistence"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Pipeline configuration (key = value with [sections])")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed; overrides the configuration");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--keep-going", g.keep_going, "Continue past samples that fail");
  app.add_option("--out", g.out, "Output file or directory");

  std::string input;
  double max_edge = kInfinity;
  int max_dim = 2;

  auto* rips = app.add_subcommand("rips", "Rips complex of a point-cloud CSV, as JSON");
  rips->add_option("input", input, "Point cloud CSV")->required();
  rips->add_option("--max-edge-length", max_edge, "Largest edge length");
  rips->add_option("--max-dim", max_dim, "Largest simplex dimension")->check(CLI::NonNegativeNumber);

  std::string descriptor = "kde:0.1";
  auto* frips = app.add_subcommand("function-rips", "Function-Rips bifiltration of a point cloud, as JSON");
  frips->add_option("input", input, "Point cloud CSV")->required();
  frips->add_option("--descriptor", descriptor, "Codensity: kde:<bandwidth>, dtm:<mass> or codegree:<radius>");
  frips->add_option("--max-edge-length", max_edge, "Largest edge length");
  frips->add_option("--max-dim", max_dim, "Largest simplex dimension")->check(CLI::NonNegativeNumber);

  std::string attributes_file;
  std::vector<std::string> axes;
  auto* graph = app.add_subcommand("graph", "Lower-star multifiltration of an attributed graph, as JSON");
  graph->add_option("input", input, "Edge list")->required();
  graph->add_option("--attributes", attributes_file, "Attribute CSV with a header row")->check(CLI::ExistingFile);
  graph->add_option("--axes", axes, "Attribute columns or descriptors (degree, closeness, hks:<t>)")
      ->delimiter(',')
      ->required();

  std::string kind = "hilbert";
  int degree = 0, resolution = 20;
  double beta = 0.01;
  std::uint32_t field = 11;
  auto* measure = app.add_subcommand("measure", "Signed measure of a complex JSON document");
  measure->add_option("input", input, "Complex JSON")->required();
  auto* o_kind = measure->add_option("--kind", kind, "hilbert or euler")->check(CLI::IsMember({"hilbert", "euler"}));
  measure->add_option("--degree", degree, "Homology degree")->check(CLI::NonNegativeNumber);
  auto* o_res = measure->add_option("--resolution", resolution, "Grid values per axis");
  auto* o_beta = measure->add_option("--beta", beta, "Percentile clip fraction");
  auto* o_field = measure->add_option("--field", field, "Prime coefficient field");

  std::vector<std::string> inputs;
  auto* featurize = app.add_subcommand("featurize", "Run the configured pipeline over input files");
  featurize->add_option("inputs", inputs, "Point-cloud CSVs or edge lists")->required();

  std::string metric = "kr", norm = "1";
  int directions = 50;
  double sigma = 1.0;
  auto* distance = app.add_subcommand("distance", "Distance between two measure files");
  distance->add_option("inputs", inputs, "Two measure JSON files")->required()->expected(2);
  distance->add_option("--metric", metric, "kr or sw")->check(CLI::IsMember({"kr", "sw"}));
  distance->add_option("--p", norm, "Ground norm for kr: 1, 2 or inf")->check(CLI::IsMember({"1", "2", "inf"}));
  auto* o_dir_d = distance->add_option("--directions", directions, "Slicing directions")->check(CLI::PositiveNumber);
  auto* o_sig_d = distance->add_option("--sigma", sigma, "Slicing scale")->check(CLI::PositiveNumber);

  auto* gram = app.add_subcommand("gram", "Sliced Wasserstein kernel matrix of measure files, as CSV");
  gram->add_option("inputs", inputs, "Measure JSON files")->required();
  auto* o_dir_g = gram->add_option("--directions", directions, "Slicing directions")->check(CLI::PositiveNumber);
  auto* o_sig_g = gram->add_option("--sigma", sigma, "Slicing scale")->check(CLI::PositiveNumber);

  int steps = 11, walks = 10;
  double noise = 0.1;
  bool euler = false;
  auto* stability = app.add_subcommand("stability", "Random-walk stability table of a graph, as CSV");
  stability->add_option("input", input, "Edge list")->required();
  stability->add_option("--steps", steps, "Functions per walk")->check(CLI::Range(2, 1 << 20));
  stability->add_option("--walks", walks, "Number of walks")->check(CLI::PositiveNumber);
  stability->add_option("--noise", noise, "Uniform step half-width")->check(CLI::PositiveNumber);
  stability->add_flag("--euler", euler, "Also compare Euler measures");
  stability->add_option("--directions", directions, "Slicing directions")->check(CLI::PositiveNumber);
  stability->add_option("--sigma", sigma, "Slicing scale")->check(CLI::PositiveNumber);

  int points = 100;
  double radius = 0.2;
  std::vector<int> thread_counts{1, 4};
  int bench_resolution = 50;
  auto* bench = app.add_subcommand("bench", "Time the Hilbert measure of a random function-Rips bifiltration");
  bench->add_option("--points", points, "Cloud size")->check(CLI::PositiveNumber);
  bench->add_option("--max-edge-length", max_edge, "Rips threshold");
  bench->add_option("--radius", radius, "Codensity neighbourhood radius")->check(CLI::PositiveNumber);
  bench->add_option("--resolution", bench_resolution, "Grid values per axis");
  bench->add_option("--thread-counts", thread_counts, "Thread counts to time")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const PipelineConfig config = load_config(g);

    if (rips->parsed()) {
      emit(g, complex_document(build_rips(io::read_point_cloud(input), max_edge, max_dim)));
    } else if (frips->parsed()) {
      const auto cloud = io::read_point_cloud(input);
      auto codensity = vertex_descriptor(cloud, DescriptorSpec::parse(descriptor)).values;
      for (double& v : codensity) v = -v;
      emit(g, complex_document(build_function_rips(cloud, codensity, max_edge, max_dim)));
    } else if (graph->parsed()) {
      const auto gr = io::read_graph(input, attributes_file.empty() ? std::nullopt
                                                                     : std::optional<io::fs::path>(attributes_file));
      std::vector<std::vector<double>> values;
      for (const auto& name : axes) {
        if (const auto* a = gr.find_attribute(name))
          values.push_back(a->values);
        else
          values.push_back(vertex_descriptor(gr, DescriptorSpec::parse(name)).values);
      }
      emit(g, complex_document(lower_star(gr, values)));
    } else if (measure->parsed()) {
      const auto complex = io::complex_from_json(io::read_json(input));
      const auto report = validate_complex(complex);
      if (!report.ok()) throw InputError(input + ": " + report.to_string());
      int k = config.grid.resolution;
      double b = config.grid.beta;
      std::uint32_t p = config.homology.field;
      std::string which = to_string(config.measure.kind);
      override_if(o_res, k, resolution);
      override_if(o_beta, b, beta);
      override_if(o_field, p, field);
      override_if(o_kind, which, kind);
      const auto grid = make_grid(complex, k, b);
      SignedMeasure mu;
      if (which == "euler") {
        mu = euler_signed_measure(complex, grid);
      } else {
        const int degrees[] = {degree};
        mu = hilbert_signed_measure(hilbert_function(complex, degrees, grid, FieldSpec(p), {g.threads, -1}), degree);
      }
      emit(g, io::measure_to_json(mu).dump(1) + "\n");
    } else if (featurize->parsed()) {
      std::vector<io::fs::path> paths(inputs.begin(), inputs.end());
      const auto report = run_pipeline(paths, config, g.out.empty() ? "out" : g.out, {g.threads, g.keep_going});
      for (const auto& s : report.samples)
        if (!s.error.empty()) std::cerr << "error: " << s.error << "\n";
      return report.exit_code();
    } else if (distance->parsed()) {
      const auto a = io::measure_from_json(io::read_json(inputs[0]));
      const auto b = io::measure_from_json(io::read_json(inputs[1]));
      double d = 0;
      if (metric == "kr") {
        d = kr_distance(a, b, parse_ground_norm(norm));
      } else {
        int dirs = config.vectorization.directions;
        double s = config.vectorization.sigma;
        override_if(o_dir_d, dirs, directions);
        override_if(o_sig_d, s, sigma);
        d = sliced_wasserstein(a, b, SWConfig::sample(std::max(a.dimension(), b.dimension()), dirs, s, config.seed));
      }
      emit(g, io::format_double(d) + "\n");
    } else if (gram->parsed()) {
      std::vector<SignedMeasure> family;
      std::vector<std::string> ids;
      for (const auto& path : inputs) {
        family.push_back(io::measure_from_json(io::read_json(path)));
        ids.push_back(io::fs::path(path).stem().string());
      }
      int dirs = config.vectorization.directions;
      double s = config.vectorization.sigma;
      override_if(o_dir_g, dirs, directions);
      override_if(o_sig_g, s, sigma);
      int n = 0;
      for (const auto& mu : family) n = std::max(n, mu.dimension());
      emit(g, io::gram_to_csv(sw_gram(family, SWConfig::sample(n, dirs, s, config.seed), g.threads), ids));
    } else if (stability->parsed()) {
      const auto gr = io::read_graph(input, std::nullopt);
      StabilityOptions opts;
      opts.directions = directions;
      opts.sigma = sigma;
      opts.euler = euler;
      opts.seed = config.seed;
      const auto table = stability_experiment(gr, steps, walks, noise, opts);
      emit(g, table.to_csv());
      std::cerr << table.rows.size() << " pairs, " << table.hilbert_violations() << " hilbert bound violations";
      if (euler) std::cerr << ", " << table.euler_violations() << " euler bound violations";
      std::cerr << "\n";
      if (table.hilbert_violations() + table.euler_violations() > 0) return 3;
    } else if (bench->parsed()) {
      const auto w = bench_workload(points, max_edge, radius, bench_resolution, config.seed);
      std::ostringstream os;
      os << "simplices " << w.complex.size() << "\n";
      const auto timings = bench_hilbert(w, thread_counts);
      for (const auto& t : timings)
        os << "threads " << t.threads << " seconds " << t.seconds << " atoms " << t.atoms
           << " speedup " << timings.front().seconds / t.seconds << "\n";
      emit(g, os.str());
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
