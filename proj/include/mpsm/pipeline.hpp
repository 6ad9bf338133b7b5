#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpsm/config.hpp"
#include "mpsm/homology.hpp"
#include "mpsm/signed_measure.hpp"
#include "mpsm/simplicial.hpp"

namespace mpsm {

namespace fs = std::filesystem;

/// splitmix64 finalizer applied to master + (index + 1) * golden gamma.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Filtered complex of one input file under the configuration. Point clouds
/// (rips, function-rips) are CSV files; graphs (lower-star) are edge lists
/// whose attributes live in `<stem>.attrs.csv` beside them when present.
struct SampleComplex {
  FilteredComplex complex;
  std::string note;  // descriptor convention actually used
};
SampleComplex build_sample_complex(const fs::path& input, const PipelineConfig& config);

/// Signed measures of one complex: one per configured degree for the
/// Hilbert measure, a single one for the Euler measure.
struct SampleMeasures {
  GridSpec grid;
  std::vector<std::string> labels;  // "h0", "h1", ... or "euler"
  std::vector<SignedMeasure> measures;
};
SampleMeasures compute_measures(const FilteredComplex& complex, const PipelineConfig& config, int threads = 1);

struct SampleOutcome {
  std::string id;
  fs::path input;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::string error;                 // empty on success
  int exit_code = 0;                 // 2 for input errors, 3 for numeric ones
};

struct PipelineOptions {
  int threads = 1;
  bool keep_going = false;
};

struct PipelineReport {
  std::vector<SampleOutcome> samples;
  std::vector<std::string> shared_outputs;  // Gram matrices
  int failures() const;
  /// Exit code of the first failed sample, 0 when none failed.
  int exit_code() const;
};

/// Processes every input, writing per-sample features (or measures) with a
/// metadata sidecar, shared Gram matrices for the sliced Wasserstein kernel,
/// and finally manifest.json. Without keep_going the first failing sample's
/// exception propagates after the workers join and no manifest is written.
PipelineReport run_pipeline(const std::vector<fs::path>& inputs, const PipelineConfig& config,
                            const fs::path& out, const PipelineOptions& options = {});

/// Uniform random cloud in the unit square with a function-Rips bifiltration
/// by neighbour codensity, as used for timing the fiber sweep.
struct BenchWorkload {
  FilteredComplex complex;
  GridSpec grid;
  std::vector<int> degrees;
};
BenchWorkload bench_workload(int points, double max_edge_length, double codensity_radius, int resolution,
                             std::uint64_t seed);

struct BenchTiming {
  int threads = 1;
  double seconds = 0.0;
  std::size_t atoms = 0;
};
/// Hilbert measures of the workload's degrees, timed end to end per thread count.
std::vector<BenchTiming> bench_hilbert(const BenchWorkload& workload, const std::vector<int>& thread_counts);

// Random-walk stability experiment on a fixed graph.

struct StabilityOptions {
  int directions = 50;
  double sigma = 1.0;
  double bandwidth = 0.0;  // <= 0 selects five image-grid spacings
  int image_resolution = 50;
  bool euler = false;
  std::uint64_t seed = 0;
};

struct StabilityRow {
  int walk = 0;
  int i = 0;
  int j = 0;
  double l1 = 0.0;  // sum over simplices of |f(tau) - g(tau)|_1
  double kr1 = 0.0;
  double sw_distance = 0.0;  // sqrt(2 - 2 exp(-SW))
  double conv_l2 = 0.0;
  double euler_kr1 = 0.0;
  bool hilbert_ok() const { return kr1 <= 2 * l1 + 1e-9; }
  bool euler_ok() const { return euler_kr1 <= l1 + 1e-9; }
};

struct StabilityTable {
  bool euler = false;
  std::vector<StabilityRow> rows;
  std::size_t hilbert_violations() const;
  std::size_t euler_violations() const;
  std::string to_csv() const;
};

/// Rows for every pair of the given vertex functions (functions[s][axis][v],
/// two axes) on the lower-star bifiltration of `graph`. Measures are exact:
/// the grid holds every value the walk takes, and atoms on the padding faces
/// are dropped so the measures are those of the modules themselves.
std::vector<StabilityRow> stability_rows(const AttributedGraph& graph,
                                         const std::vector<std::vector<std::vector<double>>>& functions,
                                         int walk, const StabilityOptions& options);

/// `walks` random walks of `steps` functions each: constant start, then
/// independent uniform noise in [-noise, noise] per vertex and axis per step.
StabilityTable stability_experiment(const AttributedGraph& graph, int steps, int walks, double noise,
                                    const StabilityOptions& options);

}  // namespace mpsm
