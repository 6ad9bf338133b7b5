#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpsm/descriptors.hpp"
#include "mpsm/homology.hpp"
#include "mpsm/transport.hpp"

namespace mpsm {

struct FiltrationConfig {
  enum class Kind { Rips, FunctionRips, LowerStar };
  Kind kind = Kind::FunctionRips;
  double max_edge_length = kInfinity;
  /// Largest simplex dimension; 0 means max(degrees) + 1.
  int max_dim = 0;
  /// Function-Rips vertex function.
  std::string descriptor = "kde:0.1";
  /// Lower-star axes: attribute columns or graph descriptor names.
  std::vector<std::string> attributes;
  friend bool operator==(const FiltrationConfig&, const FiltrationConfig&) = default;
};

struct HomologyConfig {
  std::vector<int> degrees{0, 1};
  std::uint32_t field = 11;
  friend bool operator==(const HomologyConfig&, const HomologyConfig&) = default;
};

struct GridConfig {
  int resolution = 20;
  double beta = 0.01;
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct MeasureConfig {
  enum class Kind { Hilbert, Euler };
  Kind kind = Kind::Hilbert;
  friend bool operator==(const MeasureConfig&, const MeasureConfig&) = default;
};

struct VectorizationConfig {
  enum class Kind { None, Convolution, SlicedWasserstein };
  Kind kind = Kind::Convolution;
  /// Gaussian standard deviations per axis; empty selects five grid spacings.
  std::vector<double> bandwidths;
  int directions = 50;
  double sigma = 1.0;
  friend bool operator==(const VectorizationConfig&, const VectorizationConfig&) = default;
};

struct PipelineConfig {
  FiltrationConfig filtration;
  HomologyConfig homology;
  GridConfig grid;
  MeasureConfig measure;
  VectorizationConfig vectorization;
  /// Per-axis rescaling of the parameter space; empty means 1 on every axis.
  std::vector<double> scales;
  std::uint64_t seed = 0;

  /// Number of filtration parameters the configuration produces.
  int parameters() const;
  int max_dimension() const;

  /// Throws std::invalid_argument describing the first invalid field.
  void validate() const;

  /// key = value document with [section] headers.
  std::string to_ini() const;
  static PipelineConfig from_ini(const std::string& text);
  static PipelineConfig load(const std::string& path);

  /// Hex SHA-256 of to_ini().
  std::string hash() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

std::string to_string(FiltrationConfig::Kind kind);
std::string to_string(MeasureConfig::Kind kind);
std::string to_string(VectorizationConfig::Kind kind);

}  // namespace mpsm
