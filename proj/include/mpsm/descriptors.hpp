#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mpsm/simplicial.hpp"

namespace mpsm {

enum class ClosenessConvention { Standard, Harmonic };

struct ClosenessResult {
  std::vector<double> values;
  ClosenessConvention convention = ClosenessConvention::Standard;
};

std::vector<double> degree(const AttributedGraph& graph);

/// (N-1)/sum of distances on connected graphs; on disconnected graphs the
/// harmonic variant (sum of reciprocal distances) so no value is infinite.
ClosenessResult closeness(const AttributedGraph& graph);

/// hks_t(v) = sum_i exp(-lambda_i t) phi_i(v)^2 over the eigenpairs of the
/// unnormalized Laplacian, with the null space (constant vectors on each
/// component) left out.
std::vector<double> heat_kernel_signature(const AttributedGraph& graph, double t);

/// Negated Gaussian kernel density estimate; dense regions get small values.
std::vector<double> kde_codensity(const PointCloud& cloud, double bandwidth);

/// Mean distance to the ceil(mass*N) nearest neighbours, the point itself included.
std::vector<double> distance_to_measure(const PointCloud& cloud, double mass);

/// Minus the number of other points within `radius`.
std::vector<double> neighbour_codensity(const PointCloud& cloud, double radius);

struct DescriptorSpec {
  enum class Kind { Degree, Closeness, HeatKernel, KdeCodensity, Dtm, CoDegree };
  Kind kind = Kind::Degree;
  double parameter = 0.0;  // t, bandwidth, mass or radius

  /// "degree", "closeness", "hks:10", "kde:0.1", "dtm:0.1", "codegree:0.2".
  static DescriptorSpec parse(const std::string& text);
  std::string to_string() const;
  bool needs_graph() const { return kind == Kind::Degree || kind == Kind::Closeness || kind == Kind::HeatKernel; }
};

struct DescriptorResult {
  std::vector<double> values;
  std::string note;  // convention actually applied, recorded in metadata
};

using DescriptorInput = std::variant<PointCloud, AttributedGraph>;

DescriptorResult vertex_descriptor(const DescriptorInput& input, const DescriptorSpec& spec);

}  // namespace mpsm
