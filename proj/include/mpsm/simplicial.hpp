#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mpsm {

using Vertex = std::int32_t;

/// A simplex stored by its strictly increasing vertex list.
class Simplex {
 public:
  Simplex() = default;
  /// Sorts the vertices; throws std::invalid_argument on an empty list,
  /// duplicates or negative identifiers.
  explicit Simplex(std::vector<Vertex> vertices);
  Simplex(std::initializer_list<Vertex> vertices)
      : Simplex(std::vector<Vertex>(vertices)) {}

  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }

  /// Codimension-one face obtained by removing the i-th vertex.
  Simplex facet(std::size_t i) const;

  std::string to_string() const;

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) {
    return a.vertices_ <=> b.vertices_;
  }

 private:
  std::vector<Vertex> vertices_;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

/// Where the spread of an axis lives when choosing grid percentiles.
/// Lower-star style axes use vertex values; the Rips diameter axis is zero on
/// every vertex, so its percentiles are taken over all simplices.
enum class PercentileSource { Vertices, AllSimplices };

/// A simplicial complex with a monotone map to R^n. Values are stored
/// row-major, one row of `parameters` coordinates per simplex.
class FilteredComplex {
 public:
  FilteredComplex() = default;
  explicit FilteredComplex(int parameters, int vertex_count = 0);

  int parameters() const { return parameters_; }
  int vertex_count() const { return vertex_count_; }
  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }
  int max_dimension() const;

  const Simplex& simplex(std::size_t i) const { return simplices_[i]; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  std::span<const double> value(std::size_t i) const {
    return {values_.data() + i * parameters_, static_cast<std::size_t>(parameters_)};
  }
  const std::vector<double>& values() const { return values_; }

  /// Appends without checks; call validate_complex() to audit the result.
  void add(Simplex s, std::span<const double> value);
  void add(Simplex s, std::initializer_list<double> value) {
    add(std::move(s), std::span<const double>(value.begin(), value.size()));
  }

  /// Sorts simplices by (dimension, filtration value, vertices).
  void canonicalize();

  PercentileSource percentile_source(int axis) const;
  void set_percentile_source(int axis, PercentileSource source);

 private:
  int parameters_ = 1;
  int vertex_count_ = 0;
  std::vector<Simplex> simplices_;
  std::vector<double> values_;
  std::vector<PercentileSource> sources_;
};

class PointCloud {
 public:
  PointCloud() = default;
  /// `coords` holds size*dimension values, row-major.
  PointCloud(int dimension, std::vector<double> coords);
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  int dimension() const { return dimension_; }
  std::size_t size() const { return dimension_ == 0 ? 0 : coords_.size() / dimension_; }
  bool empty() const { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dimension_, static_cast<std::size_t>(dimension_)};
  }
  double distance(std::size_t i, std::size_t j) const;

 private:
  int dimension_ = 0;
  std::vector<double> coords_;
};

struct NamedAttribute {
  std::string name;
  std::vector<double> values;
};

/// Simple undirected graph on vertices 0..vertex_count-1 with named
/// per-vertex real attributes. `labels` maps dense ids back to the external
/// identifiers found in the input files.
struct AttributedGraph {
  int vertex_count = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<NamedAttribute> attributes;
  std::vector<std::string> labels;

  const NamedAttribute* find_attribute(const std::string& name) const;
  std::vector<std::vector<Vertex>> adjacency() const;
  /// Throws std::invalid_argument on out-of-range endpoints, self-loops,
  /// duplicate edges or attributes of the wrong length.
  void check() const;
};

FilteredComplex build_rips(const PointCloud& cloud, double max_edge_length, int max_dim);

FilteredComplex build_function_rips(const PointCloud& cloud,
                                    std::span<const double> vertex_values,
                                    double max_edge_length, int max_dim);

FilteredComplex lower_star_multifiltration(const AttributedGraph& graph,
                                           const std::vector<std::string>& attribute_names);

/// Lower-star bifiltration of the graph's 1-skeleton from explicit per-axis
/// vertex functions (axes[j][v]).
FilteredComplex lower_star(const AttributedGraph& graph,
                           const std::vector<std::vector<double>>& axes);

struct Violation {
  enum class Kind { MissingFace, Monotonicity, Duplicate, BadValue, BadVertex };
  Kind kind;
  std::size_t simplex = 0;
  Simplex face;
  int axis = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_complex(const FilteredComplex& complex);

}  // namespace mpsm
