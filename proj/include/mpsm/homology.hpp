#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mpsm/simplicial.hpp"

namespace mpsm {

/// Coefficients in Z/pZ.
class FieldSpec {
 public:
  /// Throws std::invalid_argument unless p is a prime below 2^31.
  explicit FieldSpec(std::uint32_t p = 11);
  std::uint32_t p() const { return p_; }

 private:
  std::uint32_t p_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Bar {
  double birth;
  double death;  // kInfinity for essential classes
  bool contains(double x) const { return birth <= x && x < death; }
  friend bool operator==(const Bar&, const Bar&) = default;
};

struct Barcode {
  int degree = 0;
  std::vector<Bar> bars;  // birth < death, sorted by (birth, death)
  /// Number of bars [s, t) with s <= x < t.
  int rank_at(double x) const;
};

/// A finite grid r_0 < ... < r_{k-1} per axis, followed by one padding value
/// r_k = 1.1 (r_{k-1} - r_0) + r_0 on which every module is set to zero.
class GridSpec {
 public:
  GridSpec() = default;
  /// `axes[j]` holds the strictly increasing non-padding values of axis j;
  /// the padding value is appended.
  static GridSpec from_axes(std::vector<std::vector<double>> axes, double beta = 0.0);

  int parameters() const { return static_cast<int>(axes_.size()); }
  /// Number of non-padding values on `axis`.
  int resolution(int axis) const { return static_cast<int>(axes_[axis].size()) - 1; }
  double value(int axis, int index) const { return axes_[axis][index]; }
  double padding(int axis) const { return axes_[axis].back(); }
  /// All k+1 values of `axis`, padding included.
  std::span<const double> axis(int axis) const { return axes_[axis]; }
  double beta() const { return beta_; }

  /// Extent per axis including padding: (k_j + 1).
  std::vector<int> shape() const;
  std::size_t point_count() const;
  /// Index of the smallest non-padding grid value >= v, or resolution(axis)
  /// (the padding index) when v exceeds r_{k-1}.
  int snap(int axis, double v) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<std::vector<double>> axes_;
  double beta_ = 0.0;
};

/// Linear interpolation between order statistics at position q (N-1).
double percentile(std::vector<double> values, double q);

/// k uniformly spaced values per axis between the beta and 1-beta
/// percentiles of the axis's percentile source, plus the padding value.
/// Degenerate axes get the span [c - 0.5, c + 0.5].
GridSpec make_grid(const FilteredComplex& complex, int k, double beta);

/// Barcode of H_degree along the line b -> (fiber; b): a simplex enters at
/// its last coordinate if its first n-1 coordinates are <= the fiber's grid
/// values, and never otherwise.
Barcode fiber_barcode(const FilteredComplex& complex, const GridSpec& grid,
                      std::span<const int> fiber, int degree, const FieldSpec& field);

/// dim H_i sampled on the padded grid, one row-major array per degree
/// (axis 0 slowest). Entries with a padding index are zero.
class HilbertFunction {
 public:
  HilbertFunction() = default;
  HilbertFunction(GridSpec grid, std::vector<int> degrees);

  const GridSpec& grid() const { return grid_; }
  const std::vector<int>& degrees() const { return degrees_; }
  bool has_degree(int degree) const;
  /// Throws std::invalid_argument for a degree that was not computed.
  std::span<const std::int32_t> values(int degree) const;
  std::span<std::int32_t> values(int degree);
  std::int32_t at(int degree, std::span<const int> index) const;
  std::size_t flat_index(std::span<const int> index) const;

  friend bool operator==(const HilbertFunction&, const HilbertFunction&) = default;

 private:
  std::size_t slot(int degree) const;
  GridSpec grid_;
  std::vector<int> degrees_;
  std::vector<std::vector<std::int32_t>> values_;
};

struct HilbertOptions {
  int threads = 1;
  /// Axis swept by the one-parameter reductions; -1 means the last axis.
  int sweep_axis = -1;
};

HilbertFunction hilbert_function(const FilteredComplex& complex, std::span<const int> degrees,
                                 const GridSpec& grid, const FieldSpec& field,
                                 const HilbertOptions& options = {});

}  // namespace mpsm
