#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpsm/simplicial.hpp"

namespace mpsm::detail {

/// Facets of every simplex as global indices (facet j drops vertex j, so its
/// boundary coefficient is (-1)^j), plus a per-dimension lexicographic rank
/// used to break ties deterministically.
struct BoundaryTable {
  std::vector<int> dims;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> faces;
  std::vector<std::uint32_t> lex_rank;

  static BoundaryTable build(const FilteredComplex& complex);
  std::span<const std::uint32_t> facets(std::size_t i) const {
    return {faces.data() + offsets[i], faces.data() + offsets[i + 1]};
  }
};

/// Standard left-to-right column reduction over Z/pZ with clearing. The
/// filtration is given as an ordered list of global simplex indices in
/// which every face precedes its cofaces. Results are indexed by position
/// in that list.
class Reducer {
 public:
  explicit Reducer(std::uint32_t p);

  /// Reduces the boundary columns of dimensions max_degree+1 down to
  /// max(min_degree, 1).
  void run(const BoundaryTable& table, std::span<const std::uint32_t> order, int min_degree,
           int max_degree);

  /// Position of the column whose pivot is `pos`, or -1.
  std::int32_t killer(std::size_t pos) const { return killer_[pos]; }
  /// True when the simplex at `pos` creates a homology class.
  bool positive(std::size_t pos) const { return positive_[pos] != 0; }

 private:
  struct Entry {
    std::uint32_t row;
    std::uint32_t coeff;
  };
  using Column = std::vector<Entry>;

  void add_scaled(Column& target, const Column& source, std::uint32_t factor);
  std::uint32_t inverse(std::uint32_t a) const;

  std::uint32_t p_;
  std::vector<std::uint32_t> inverse_table_;
  std::vector<std::int32_t> position_of_;  // global index -> position, -1 when absent
  std::vector<std::int32_t> killer_;
  std::vector<std::uint8_t> positive_;
  std::vector<std::int32_t> pivot_owner_;
  std::vector<Column> reduced_;
  Column work_, scratch_;
};

}  // namespace mpsm::detail
