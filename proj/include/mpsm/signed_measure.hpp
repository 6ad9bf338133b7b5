#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpsm/homology.hpp"
#include "mpsm/simplicial.hpp"

namespace mpsm {

using Weight = std::int64_t;

/// A finite signed point measure sum_i w_i delta_{x_i} on R^n. Atoms are
/// coalesced (pairwise distinct points, non-zero weights) and sorted
/// lexicographically by coordinates.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(int n) : n_(n) {}
  /// `coords` holds weights.size()*n values; coincident points are merged
  /// and zero weights dropped.
  SignedMeasure(int n, std::vector<double> coords, std::vector<Weight> weights);

  int dimension() const { return n_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * n_, static_cast<std::size_t>(n_)};
  }
  Weight weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<Weight>& weights() const { return weights_; }
  Weight total_mass() const;
  /// Sum of |w_i|.
  Weight total_variation() const;

  /// Weight of the atom at `x`, zero when absent.
  Weight weight_at(std::span<const double> x) const;

  SignedMeasure operator-() const;
  friend SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b);
  friend SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b);
  /// Integer multiple.
  friend SignedMeasure operator*(Weight c, const SignedMeasure& a);

  /// Positive and negative parts of the Jordan decomposition.
  SignedMeasure positive_part() const;
  SignedMeasure negative_part() const;

  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 private:
  int n_ = 0;
  std::vector<double> coords_;
  std::vector<Weight> weights_;
};

/// Mobius inversion of the padded Hilbert function: the weight at grid
/// point x is sum over eps in {0,1}^n of (-1)^|eps| dim(x - eps). Atoms sit
/// at grid coordinates; total mass is zero because the padding is zero.
SignedMeasure hilbert_signed_measure(const HilbertFunction& hilbert, int degree);

/// sum over simplices of (-1)^dim delta at the grid point dominating f(tau),
/// closed to zero mass on the padding faces so that it coincides with the
/// alternating sum of the padded Hilbert measures.
SignedMeasure euler_signed_measure(const FilteredComplex& complex, const GridSpec& grid);

/// Atoms with no coordinate on a padding value of `grid`.
SignedMeasure interior_part(const SignedMeasure& mu, const GridSpec& grid);

/// Sum of the weights of the atoms y with y <= x componentwise.
Weight cumulative_at(const SignedMeasure& mu, std::span<const double> x);

/// +1 at every birth, -1 at every finite death and -1 at `horizon` for each
/// infinite bar. Throws std::invalid_argument unless horizon exceeds every
/// finite endpoint.
SignedMeasure barcode_to_signed_measure(const Barcode& barcode, double horizon);

}  // namespace mpsm
