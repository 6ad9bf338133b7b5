#include "mpsm/signed_measure.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mpsm {

SignedMeasure::SignedMeasure(int n, std::vector<double> coords, std::vector<Weight> weights) : n_(n) {
  if (n < 1) throw std::invalid_argument("measure dimension must be at least 1");
  if (coords.size() != weights.size() * static_cast<std::size_t>(n))
    throw std::invalid_argument("coordinate count does not match atom count");
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(coords.begin() + a * n, coords.begin() + (a + 1) * n,
                                        coords.begin() + b * n, coords.begin() + (b + 1) * n);
  };
  auto same = [&](std::size_t a, std::size_t b) {
    return std::equal(coords.begin() + a * n, coords.begin() + (a + 1) * n, coords.begin() + b * n);
  };
  std::stable_sort(order.begin(), order.end(), less);
  for (std::size_t i = 0; i < order.size();) {
    Weight w = 0;
    std::size_t j = i;
    for (; j < order.size() && same(order[i], order[j]); ++j) w += weights[order[j]];
    if (w != 0) {
      coords_.insert(coords_.end(), coords.begin() + order[i] * n, coords.begin() + (order[i] + 1) * n);
      weights_.push_back(w);
    }
    i = j;
  }
}

Weight SignedMeasure::total_mass() const { return std::accumulate(weights_.begin(), weights_.end(), Weight{0}); }

Weight SignedMeasure::total_variation() const {
  Weight s = 0;
  for (auto w : weights_) s += w < 0 ? -w : w;
  return s;
}

Weight SignedMeasure::weight_at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point has wrong dimension");
  for (std::size_t i = 0; i < size(); ++i)
    if (std::equal(x.begin(), x.end(), point(i).begin())) return weights_[i];
  return 0;
}

SignedMeasure SignedMeasure::operator-() const {
  SignedMeasure m = *this;
  for (auto& w : m.weights_) w = -w;
  return m;
}

SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b) {
  if (a.empty() && a.n_ == 0) return b;
  if (b.empty() && b.n_ == 0) return a;
  if (a.n_ != b.n_) throw std::invalid_argument("measures live in different dimensions");
  std::vector<double> coords = a.coords_;
  coords.insert(coords.end(), b.coords_.begin(), b.coords_.end());
  std::vector<Weight> weights = a.weights_;
  weights.insert(weights.end(), b.weights_.begin(), b.weights_.end());
  return SignedMeasure(a.n_, std::move(coords), std::move(weights));
}

SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b) { return a + (-b); }

SignedMeasure operator*(Weight c, const SignedMeasure& a) {
  if (c == 0) return SignedMeasure(a.n_);
  SignedMeasure m = a;
  for (auto& w : m.weights_) w *= c;
  return m;
}

SignedMeasure SignedMeasure::positive_part() const {
  SignedMeasure m(n_);
  for (std::size_t i = 0; i < size(); ++i)
    if (weights_[i] > 0) {
      m.coords_.insert(m.coords_.end(), point(i).begin(), point(i).end());
      m.weights_.push_back(weights_[i]);
    }
  return m;
}

SignedMeasure SignedMeasure::negative_part() const { return (-*this).positive_part(); }

SignedMeasure hilbert_signed_measure(const HilbertFunction& hilbert, int degree) {
  const auto values = hilbert.values(degree);
  const auto& grid = hilbert.grid();
  const auto shape = grid.shape();
  const int n = grid.parameters();
  std::vector<Weight> w(values.begin(), values.end());
  // One first difference per axis: O(n * |grid|).
  std::size_t inner = 1;
  for (int j = n - 1; j >= 0; --j) {
    const std::size_t extent = static_cast<std::size_t>(shape[j]);
    const std::size_t outer = w.size() / (extent * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t base = o * extent * inner + i;
        for (std::size_t x = extent - 1; x >= 1; --x)
          w[base + x * inner] -= w[base + (x - 1) * inner];
      }
    inner *= extent;
  }
  std::vector<double> coords;
  std::vector<Weight> weights;
  std::vector<int> idx(n);
  for (std::size_t flat = 0; flat < w.size(); ++flat) {
    if (w[flat] == 0) continue;
    std::size_t rest = flat;
    for (int j = n - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(rest % shape[j]);
      rest /= shape[j];
    }
    for (int j = 0; j < n; ++j) coords.push_back(grid.value(j, idx[j]));
    weights.push_back(w[flat]);
  }
  SignedMeasure mu(n, std::move(coords), std::move(weights));
  if (mu.total_mass() != 0) throw std::logic_error("hilbert signed measure has non-zero mass");
  return mu;
}

SignedMeasure euler_signed_measure(const FilteredComplex& complex, const GridSpec& grid) {
  const int n = complex.parameters();
  if (grid.parameters() != n) throw std::invalid_argument("grid and complex disagree on parameter count");
  std::vector<double> coords;
  std::vector<Weight> weights;
  std::vector<int> snapped(n);
  for (std::size_t i = 0; i < complex.size(); ++i) {
    bool inside = true;
    for (int j = 0; j < n; ++j) {
      snapped[j] = grid.snap(j, complex.value(i)[j]);
      inside = inside && snapped[j] < grid.resolution(j);
    }
    // Simplices beyond r_{k-1} on some axis never enter a non-padding
    // sublevel set, so the padded Euler characteristic ignores them.
    if (!inside) continue;
    const Weight sign = complex.simplex(i).dimension() % 2 == 0 ? 1 : -1;
    // Closure onto each subset P of padded axes, with sign (-1)^|P|.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Weight w = sign;
      for (int j = 0; j < n; ++j) {
        const bool padded = (mask >> j) & 1u;
        coords.push_back(padded ? grid.padding(j) : grid.value(j, snapped[j]));
        if (padded) w = -w;
      }
      weights.push_back(w);
    }
  }
  SignedMeasure mu(n, std::move(coords), std::move(weights));
  if (mu.total_mass() != 0) throw std::logic_error("euler signed measure has non-zero mass");
  return mu;
}

SignedMeasure interior_part(const SignedMeasure& mu, const GridSpec& grid) {
  if (mu.empty()) return mu;
  if (mu.dimension() != grid.parameters()) throw std::invalid_argument("measure and grid dimensions differ");
  std::vector<double> coords;
  std::vector<Weight> weights;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto p = mu.point(i);
    bool inside = true;
    for (int j = 0; j < grid.parameters() && inside; ++j) inside = p[j] != grid.padding(j);
    if (!inside) continue;
    coords.insert(coords.end(), p.begin(), p.end());
    weights.push_back(mu.weight(i));
  }
  return SignedMeasure(mu.dimension(), std::move(coords), std::move(weights));
}

Weight cumulative_at(const SignedMeasure& mu, std::span<const double> x) {
  if (mu.empty()) return 0;
  if (static_cast<int>(x.size()) != mu.dimension()) throw std::invalid_argument("point has wrong dimension");
  Weight s = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto p = mu.point(i);
    bool below = true;
    for (std::size_t j = 0; j < x.size() && below; ++j) below = p[j] <= x[j];
    if (below) s += mu.weight(i);
  }
  return s;
}

SignedMeasure barcode_to_signed_measure(const Barcode& barcode, double horizon) {
  std::vector<double> coords;
  std::vector<Weight> weights;
  for (const auto& bar : barcode.bars) {
    const bool finite = bar.death != kInfinity;
    if (!(bar.birth < horizon) || (finite && !(bar.death < horizon)))
      throw std::invalid_argument("horizon must exceed every finite bar endpoint");
    coords.push_back(bar.birth);
    weights.push_back(1);
    coords.push_back(finite ? bar.death : horizon);
    weights.push_back(-1);
  }
  return SignedMeasure(1, std::move(coords), std::move(weights));
}

}  // namespace mpsm
