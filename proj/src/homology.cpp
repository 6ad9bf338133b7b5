#include "mpsm/homology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "reduction.hpp"

namespace mpsm {

FieldSpec::FieldSpec(std::uint32_t p) : p_(p) {
  if (p < 2 || p >= (1u << 31)) throw std::invalid_argument("field modulus must be a prime below 2^31");
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("field modulus " + std::to_string(p) + " is not prime");
}

int Barcode::rank_at(double x) const {
  int r = 0;
  for (const auto& b : bars) r += b.contains(x) ? 1 : 0;
  return r;
}

GridSpec GridSpec::from_axes(std::vector<std::vector<double>> axes, double beta) {
  if (axes.empty()) throw std::invalid_argument("grid needs at least one axis");
  GridSpec g;
  g.beta_ = beta;
  for (auto& a : axes) {
    if (a.empty()) throw std::invalid_argument("grid axis has no values");
    for (double v : a)
      if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!(a[i - 1] < a[i])) throw std::invalid_argument("grid axis values must be strictly increasing");
    const double span = a.back() - a.front();
    a.push_back(span > 0 ? 1.1 * span + a.front() : a.front() + 1.0);
  }
  g.axes_ = std::move(axes);
  return g;
}

std::vector<int> GridSpec::shape() const {
  std::vector<int> s;
  for (const auto& a : axes_) s.push_back(static_cast<int>(a.size()));
  return s;
}

std::size_t GridSpec::point_count() const {
  std::size_t c = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_) c *= a.size();
  return c;
}

int GridSpec::snap(int axis, double v) const {
  const auto& a = axes_[axis];
  const auto end = a.end() - 1;  // exclude padding
  return static_cast<int>(std::lower_bound(a.begin(), end, v) - a.begin());
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty list");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return frac == 0.0 ? values[lo] : values[lo] + frac * (values[hi] - values[lo]);
}

GridSpec make_grid(const FilteredComplex& complex, int k, double beta) {
  if (k < 2) throw std::invalid_argument("grid resolution must be at least 2");
  if (!(beta >= 0 && beta < 0.5)) throw std::invalid_argument("beta must lie in [0, 0.5)");
  std::vector<std::vector<double>> axes;
  for (int j = 0; j < complex.parameters(); ++j) {
    const bool all = complex.percentile_source(j) == PercentileSource::AllSimplices;
    std::vector<double> v;
    for (std::size_t i = 0; i < complex.size(); ++i)
      if (all || complex.simplex(i).dimension() == 0) v.push_back(complex.value(i)[j]);
    if (v.empty()) throw std::invalid_argument("cannot build a grid for a complex without vertices");
    double lo = percentile(v, beta), hi = percentile(v, 1.0 - beta);
    if (!(hi > lo)) {
      const double c = 0.5 * (lo + hi);
      lo = c - 0.5;
      hi = c + 0.5;
    }
    std::vector<double> axis(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) axis[i] = lo + (hi - lo) * i / (k - 1);
    axis.back() = hi;
    axes.push_back(std::move(axis));
  }
  return GridSpec::from_axes(std::move(axes), beta);
}

Barcode fiber_barcode(const FilteredComplex& complex, const GridSpec& grid,
                      std::span<const int> fiber, int degree, const FieldSpec& field) {
  const int n = complex.parameters();
  if (grid.parameters() != n) throw std::invalid_argument("grid and complex disagree on parameter count");
  if (static_cast<int>(fiber.size()) != n - 1)
    throw std::invalid_argument("fiber must have one index per non-swept axis");
  for (int j = 0; j < n - 1; ++j)
    if (fiber[j] < 0 || fiber[j] >= grid.resolution(j)) throw std::out_of_range("fiber index outside grid");
  if (degree < 0) throw std::invalid_argument("negative homology degree");

  Barcode out;
  out.degree = degree;
  if (complex.empty()) return out;
  const auto table = detail::BoundaryTable::build(complex);
  std::vector<std::uint32_t> order;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    if (table.dims[i] > degree + 1) continue;
    bool inside = true;
    for (int j = 0; j < n - 1 && inside; ++j) inside = complex.value(i)[j] <= grid.value(j, fiber[j]);
    if (inside) order.push_back(static_cast<std::uint32_t>(i));
  }
  auto time = [&](std::uint32_t g) { return complex.value(g)[n - 1]; };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (time(a) != time(b)) return time(a) < time(b);
    if (table.dims[a] != table.dims[b]) return table.dims[a] < table.dims[b];
    return table.lex_rank[a] < table.lex_rank[b];
  });

  detail::Reducer reducer(field.p());
  reducer.run(table, order, degree, degree);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (table.dims[order[pos]] != degree || !reducer.positive(pos)) continue;
    const double birth = time(order[pos]);
    const auto k = reducer.killer(pos);
    const double death = k < 0 ? kInfinity : time(order[k]);
    if (birth < death) out.bars.push_back({birth, death});
  }
  std::sort(out.bars.begin(), out.bars.end(), [](const Bar& a, const Bar& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  });
  return out;
}

HilbertFunction::HilbertFunction(GridSpec grid, std::vector<int> degrees)
    : grid_(std::move(grid)), degrees_(std::move(degrees)) {
  std::sort(degrees_.begin(), degrees_.end());
  degrees_.erase(std::unique(degrees_.begin(), degrees_.end()), degrees_.end());
  values_.assign(degrees_.size(), std::vector<std::int32_t>(grid_.point_count(), 0));
}

bool HilbertFunction::has_degree(int degree) const {
  return std::binary_search(degrees_.begin(), degrees_.end(), degree);
}

std::size_t HilbertFunction::slot(int degree) const {
  auto it = std::lower_bound(degrees_.begin(), degrees_.end(), degree);
  if (it == degrees_.end() || *it != degree)
    throw std::invalid_argument("homology degree " + std::to_string(degree) + " was not computed");
  return static_cast<std::size_t>(it - degrees_.begin());
}

std::span<const std::int32_t> HilbertFunction::values(int degree) const { return values_[slot(degree)]; }
std::span<std::int32_t> HilbertFunction::values(int degree) { return values_[slot(degree)]; }

std::size_t HilbertFunction::flat_index(std::span<const int> index) const {
  const auto shape = grid_.shape();
  if (index.size() != shape.size()) throw std::invalid_argument("grid index has wrong arity");
  std::size_t flat = 0;
  for (std::size_t j = 0; j < shape.size(); ++j) {
    if (index[j] < 0 || index[j] >= shape[j]) throw std::out_of_range("grid index outside grid");
    flat = flat * shape[j] + index[j];
  }
  return flat;
}

std::int32_t HilbertFunction::at(int degree, std::span<const int> index) const {
  return values(degree)[flat_index(index)];
}

HilbertFunction hilbert_function(const FilteredComplex& complex, std::span<const int> degrees,
                                 const GridSpec& grid, const FieldSpec& field,
                                 const HilbertOptions& options) {
  const int n = complex.parameters();
  if (grid.parameters() != n) throw std::invalid_argument("grid and complex disagree on parameter count");
  for (int d : degrees)
    if (d < 0) throw std::invalid_argument("negative homology degree");
  HilbertFunction result(grid, std::vector<int>(degrees.begin(), degrees.end()));
  if (complex.empty() || result.degrees().empty()) return result;
  const int sweep = options.sweep_axis < 0 ? n - 1 : options.sweep_axis;
  if (sweep >= n) throw std::invalid_argument("sweep axis out of range");
  const int min_degree = result.degrees().front();
  const int max_degree = result.degrees().back();

  const auto table = detail::BoundaryTable::build(complex);
  const auto shape = grid.shape();

  // Grid-snapped entry indices; a simplex lies in the sublevel set at grid
  // index x iff snap_j <= x_j on every axis.
  std::vector<int> snapped(complex.size() * n);
  std::vector<std::uint32_t> candidates;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    bool reachable = table.dims[i] <= max_degree + 1;
    for (int j = 0; j < n; ++j) {
      snapped[i * n + j] = grid.snap(j, complex.value(i)[j]);
      reachable = reachable && snapped[i * n + j] < grid.resolution(j);
    }
    if (reachable) candidates.push_back(static_cast<std::uint32_t>(i));
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int ta = snapped[a * n + sweep], tb = snapped[b * n + sweep];
    if (ta != tb) return ta < tb;
    if (table.dims[a] != table.dims[b]) return table.dims[a] < table.dims[b];
    return table.lex_rank[a] < table.lex_rank[b];
  });

  std::vector<std::size_t> stride(n, 1);
  for (int j = n - 2; j >= 0; --j) stride[j] = stride[j + 1] * shape[j + 1];
  std::vector<int> fiber_axes;
  std::size_t fiber_count = 1;
  for (int j = 0; j < n; ++j)
    if (j != sweep) {
      fiber_axes.push_back(j);
      fiber_count *= static_cast<std::size_t>(grid.resolution(j));
    }
  const int sweep_k = grid.resolution(sweep);

  std::vector<std::span<std::int32_t>> outputs;
  for (int d : result.degrees()) outputs.push_back(result.values(d));

  auto work = [&](std::atomic<std::size_t>& next) {
    detail::Reducer reducer(field.p());
    std::vector<std::uint32_t> order;
    std::vector<int> fiber(fiber_axes.size());
    std::vector<int> diff(static_cast<std::size_t>(sweep_k) + 1);
    for (std::size_t f = next++; f < fiber_count; f = next++) {
      std::size_t rest = f, base = 0;
      for (std::size_t a = fiber_axes.size(); a-- > 0;) {
        const int k = grid.resolution(fiber_axes[a]);
        fiber[a] = static_cast<int>(rest % k);
        rest /= k;
        base += fiber[a] * stride[fiber_axes[a]];
      }
      order.clear();
      for (auto g : candidates) {
        bool inside = true;
        for (std::size_t a = 0; a < fiber_axes.size() && inside; ++a)
          inside = snapped[g * n + fiber_axes[a]] <= fiber[a];
        if (inside) order.push_back(g);
      }
      if (order.empty()) continue;
      reducer.run(table, order, min_degree, max_degree);
      for (std::size_t di = 0; di < outputs.size(); ++di) {
        const int degree = result.degrees()[di];
        std::fill(diff.begin(), diff.end(), 0);
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
          if (table.dims[order[pos]] != degree || !reducer.positive(pos)) continue;
          const int birth = snapped[order[pos] * n + sweep];
          const auto killer = reducer.killer(pos);
          const int death = killer < 0 ? sweep_k : snapped[order[killer] * n + sweep];
          if (birth < death) {
            ++diff[birth];
            --diff[death];
          }
        }
        int running = 0;
        for (int b = 0; b < sweep_k; ++b) {
          running += diff[b];
          outputs[di][base + b * stride[sweep]] = running;
        }
      }
    }
  };

  std::atomic<std::size_t> next{0};
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(fiber_count)));
  if (threads == 1) {
    work(next);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back([&] { work(next); });
  }
  return result;
}

}  // namespace mpsm
