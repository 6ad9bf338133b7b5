#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "mpsm/homology.hpp"
#include "mpsm/signed_measure.hpp"
#include "mpsm/simplicial.hpp"

namespace mpsm::testing {

using Rng = std::mt19937_64;

inline AttributedGraph random_graph(Rng& rng, int max_vertices, double edge_probability) {
  std::uniform_int_distribution<int> count(1, max_vertices);
  std::bernoulli_distribution coin(edge_probability);
  AttributedGraph g;
  g.vertex_count = count(rng);
  for (int u = 0; u < g.vertex_count; ++u)
    for (int v = u + 1; v < g.vertex_count; ++v)
      if (coin(rng)) g.edges.emplace_back(u, v);
  return g;
}

// Integer-valued vertex functions keep many ties, which is where grid code breaks.
inline std::vector<std::vector<double>> random_vertex_functions(Rng& rng, int vertices, int axes, int levels) {
  std::uniform_int_distribution<int> level(0, levels - 1);
  std::vector<std::vector<double>> f(axes, std::vector<double>(vertices));
  for (auto& axis : f)
    for (double& v : axis) v = level(rng);
  return f;
}

// Closure of a few random faces on up to `max_vertices` vertices. Each simplex
// draws random integer values, raised to the maximum over its facets.
inline FilteredComplex random_complex(Rng& rng, int max_vertices, int parameters, int levels) {
  std::uniform_int_distribution<int> nv(1, max_vertices);
  const int n = nv(rng);
  std::uniform_int_distribution<int> faces(1, 5), size(1, std::min(n, 4)), vertex(0, n - 1), level(0, levels - 1);
  std::set<std::vector<Vertex>> simplices;
  for (int v = 0; v < n; ++v) simplices.insert({v});
  const int count = faces(rng);
  for (int f = 0; f < count; ++f) {
    std::set<Vertex> top;
    const int s = size(rng);
    while (static_cast<int>(top.size()) < s) top.insert(vertex(rng));
    std::vector<Vertex> t(top.begin(), top.end());
    for (unsigned mask = 1; mask < (1u << t.size()); ++mask) {
      std::vector<Vertex> face;
      for (std::size_t i = 0; i < t.size(); ++i)
        if (mask & (1u << i)) face.push_back(t[i]);
      simplices.insert(face);
    }
  }
  std::vector<std::vector<Vertex>> ordered(simplices.begin(), simplices.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::map<std::vector<Vertex>, std::vector<double>> value;
  FilteredComplex c(parameters, n);
  for (const auto& s : ordered) {
    std::vector<double> v(parameters, 0.0);
    for (int a = 0; a < parameters; ++a) v[a] = level(rng);
    if (s.size() > 1)
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<Vertex> face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        const auto& fv = value.at(face);
        for (int a = 0; a < parameters; ++a) v[a] = std::max(v[a], fv[a]);
      }
    value[s] = v;
    c.add(Simplex(s), v);
  }
  return c;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Rank of a dense matrix over Z/pZ by Gaussian elimination.
inline int rank_mod_p(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  auto inverse = [p](std::int64_t a) {
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (((m[r][c] % p) + p) % p != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[rank]);
    const std::int64_t inv = inverse(((m[rank][c] % p) + p) % p);
    for (auto& x : m[rank]) x = ((x % p) + p) % p * inv % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::int64_t f = ((m[r][c] % p) + p) % p;
      if (!f) continue;
      for (int k = 0; k < cols; ++k) m[r][k] = ((m[r][k] - f * m[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// dim H_degree of the subcomplex of simplices whose values are <= x, from
// ranks of dense boundary matrices.
inline int betti_at(const FilteredComplex& c, std::span<const double> x, int degree, std::int64_t p) {
  std::vector<std::vector<std::vector<Vertex>>> by_dim(degree + 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int d = c.simplex(i).dimension();
    if (d > degree + 1) continue;
    auto v = c.value(i);
    bool in = true;
    for (std::size_t a = 0; a < x.size() && in; ++a) in = v[a] <= x[a];
    if (in) {
      auto vs = c.simplex(i).vertices();
      by_dim[d].emplace_back(vs.begin(), vs.end());
    }
  }
  auto boundary_rank = [&](int d) {
    if (d <= 0 || by_dim[d].empty() || by_dim[d - 1].empty()) return 0;
    std::map<std::vector<Vertex>, int> row;
    for (std::size_t r = 0; r < by_dim[d - 1].size(); ++r) row[by_dim[d - 1][r]] = static_cast<int>(r);
    std::vector<std::vector<std::int64_t>> m(by_dim[d - 1].size(), std::vector<std::int64_t>(by_dim[d].size(), 0));
    for (std::size_t col = 0; col < by_dim[d].size(); ++col) {
      const auto& s = by_dim[d][col];
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        auto face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        m[row.at(face)][col] = drop % 2 ? -1 : 1;
      }
    }
    return rank_mod_p(m, p);
  };
  return static_cast<int>(by_dim[degree].size()) - boundary_rank(degree) - boundary_rank(degree + 1);
}

// Iterates every multi-index of `shape` in row-major order.
template <class Fn>
void for_each_index(const std::vector<int>& shape, Fn&& fn) {
  std::vector<int> idx(shape.size(), 0);
  while (true) {
    fn(std::span<const int>(idx));
    int j = static_cast<int>(shape.size()) - 1;
    while (j >= 0 && ++idx[j] == shape[j]) idx[j--] = 0;
    if (j < 0) return;
  }
}

inline std::vector<double> grid_point(const GridSpec& grid, std::span<const int> idx) {
  std::vector<double> x(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) x[j] = grid.value(static_cast<int>(j), idx[j]);
  return x;
}

inline bool on_padding(const GridSpec& grid, std::span<const int> idx) {
  for (std::size_t j = 0; j < idx.size(); ++j)
    if (idx[j] == grid.resolution(static_cast<int>(j))) return true;
  return false;
}

// `positive_units` atoms of weight +1 and `negative_units` of weight -1,
// uniform in [0, spread)^n.
inline SignedMeasure random_measure(Rng& rng, int n, int positive_units, int negative_units, double spread) {
  std::uniform_real_distribution<double> coord(0.0, spread);
  std::vector<double> coords;
  std::vector<Weight> weights;
  for (int i = 0; i < positive_units + negative_units; ++i) {
    for (int j = 0; j < n; ++j) coords.push_back(coord(rng));
    weights.push_back(i < positive_units ? 1 : -1);
  }
  return SignedMeasure(n, std::move(coords), std::move(weights));
}

}  // namespace mpsm::testing
