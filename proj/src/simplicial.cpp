#include "mpsm/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

namespace mpsm {

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("simplex must have at least one vertex");
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw std::invalid_argument("simplex has duplicate vertices: " + to_string());
  if (vertices_.front() < 0) throw std::invalid_argument("negative vertex identifier");
}

Simplex Simplex::facet(std::size_t i) const {
  std::vector<Vertex> out;
  out.reserve(vertices_.size() - 1);
  for (std::size_t j = 0; j < vertices_.size(); ++j)
    if (j != i) out.push_back(vertices_[j]);
  return Simplex(std::move(out));
}

std::string Simplex::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vertices_.size(); ++i) os << (i ? "," : "") << vertices_[i];
  os << '}';
  return os.str();
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  return boost::hash_range(s.vertices().begin(), s.vertices().end());
}

FilteredComplex::FilteredComplex(int parameters, int vertex_count)
    : parameters_(parameters), vertex_count_(vertex_count),
      sources_(static_cast<std::size_t>(std::max(parameters, 0)), PercentileSource::Vertices) {
  if (parameters < 1) throw std::invalid_argument("a filtration needs at least one parameter");
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
}

int FilteredComplex::max_dimension() const {
  int d = -1;
  for (const auto& s : simplices_) d = std::max(d, s.dimension());
  return d;
}

void FilteredComplex::add(Simplex s, std::span<const double> value) {
  if (static_cast<int>(value.size()) != parameters_)
    throw std::invalid_argument("filtration value has " + std::to_string(value.size()) +
                                " coordinates, complex has " + std::to_string(parameters_));
  vertex_count_ = std::max(vertex_count_, s.vertices().back() + 1);
  simplices_.push_back(std::move(s));
  values_.insert(values_.end(), value.begin(), value.end());
}

void FilteredComplex::canonicalize() {
  std::vector<std::size_t> order(simplices_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int da = simplices_[a].dimension(), db = simplices_[b].dimension();
    if (da != db) return da < db;
    auto va = value(a), vb = value(b);
    for (int j = 0; j < parameters_; ++j)
      if (va[j] != vb[j]) return va[j] < vb[j];
    return simplices_[a] < simplices_[b];
  });
  std::vector<Simplex> s;
  std::vector<double> v;
  s.reserve(order.size());
  v.reserve(values_.size());
  for (auto i : order) {
    s.push_back(std::move(simplices_[i]));
    auto row = value(i);
    v.insert(v.end(), row.begin(), row.end());
  }
  simplices_ = std::move(s);
  values_ = std::move(v);
}

PercentileSource FilteredComplex::percentile_source(int axis) const {
  return sources_.at(static_cast<std::size_t>(axis));
}

void FilteredComplex::set_percentile_source(int axis, PercentileSource source) {
  sources_.at(static_cast<std::size_t>(axis)) = source;
}

PointCloud::PointCloud(int dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
  if (dimension < 1 && !coords_.empty())
    throw std::invalid_argument("point dimension must be at least 1");
  if (dimension >= 1 && coords_.size() % dimension != 0)
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  for (double c : coords_)
    if (std::isnan(c)) throw std::invalid_argument("point cloud contains NaN");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const auto d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("points have different dimensions");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return PointCloud(static_cast<int>(d), std::move(coords));
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  auto a = point(i), b = point(j);
  double s = 0;
  for (int k = 0; k < dimension_; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

const NamedAttribute* AttributedGraph::find_attribute(const std::string& name) const {
  for (const auto& a : attributes)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<std::vector<Vertex>> AttributedGraph::adjacency() const {
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(vertex_count));
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

void AttributedGraph::check() const {
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw std::invalid_argument("edge references unknown vertex");
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    if (!seen.insert(std::minmax(u, v)).second)
      throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
  }
  for (const auto& a : attributes)
    if (static_cast<int>(a.values.size()) != vertex_count)
      throw std::invalid_argument("attribute '" + a.name + "' has wrong length");
}

namespace {

struct RipsSimplices {
  std::vector<Simplex> simplices;
  std::vector<double> diameters;
};

// Clique expansion of the threshold graph.
RipsSimplices rips_cliques(const PointCloud& cloud, double max_edge_length, int max_dim) {
  if (cloud.empty()) throw std::invalid_argument("empty input");
  if (!(max_edge_length > 0)) throw std::invalid_argument("max_edge_length must be positive");
  if (max_dim < 0) throw std::invalid_argument("max_dim must be non-negative");
  const std::size_t n = cloud.size();
  std::vector<double> dist(n * n, 0.0);
  std::vector<std::vector<Vertex>> upper(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cloud.distance(i, j);
      dist[i * n + j] = dist[j * n + i] = d;
      if (d <= max_edge_length) upper[i].push_back(static_cast<Vertex>(j));
    }

  RipsSimplices out;
  std::vector<Vertex> current;
  // Recursive expansion over common upper neighbours.
  auto expand = [&](auto&& self, double diameter, const std::vector<Vertex>& candidates) -> void {
    out.simplices.emplace_back(current);
    out.diameters.push_back(diameter);
    if (static_cast<int>(current.size()) > max_dim) return;
    for (Vertex c : candidates) {
      double d = diameter;
      for (Vertex v : current) d = std::max(d, dist[v * n + c]);
      std::vector<Vertex> next;
      std::set_intersection(candidates.begin(), candidates.end(), upper[c].begin(),
                            upper[c].end(), std::back_inserter(next));
      current.push_back(c);
      self(self, d, next);
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    current.assign(1, static_cast<Vertex>(v));
    expand(expand, 0.0, upper[v]);
  }
  return out;
}

}  // namespace

FilteredComplex build_rips(const PointCloud& cloud, double max_edge_length, int max_dim) {
  auto rips = rips_cliques(cloud, max_edge_length, max_dim);
  FilteredComplex c(1, static_cast<int>(cloud.size()));
  c.set_percentile_source(0, PercentileSource::AllSimplices);
  for (std::size_t i = 0; i < rips.simplices.size(); ++i)
    c.add(std::move(rips.simplices[i]), {rips.diameters[i]});
  c.canonicalize();
  return c;
}

FilteredComplex build_function_rips(const PointCloud& cloud,
                                    std::span<const double> vertex_values,
                                    double max_edge_length, int max_dim) {
  if (vertex_values.size() != cloud.size())
    throw std::invalid_argument("vertex value count " + std::to_string(vertex_values.size()) +
                                " does not match point count " + std::to_string(cloud.size()));
  auto rips = rips_cliques(cloud, max_edge_length, max_dim);
  FilteredComplex c(2, static_cast<int>(cloud.size()));
  c.set_percentile_source(0, PercentileSource::AllSimplices);
  for (std::size_t i = 0; i < rips.simplices.size(); ++i) {
    double lowest = vertex_values[rips.simplices[i][0]];
    for (Vertex v : rips.simplices[i].vertices()) lowest = std::min(lowest, vertex_values[v]);
    c.add(std::move(rips.simplices[i]), {rips.diameters[i], -lowest});
  }
  c.canonicalize();
  return c;
}

FilteredComplex lower_star(const AttributedGraph& graph,
                           const std::vector<std::vector<double>>& axes) {
  graph.check();
  if (axes.empty()) throw std::invalid_argument("lower-star filtration needs at least one axis");
  for (const auto& a : axes)
    if (static_cast<int>(a.size()) != graph.vertex_count)
      throw std::invalid_argument("vertex function has wrong length");
  const int n = static_cast<int>(axes.size());
  FilteredComplex c(n, graph.vertex_count);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < graph.vertex_count; ++v) {
    for (int j = 0; j < n; ++j) row[j] = axes[j][v];
    c.add(Simplex{v}, row);
  }
  for (auto [u, v] : graph.edges) {
    for (int j = 0; j < n; ++j) row[j] = std::max(axes[j][u], axes[j][v]);
    c.add(Simplex{u, v}, row);
  }
  c.canonicalize();
  return c;
}

FilteredComplex lower_star_multifiltration(const AttributedGraph& graph,
                                           const std::vector<std::string>& attribute_names) {
  std::vector<std::vector<double>> axes;
  for (const auto& name : attribute_names) {
    const auto* a = graph.find_attribute(name);
    if (a == nullptr) {
      std::string available;
      for (const auto& b : graph.attributes) available += (available.empty() ? "" : ", ") + b.name;
      throw std::invalid_argument("unknown attribute '" + name + "'; available: " +
                                  (available.empty() ? "(none)" : available));
    }
    axes.push_back(a->values);
  }
  return lower_star(graph, axes);
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) os << v.message << '\n';
  return os.str();
}

ValidationReport validate_complex(const FilteredComplex& c) {
  ValidationReport report;
  auto push = [&](Violation::Kind kind, std::size_t i, Simplex face, int axis, std::string msg) {
    report.violations.push_back({kind, i, std::move(face), axis, std::move(msg)});
  };
  std::unordered_map<Simplex, std::size_t, SimplexHash> index;
  index.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& s = c.simplex(i);
    if (s.vertices().back() >= c.vertex_count())
      push(Violation::Kind::BadVertex, i, s, -1,
           "simplex " + s.to_string() + " references a vertex beyond vertex_count");
    for (int j = 0; j < c.parameters(); ++j)
      if (!std::isfinite(c.value(i)[j]))
        push(Violation::Kind::BadValue, i, s, j,
             "simplex " + s.to_string() + " has non-finite value on axis " + std::to_string(j));
    if (!index.emplace(s, i).second)
      push(Violation::Kind::Duplicate, i, s, -1, "duplicate simplex " + s.to_string());
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& s = c.simplex(i);
    if (s.dimension() == 0) continue;
    for (std::size_t f = 0; f < s.size(); ++f) {
      Simplex face = s.facet(f);
      auto it = index.find(face);
      if (it == index.end()) {
        push(Violation::Kind::MissingFace, i, face, -1,
             "face " + face.to_string() + " of " + s.to_string() + " is missing");
        continue;
      }
      for (int j = 0; j < c.parameters(); ++j)
        if (c.value(it->second)[j] > c.value(i)[j])
          push(Violation::Kind::Monotonicity, i, face, j,
               "face " + face.to_string() + " enters after " + s.to_string() + " on axis " +
                   std::to_string(j));
    }
  }
  return report;
}

}  // namespace mpsm
