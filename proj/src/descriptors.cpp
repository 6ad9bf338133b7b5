#include "mpsm/descriptors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace mpsm {

std::vector<double> degree(const AttributedGraph& graph) {
  graph.check();
  std::vector<double> d(static_cast<std::size_t>(graph.vertex_count), 0.0);
  for (auto [u, v] : graph.edges) {
    d[u] += 1;
    d[v] += 1;
  }
  return d;
}

ClosenessResult closeness(const AttributedGraph& graph) {
  graph.check();
  const int n = graph.vertex_count;
  const auto adj = graph.adjacency();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  bool connected = true;
  for (int s = 0; s < n; ++s) {
    std::deque<int> queue{s};
    dist[s][s] = 0;
    int reached = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (dist[s][v] < 0) {
          dist[s][v] = dist[s][u] + 1;
          ++reached;
          queue.push_back(v);
        }
    }
    connected = connected && reached == n;
  }
  ClosenessResult out;
  out.values.assign(n, 0.0);
  out.convention = connected ? ClosenessConvention::Standard : ClosenessConvention::Harmonic;
  for (int s = 0; s < n; ++s) {
    double total = 0;
    for (int v = 0; v < n; ++v) {
      if (v == s || dist[s][v] < 0) continue;
      total += connected ? dist[s][v] : 1.0 / dist[s][v];
    }
    if (connected)
      out.values[s] = total > 0 ? (n - 1) / total : 0.0;
    else
      out.values[s] = total;
  }
  return out;
}

std::vector<double> heat_kernel_signature(const AttributedGraph& graph, double t) {
  if (!(t > 0)) throw std::invalid_argument("heat kernel time must be positive");
  graph.check();
  const int n = graph.vertex_count;
  if (n == 0) return {};
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : graph.edges) {
    laplacian(u, v) -= 1;
    laplacian(v, u) -= 1;
    laplacian(u, u) += 1;
    laplacian(v, v) += 1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
  const auto& lambda = eig.eigenvalues();
  const double tol = 1e-9 * std::max(1.0, lambda.maxCoeff());
  std::vector<double> hks(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (lambda(i) <= tol) continue;
    const double w = std::exp(-lambda(i) * t);
    for (int v = 0; v < n; ++v) hks[v] += w * eig.eigenvectors()(v, i) * eig.eigenvectors()(v, i);
  }
  return hks;
}

std::vector<double> kde_codensity(const PointCloud& cloud, double bandwidth) {
  if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be positive");
  const std::size_t n = cloud.size();
  const double norm = std::pow(2 * std::numbers::pi * bandwidth * bandwidth, -0.5 * cloud.dimension()) /
                      static_cast<double>(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = cloud.distance(i, j);
      s += std::exp(-0.5 * d * d / (bandwidth * bandwidth));
    }
    out[i] = -norm * s;
  }
  return out;
}

std::vector<double> distance_to_measure(const PointCloud& cloud, double mass) {
  if (!(mass > 0 && mass <= 1)) throw std::invalid_argument("dtm mass must lie in (0, 1]");
  const std::size_t n = cloud.size();
  if (n == 0) return {};
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-12)));
  std::vector<double> out(n, 0.0), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[j] = cloud.distance(i, j);
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    double s = 0;
    for (std::size_t j = 0; j < k; ++j) s += d[j];
    out[i] = s / static_cast<double>(k);
  }
  return out;
}

std::vector<double> neighbour_codensity(const PointCloud& cloud, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  std::vector<double> out(cloud.size(), 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j)
      if (cloud.distance(i, j) <= radius) {
        out[i] -= 1;
        out[j] -= 1;
      }
  return out;
}

DescriptorSpec DescriptorSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  DescriptorSpec spec;
  auto param = [&]() {
    if (colon == std::string::npos)
      throw std::invalid_argument("descriptor '" + name + "' needs a parameter, e.g. " + name + ":0.1");
    std::size_t used = 0;
    const std::string p = text.substr(colon + 1);
    double v = 0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw std::invalid_argument("bad descriptor parameter in '" + text + "'");
    return v;
  };
  if (name == "degree") {
    spec.kind = Kind::Degree;
  } else if (name == "closeness") {
    spec.kind = Kind::Closeness;
  } else if (name == "hks") {
    spec.kind = Kind::HeatKernel;
    spec.parameter = param();
  } else if (name == "kde") {
    spec.kind = Kind::KdeCodensity;
    spec.parameter = param();
  } else if (name == "codegree") {
    spec.kind = Kind::CoDegree;
    spec.parameter = param();
  } else if (name == "dtm") {
    spec.kind = Kind::Dtm;
    spec.parameter = param();
  } else {
    throw std::invalid_argument("unknown descriptor '" + text + "'");
  }
  return spec;
}

std::string DescriptorSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Degree: return "degree";
    case Kind::Closeness: return "closeness";
    case Kind::HeatKernel: os << "hks:"; break;
    case Kind::KdeCodensity: os << "kde:"; break;
    case Kind::Dtm: os << "dtm:"; break;
    case Kind::CoDegree: os << "codegree:"; break;
  }
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, parameter);
  os << std::string_view(buf, end - buf);
  return os.str();
}

DescriptorResult vertex_descriptor(const DescriptorInput& input, const DescriptorSpec& spec) {
  const auto* graph = std::get_if<AttributedGraph>(&input);
  const auto* cloud = std::get_if<PointCloud>(&input);
  if (spec.needs_graph() && graph == nullptr)
    throw std::invalid_argument("descriptor " + spec.to_string() + " needs a graph");
  if (!spec.needs_graph() && cloud == nullptr)
    throw std::invalid_argument("descriptor " + spec.to_string() + " needs a point cloud");
  switch (spec.kind) {
    case DescriptorSpec::Kind::Degree:
      return {degree(*graph), "degree"};
    case DescriptorSpec::Kind::Closeness: {
      auto c = closeness(*graph);
      return {std::move(c.values), c.convention == ClosenessConvention::Standard
                                       ? "closeness (standard)"
                                       : "closeness (harmonic, graph disconnected)"};
    }
    case DescriptorSpec::Kind::HeatKernel:
      return {heat_kernel_signature(*graph, spec.parameter), "hks (null-space eigenvectors excluded)"};
    case DescriptorSpec::Kind::KdeCodensity:
      return {kde_codensity(*cloud, spec.parameter), "negated gaussian kde"};
    case DescriptorSpec::Kind::Dtm:
      return {distance_to_measure(*cloud, spec.parameter), "mean distance to ceil(mass*N) neighbours"};
    case DescriptorSpec::Kind::CoDegree:
      return {neighbour_codensity(*cloud, spec.parameter), "negated neighbour count within radius"};
  }
  throw std::logic_error("unreachable");
}

}  // namespace mpsm
