#include "mpsm/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "mpsm/error.hpp"

namespace mpsm {

GroundNorm parse_ground_norm(const std::string& text) {
  if (text == "1") return GroundNorm::L1;
  if (text == "2") return GroundNorm::L2;
  if (text == "inf" || text == "infinity") return GroundNorm::LInf;
  throw std::invalid_argument("ground norm must be 1, 2 or inf, got '" + text + "'");
}

double ground_distance(std::span<const double> x, std::span<const double> y, GroundNorm p) {
  double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    switch (p) {
      case GroundNorm::L1: acc += d; break;
      case GroundNorm::L2: acc += d * d; break;
      case GroundNorm::LInf: acc = std::max(acc, d); break;
    }
  }
  return p == GroundNorm::L2 ? std::sqrt(acc) : acc;
}

namespace {

SignedMeasure difference(const SignedMeasure& mu, const SignedMeasure& nu) {
  if (mu.total_mass() != nu.total_mass())
    throw NumericError("mass mismatch: " + std::to_string(mu.total_mass()) + " vs " +
                       std::to_string(nu.total_mass()));
  if (!mu.empty() && !nu.empty() && mu.dimension() != nu.dimension())
    throw std::invalid_argument("measures live in different dimensions");
  return mu - nu;
}

// Successive shortest augmenting paths with Dijkstra and node potentials on
// the dense bipartite residual network. Forward arcs source->sink are
// uncapacitated; backward arcs carry the current flow.
class TransportSolver {
 public:
  TransportSolver(std::vector<Weight> supply, std::vector<Weight> demand, std::vector<double> cost)
      : supply_(std::move(supply)), demand_(std::move(demand)), cost_(std::move(cost)),
        sources_(supply_.size()), sinks_(demand_.size()),
        flow_(sources_ * sinks_, 0) {}

  double solve() {
    const std::size_t v = sources_ + sinks_;
    std::vector<double> potential(v, 0.0), dist(v);
    std::vector<std::ptrdiff_t> prev(v);
    std::vector<char> done(v);
    constexpr double inf = std::numeric_limits<double>::infinity();
    Weight remaining = std::accumulate(supply_.begin(), supply_.end(), Weight{0});
    while (remaining > 0) {
      std::fill(dist.begin(), dist.end(), inf);
      std::fill(prev.begin(), prev.end(), -1);
      std::fill(done.begin(), done.end(), 0);
      for (std::size_t s = 0; s < sources_; ++s)
        if (supply_[s] > 0) dist[s] = 0;
      for (;;) {
        std::ptrdiff_t u = -1;
        for (std::size_t i = 0; i < v; ++i)
          if (!done[i] && dist[i] < inf && (u < 0 || dist[i] < dist[u])) u = static_cast<std::ptrdiff_t>(i);
        if (u < 0) break;
        done[u] = 1;
        if (static_cast<std::size_t>(u) < sources_) {
          for (std::size_t t = 0; t < sinks_; ++t) {
            const std::size_t node = sources_ + t;
            const double rc = std::max(0.0, cost_[u * sinks_ + t] + potential[u] - potential[node]);
            if (dist[u] + rc < dist[node]) {
              dist[node] = dist[u] + rc;
              prev[node] = u;
            }
          }
        } else {
          const std::size_t t = static_cast<std::size_t>(u) - sources_;
          for (std::size_t s = 0; s < sources_; ++s) {
            if (flow_[s * sinks_ + t] == 0) continue;
            const double rc = std::max(0.0, -cost_[s * sinks_ + t] + potential[u] - potential[s]);
            if (dist[u] + rc < dist[s]) {
              dist[s] = dist[u] + rc;
              prev[s] = u;
            }
          }
        }
      }
      std::ptrdiff_t target = -1;
      for (std::size_t t = 0; t < sinks_; ++t) {
        const std::size_t node = sources_ + t;
        if (demand_[t] > 0 && dist[node] < inf && (target < 0 || dist[node] < dist[target]))
          target = static_cast<std::ptrdiff_t>(node);
      }
      if (target < 0) throw NumericError("transport network has no augmenting path");
      const double reach = dist[target];
      for (std::size_t i = 0; i < v; ++i) potential[i] += std::min(dist[i], reach);

      Weight push = demand_[target - sources_];
      std::ptrdiff_t node = target;
      while (prev[node] >= 0) {
        const std::ptrdiff_t from = prev[node];
        if (static_cast<std::size_t>(from) >= sources_)  // backward arc sink -> source
          push = std::min(push, flow_[node * sinks_ + (from - sources_)]);
        node = from;
      }
      push = std::min(push, supply_[node]);
      supply_[node] -= push;
      demand_[target - sources_] -= push;
      node = target;
      while (prev[node] >= 0) {
        const std::ptrdiff_t from = prev[node];
        if (static_cast<std::size_t>(from) < sources_)
          flow_[from * sinks_ + (node - sources_)] += push;
        else
          flow_[node * sinks_ + (from - sources_)] -= push;
        node = from;
      }
      remaining -= push;
    }
    double total = 0;
    for (std::size_t i = 0; i < flow_.size(); ++i)
      if (flow_[i] != 0) total += static_cast<double>(flow_[i]) * cost_[i];
    return total;
  }

 private:
  std::vector<Weight> supply_, demand_;
  std::vector<double> cost_;
  std::size_t sources_, sinks_;
  std::vector<Weight> flow_;
};

double kr_norm(const SignedMeasure& lambda, GroundNorm p) {
  const auto pos = lambda.positive_part();
  const auto neg = lambda.negative_part();
  if (pos.empty()) return 0.0;
  std::vector<double> cost(pos.size() * neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < neg.size(); ++j)
      cost[i * neg.size() + j] = ground_distance(pos.point(i), neg.point(j), p);
  if (pos.size() == 1 || neg.size() == 1) {
    double total = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = 0; j < neg.size(); ++j)
        total += cost[i * neg.size() + j] * static_cast<double>(pos.size() == 1 ? neg.weight(j) : pos.weight(i));
    return total;
  }
  return TransportSolver(pos.weights(), neg.weights(), std::move(cost)).solve();
}

// lambda has zero mass and lives on R.
double kr_norm_1d(const SignedMeasure& lambda) {
  std::vector<std::pair<double, Weight>> pos, neg;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double x = lambda.point(i)[0];
    if (lambda.weight(i) > 0)
      pos.emplace_back(x, lambda.weight(i));
    else
      neg.emplace_back(x, -lambda.weight(i));
  }
  double total = 0;
  std::size_t i = 0, j = 0;
  while (i < pos.size() && j < neg.size()) {
    const Weight m = std::min(pos[i].second, neg[j].second);
    total += static_cast<double>(m) * std::abs(pos[i].first - neg[j].first);
    if ((pos[i].second -= m) == 0) ++i;
    if ((neg[j].second -= m) == 0) ++j;
  }
  return total;
}

}  // namespace

double kr_distance(const SignedMeasure& mu, const SignedMeasure& nu, GroundNorm p) {
  return kr_norm(difference(mu, nu), p);
}

double brute_force_kr(const SignedMeasure& mu, const SignedMeasure& nu, GroundNorm p) {
  const auto lambda = difference(mu, nu);
  std::vector<std::span<const double>> xs, ys;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    auto& side = lambda.weight(i) > 0 ? xs : ys;
    for (Weight k = 0; k < std::abs(lambda.weight(i)); ++k) side.push_back(lambda.point(i));
  }
  if (xs.size() > 8) throw std::invalid_argument("brute_force_kr supports at most 8 unit masses");
  std::vector<std::size_t> perm(ys.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) c += ground_distance(xs[i], ys[perm[i]], p);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return xs.empty() ? 0.0 : best;
}

double kr_distance_1d(const SignedMeasure& mu, const SignedMeasure& nu) {
  const auto lambda = difference(mu, nu);
  if (!lambda.empty() && lambda.dimension() != 1)
    throw std::invalid_argument("kr_distance_1d needs measures on the real line");
  return kr_norm_1d(lambda);
}

SignedMeasure push_forward(const SignedMeasure& mu, std::span<const double> theta) {
  double norm = 0;
  for (double t : theta) norm += t * t;
  if (std::abs(std::sqrt(norm) - 1.0) > 1e-12) throw std::invalid_argument("direction is not a unit vector");
  if (mu.empty()) return SignedMeasure(1);
  if (static_cast<std::size_t>(mu.dimension()) != theta.size())
    throw std::invalid_argument("direction and measure dimensions differ");
  std::vector<double> coords(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    double s = 0;
    for (std::size_t j = 0; j < theta.size(); ++j) s += x[j] * theta[j];
    coords[i] = s;
  }
  return SignedMeasure(1, std::move(coords), mu.weights());
}

SWConfig SWConfig::sample(int dimension, int count, double sigma, std::uint64_t seed) {
  if (dimension < 1) throw std::invalid_argument("direction dimension must be at least 1");
  if (count < 1) throw std::invalid_argument("need at least one direction");
  SWConfig cfg;
  cfg.dimension = dimension;
  cfg.sigma = sigma;
  cfg.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dimension);
  for (int d = 0; d < count; ++d) {
    double norm = 0;
    while (norm == 0) {
      norm = 0;
      for (auto& x : v) {
        x = normal(rng);
        norm += x * x;
      }
    }
    norm = std::sqrt(norm);
    for (auto x : v) cfg.directions.push_back(x / norm);
  }
  cfg.check();
  return cfg;
}

SWConfig SWConfig::from_directions(int dimension, std::vector<double> directions, double sigma) {
  SWConfig cfg;
  cfg.dimension = dimension;
  cfg.directions = std::move(directions);
  cfg.sigma = sigma;
  cfg.check();
  return cfg;
}

void SWConfig::check() const {
  if (dimension < 1) throw std::invalid_argument("direction dimension must be at least 1");
  if (directions.empty() || directions.size() % dimension != 0)
    throw std::invalid_argument("direction list must hold whole vectors, at least one");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  for (std::size_t i = 0; i < direction_count(); ++i) {
    double norm = 0;
    for (double t : direction(i)) norm += t * t;
    if (std::abs(std::sqrt(norm) - 1.0) > 1e-12) throw std::invalid_argument("direction is not a unit vector");
  }
}

double sliced_wasserstein(const SignedMeasure& mu, const SignedMeasure& nu, const SWConfig& cfg) {
  cfg.check();
  const auto lambda = difference(mu, nu);
  if (lambda.empty()) return 0.0;
  if (lambda.dimension() != cfg.dimension) throw std::invalid_argument("directions and measures differ in dimension");
  double total = 0;
  for (std::size_t d = 0; d < cfg.direction_count(); ++d)
    total += kr_norm_1d(push_forward(lambda, cfg.direction(d)));
  return total / (cfg.sigma * static_cast<double>(cfg.direction_count()));
}

GramMatrix sw_gram(std::span<const SignedMeasure> measures, const SWConfig& cfg, int threads) {
  cfg.check();
  const std::size_t m = measures.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!measures[i].empty() && measures[i].dimension() != cfg.dimension)
      throw std::invalid_argument("measure " + std::to_string(i) + " has dimension " +
                                  std::to_string(measures[i].dimension()) + ", expected " +
                                  std::to_string(cfg.dimension));
    if (measures[i].total_mass() != measures[0].total_mass())
      throw std::invalid_argument("measure " + std::to_string(i) + " has total mass " +
                                  std::to_string(measures[i].total_mass()) + ", expected " +
                                  std::to_string(measures[0].total_mass()));
  }
  GramMatrix g;
  g.size = m;
  g.entries.assign(m * m, 1.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < pairs.size(); k = next++) {
      auto [i, j] = pairs[k];
      const double v = std::exp(-sliced_wasserstein(measures[i], measures[j], cfg));
      g.entries[i * m + j] = g.entries[j * m + i] = v;
    }
  };
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(pairs.size())));
  if (t == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(work);
  }
  return g;
}

}  // namespace mpsm
