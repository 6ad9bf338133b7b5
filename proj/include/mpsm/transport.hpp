#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpsm/signed_measure.hpp"

namespace mpsm {

/// Ground metric exponent for the Kantorovich-Rubinstein norm.
enum class GroundNorm { L1, L2, LInf };

GroundNorm parse_ground_norm(const std::string& text);
double ground_distance(std::span<const double> x, std::span<const double> y, GroundNorm p);

/// ||mu - nu||^KR_p: optimal transport between the positive and negative
/// parts of mu - nu. Solved exactly as a min-cost flow with integer supplies
/// on the bipartite network between the two parts. Throws NumericError on a
/// mass mismatch.
double kr_distance(const SignedMeasure& mu, const SignedMeasure& nu, GroundNorm p);

/// Reference solver: expands every weight into unit masses and enumerates all
/// matchings. Limited to 8 unit masses on each side.
double brute_force_kr(const SignedMeasure& mu, const SignedMeasure& nu, GroundNorm p);

/// One-dimensional KR distance by rank-to-rank matching of the sorted parts.
double kr_distance_1d(const SignedMeasure& mu, const SignedMeasure& nu);

/// Pushforward along x -> <x, theta>.
SignedMeasure push_forward(const SignedMeasure& mu, std::span<const double> theta);

/// Directions on S^{n-1} and the 1/sigma scale of the slicing measure.
struct SWConfig {
  int dimension = 0;
  std::vector<double> directions;  // direction_count() rows of `dimension` values
  double sigma = 1.0;
  std::uint64_t seed = 0;

  /// Normalized standard-normal vectors drawn from a seeded generator.
  static SWConfig sample(int dimension, int count, double sigma, std::uint64_t seed);
  static SWConfig from_directions(int dimension, std::vector<double> directions, double sigma);

  std::size_t direction_count() const {
    return dimension == 0 ? 0 : directions.size() / static_cast<std::size_t>(dimension);
  }
  std::span<const double> direction(std::size_t i) const {
    return {directions.data() + i * dimension, static_cast<std::size_t>(dimension)};
  }
  void check() const;
};

/// (1 / (sigma d)) sum_theta ||pi^theta_* mu - pi^theta_* nu||^KR.
double sliced_wasserstein(const SignedMeasure& mu, const SignedMeasure& nu, const SWConfig& cfg);

/// Row-major symmetric matrix of exp(-SW) values.
struct GramMatrix {
  std::size_t size = 0;
  std::vector<double> entries;
  double operator()(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

/// The same direction sample is used for every pair. Throws
/// std::invalid_argument naming the first measure whose dimension or mass
/// differs from measure 0.
GramMatrix sw_gram(std::span<const SignedMeasure> measures, const SWConfig& cfg, int threads = 1);

}  // namespace mpsm
