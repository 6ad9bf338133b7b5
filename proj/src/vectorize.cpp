#include "mpsm/vectorize.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mpsm/error.hpp"

namespace mpsm {

KernelSpec KernelSpec::gaussian(Eigen::MatrixXd covariance) {
  if (covariance.rows() < 1 || covariance.rows() != covariance.cols())
    throw NumericError("covariance must be a non-empty square matrix");
  if (!covariance.isApprox(covariance.transpose(), 1e-12)) throw NumericError("covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0)
    throw NumericError("covariance is not positive-definite");
  KernelSpec k;
  k.kind_ = Kind::Gaussian;
  k.dimension_ = static_cast<int>(covariance.rows());
  k.precision_ = covariance.inverse();
  k.normalization_ =
      1.0 / std::sqrt(std::pow(2 * std::numbers::pi, k.dimension_) * covariance.determinant());
  k.covariance_ = std::move(covariance);
  return k;
}

KernelSpec KernelSpec::gaussian_bandwidths(std::span<const double> bandwidths) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(bandwidths.size(), bandwidths.size());
  for (std::size_t i = 0; i < bandwidths.size(); ++i) cov(i, i) = bandwidths[i] * bandwidths[i];
  return gaussian(std::move(cov));
}

KernelSpec KernelSpec::tent(int dimension, double radius, double slope) {
  if (dimension < 1 || !(radius > 0) || !(slope > 0))
    throw NumericError("tent kernel needs positive dimension, radius and slope");
  KernelSpec k;
  k.kind_ = Kind::Tent;
  k.dimension_ = dimension;
  k.radius_ = radius;
  k.slope_ = slope;
  return k;
}

double KernelSpec::operator()(std::span<const double> u) const {
  if (kind_ == Kind::Tent) {
    double r = 0;
    for (double x : u) r += x * x;
    return slope_ * std::max(0.0, radius_ - std::sqrt(r));
  }
  double q = 0;
  for (int i = 0; i < dimension_; ++i)
    for (int j = 0; j < dimension_; ++j) q += u[i] * precision_(i, j) * u[j];
  return normalization_ * std::exp(-0.5 * q);
}

double KernelSpec::lipschitz_constant() const {
  const double n = dimension_;
  if (kind_ == Kind::Tent) {
    const double volume = std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1) * std::pow(radius_, n);
    return slope_ * std::sqrt(2 * volume);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(precision_);
  const double op_norm = eig.eigenvalues().maxCoeff();
  return std::sqrt(op_norm) /
         (std::sqrt(2.0) * std::pow(std::numbers::pi, n / 4) * std::pow(covariance_.determinant(), 0.25));
}

double gaussian_shift_distance(const KernelSpec& kernel, std::span<const double> y,
                               std::span<const double> z) {
  if (kernel.kind() != KernelSpec::Kind::Gaussian) throw std::invalid_argument("closed form needs a Gaussian kernel");
  const int n = kernel.dimension();
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h(i) = 0.5 * (y[i] - z[i]);
  const double q = h.dot(kernel.covariance().ldlt().solve(h));
  const double squared =
      2 * (1 - std::exp(-q)) / (std::pow(4 * std::numbers::pi, 0.5 * n) * std::sqrt(kernel.covariance().determinant()));
  return std::sqrt(squared);
}

namespace {

std::vector<double> scales_or_ones(std::span<const double> scales, int n) {
  if (scales.empty()) return std::vector<double>(n, 1.0);
  if (static_cast<int>(scales.size()) != n) throw std::invalid_argument("one axis scale per parameter is required");
  for (double s : scales)
    if (!(s > 0)) throw std::invalid_argument("axis scales must be positive");
  return {scales.begin(), scales.end()};
}

}  // namespace

ConvolutionImage gaussian_convolution(const SignedMeasure& mu, const GridSpec& grid,
                                      const KernelSpec& kernel, std::span<const double> axis_scales) {
  const int n = grid.parameters();
  if (kernel.dimension() != n) throw std::invalid_argument("kernel and grid dimensions differ");
  if (!mu.empty() && mu.dimension() != n) throw std::invalid_argument("measure and grid dimensions differ");
  const auto scale = scales_or_ones(axis_scales, n);
  const auto shape = grid.shape();
  ConvolutionImage image{grid, std::vector<double>(grid.point_count(), 0.0)};
  std::vector<int> idx(n, 0);
  std::vector<double> u(n);
  for (std::size_t flat = 0; flat < image.values.size(); ++flat) {
    double sum = 0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      auto z = mu.point(a);
      for (int j = 0; j < n; ++j) u[j] = scale[j] * (grid.value(j, idx[j]) - z[j]);
      sum += static_cast<double>(mu.weight(a)) * kernel(u);
    }
    image.values[flat] = sum;
    for (int j = n - 1; j >= 0; --j) {
      if (++idx[j] < shape[j]) break;
      idx[j] = 0;
    }
  }
  return image;
}

double grid_l2_norm(const GridSpec& grid, std::span<const double> values, std::span<const double> axis_scales) {
  const int n = grid.parameters();
  const auto scale = scales_or_ones(axis_scales, n);
  const auto shape = grid.shape();
  if (values.size() != grid.point_count()) throw std::invalid_argument("value count does not match the grid");
  std::vector<std::vector<double>> weights(n);
  for (int j = 0; j < n; ++j) {
    const auto a = grid.axis(j);
    weights[j].assign(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double lo = i == 0 ? a[i] : 0.5 * (a[i - 1] + a[i]);
      const double hi = i + 1 == a.size() ? a[i] : 0.5 * (a[i] + a[i + 1]);
      weights[j][i] = scale[j] * (hi - lo);
    }
  }
  std::vector<int> idx(n, 0);
  double total = 0;
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    double w = 1;
    for (int j = 0; j < n; ++j) w *= weights[j][idx[j]];
    total += w * values[flat] * values[flat];
    for (int j = n - 1; j >= 0; --j) {
      if (++idx[j] < shape[j]) break;
      idx[j] = 0;
    }
  }
  return std::sqrt(total);
}

double image_l2_distance(const ConvolutionImage& a, const ConvolutionImage& b, std::span<const double> axis_scales) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("images live on different grids");
  std::vector<double> diff(a.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.values[i] - b.values[i];
  return grid_l2_norm(a.grid, diff, axis_scales);
}

std::vector<double> default_bandwidths(const GridSpec& grid) {
  std::vector<double> out;
  for (int j = 0; j < grid.parameters(); ++j) {
    const int k = grid.resolution(j);
    const double spacing = k > 1 ? (grid.value(j, k - 1) - grid.value(j, 0)) / (k - 1) : 1.0;
    out.push_back(5 * spacing);
  }
  return out;
}

std::vector<double> assemble_features(std::span<const ConvolutionImage> images) {
  std::vector<double> out;
  for (const auto& img : images) {
    if (img.grid.shape() != images.front().grid.shape())
      throw std::invalid_argument("images have different grid shapes");
    out.insert(out.end(), img.values.begin(), img.values.end());
  }
  return out;
}

}  // namespace mpsm
