#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mpsm/homology.hpp"
#include "mpsm/signed_measure.hpp"

namespace mpsm {

/// Convolution kernel. Gaussian: normalized density with covariance Sigma.
/// Tent: K(u) = slope * max(0, radius - |u|_2), slope-Lipschitz with support
/// the ball of the given radius.
class KernelSpec {
 public:
  enum class Kind { Gaussian, Tent };

  /// Throws NumericError unless `covariance` is symmetric positive-definite.
  static KernelSpec gaussian(Eigen::MatrixXd covariance);
  /// Diagonal covariance with the given per-axis standard deviations.
  static KernelSpec gaussian_bandwidths(std::span<const double> bandwidths);
  static KernelSpec tent(int dimension, double radius, double slope);

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  double radius() const { return radius_; }
  double slope() const { return slope_; }

  double operator()(std::span<const double> u) const;

  /// c with ||K_y - K_z||_2 <= c ||y - z||_2. Gaussian:
  /// ||Sigma^-1||_2^{1/2} / (sqrt 2 pi^{n/4} det(Sigma)^{1/4}), which exceeds
  /// the sharp constant by 2^{n/2}; tent: slope * sqrt(2 vol(support)).
  double lipschitz_constant() const;

 private:
  Kind kind_ = Kind::Gaussian;
  int dimension_ = 0;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd precision_;
  double normalization_ = 0.0;
  double radius_ = 0.0;
  double slope_ = 0.0;
};

/// Closed form of ||K_y - K_z||_2 for a Gaussian kernel:
/// sqrt(2 (1 - exp(-|(y - z)/2|^2_{Sigma^-1})) / ((4 pi)^{n/2} sqrt(det Sigma))),
/// since ||K||_2^2 = 1 / ((4 pi)^{n/2} sqrt(det Sigma)).
double gaussian_shift_distance(const KernelSpec& kernel, std::span<const double> y,
                               std::span<const double> z);

/// Values of a kernel convolution on the full padded grid (row-major,
/// axis 0 slowest).
struct ConvolutionImage {
  GridSpec grid;
  std::vector<double> values;
};

/// (K * mu)(x) = sum_atoms w K(s(x - z)) evaluated at every grid point x,
/// where s are the per-axis scales (empty means 1); the scales stretch the
/// parameter space, so atoms and evaluation points are both rescaled.
ConvolutionImage gaussian_convolution(const SignedMeasure& mu, const GridSpec& grid,
                                      const KernelSpec& kernel,
                                      std::span<const double> axis_scales = {});

/// Trapezoid-rule L2 norm of a function sampled on the grid, measured in the
/// rescaled coordinates.
double grid_l2_norm(const GridSpec& grid, std::span<const double> values,
                    std::span<const double> axis_scales = {});

/// Quadrature of ||a - b||_2 for two images on the same grid.
double image_l2_distance(const ConvolutionImage& a, const ConvolutionImage& b,
                         std::span<const double> axis_scales = {});

/// Default Gaussian bandwidths: five grid spacings per axis.
std::vector<double> default_bandwidths(const GridSpec& grid);

/// Row-major flatten of every image, concatenated in the given order.
/// Throws std::invalid_argument when grid shapes differ.
std::vector<double> assemble_features(std::span<const ConvolutionImage> images);

}  // namespace mpsm
