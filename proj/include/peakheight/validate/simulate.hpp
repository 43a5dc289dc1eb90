#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <vector>

#include "peakheight/cosine.hpp"
#include "peakheight/numerics/random.hpp"
#include "peakheight/validate/covariance.hpp"

namespace peakheight::validate {

/// Dense field on a Grid2D; value(i, j) sits at (x.at(i), y.at(j)).
struct Field2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;

  Field2D() = default;
  Field2D(std::size_t nx_, std::size_t ny_) : nx(nx_), ny(ny_), values(nx_ * ny_, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return values[i * ny + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * ny + j]; }
};

/// Thrown for covariance matrices that cannot be factorized as PSD.
class IndefiniteCovarianceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n x r factor L with L L^T = K from the symmetric eigendecomposition,
/// dropping eigenvalues below 1e-13 of the largest. Throws
/// IndefiniteCovarianceError if the smallest eigenvalue is below -1e-8 or
/// the numerical rank is below min_rank.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& k, int min_rank = 2);

/// Exact Gaussian paths on a fixed grid: factorizes once, draws many.
class PathSimulator1D {
 public:
  PathSimulator1D(const CovarianceHandle1D& cov, const Grid1D& grid);

  const Grid1D& grid() const { return grid_; }
  int rank() const { return static_cast<int>(factor_.cols()); }
  std::vector<double> draw(numerics::RandomStream& stream) const;

 private:
  Grid1D grid_;
  Eigen::MatrixXd factor_;
};

/// One path; see PathSimulator1D for repeated draws.
std::vector<double> simulate_1d(const CovarianceHandle1D& cov, const Grid1D& grid, numerics::RandomStream& stream);

enum class Simulation2DMethod { kCirculant, kDense };

/// Stationary planar fields by circulant embedding of the covariance on a
/// torus of padding * n points per axis. Padding escalates 2x -> 4x when
/// the embedding has eigenvalues below -1e-6 of the largest; if that still
/// fails, grids up to 64 x 64 fall back to a dense factorization and larger
/// ones are rejected with IndefiniteCovarianceError.
class StationarySimulator2D {
 public:
  StationarySimulator2D(StationaryCovariance2D cov, const Grid2D& grid, int padding = 2);
  ~StationarySimulator2D();
  StationarySimulator2D(const StationarySimulator2D&) = delete;
  StationarySimulator2D& operator=(const StationarySimulator2D&) = delete;

  Simulation2DMethod method() const { return method_; }
  int padding() const { return padding_; }
  const Grid2D& grid() const { return grid_; }

  /// Two independent fields (real and imaginary parts of one complex draw
  /// for the circulant path, two dense draws otherwise).
  std::pair<Field2D, Field2D> draw_pair(numerics::RandomStream& stream) const;
  Field2D draw(numerics::RandomStream& stream) const { return draw_pair(stream).first; }

 private:
  struct Fft;
  bool try_embedding(int padding);

  StationaryCovariance2D cov_;
  Grid2D grid_;
  Simulation2DMethod method_ = Simulation2DMethod::kCirculant;
  int padding_ = 0;
  std::size_t m1_ = 0;
  std::size_t m2_ = 0;
  std::vector<double> sqrt_eig_;  // sqrt(Lambda / (m1 m2)), torus layout
  std::unique_ptr<Fft> fft_;
  Eigen::MatrixXd dense_factor_;
};

Field2D simulate_stationary_2d(StationaryCovariance2D cov, const Grid2D& grid, numerics::RandomStream& stream,
                               int padding = 2);

/// Cosine field for N = 1: values on the grid from one coefficient draw.
std::vector<double> simulate_cosine_1d(const cosine::CosineSpec& spec, const Grid1D& grid,
                                       numerics::RandomStream& stream);
/// Cosine field for N = 2, evaluated through its additive separability.
Field2D simulate_cosine_2d(const cosine::CosineSpec& spec, const Grid2D& grid, numerics::RandomStream& stream);

}  // namespace peakheight::validate
