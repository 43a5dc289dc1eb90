#include "peakheight/validate/simulate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

namespace peakheight::validate {

using numerics::RandomStream;

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& k, int min_rank) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  if (solver.info() != Eigen::Success) throw IndefiniteCovarianceError("psd_factor: eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (ev(0) < -1e-8) {
    throw IndefiniteCovarianceError("covariance matrix indefinite: smallest eigenvalue " + std::to_string(ev(0)) +
                                    " below the -1e-8 floor");
  }
  const double cut = 1e-13 * std::max(top, 0.0);
  Eigen::Index first = 0;
  while (first < ev.size() && !(ev(first) > cut)) ++first;
  const Eigen::Index rank = ev.size() - first;
  if (rank < min_rank) {
    throw IndefiniteCovarianceError("covariance matrix has numerical rank " + std::to_string(rank) +
                                    "; a degenerate field has no well-defined peaks");
  }
  Eigen::MatrixXd factor = solver.eigenvectors().rightCols(rank);
  for (Eigen::Index c = 0; c < rank; ++c) factor.col(c) *= std::sqrt(ev(first + c));
  return factor;
}

PathSimulator1D::PathSimulator1D(const CovarianceHandle1D& cov, const Grid1D& grid) : grid_(grid) {
  cov.validate(grid);
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = cov.cov(grid.at(i), grid.at(i));
    for (Eigen::Index j = i + 1; j < n; ++j) k(i, j) = k(j, i) = cov.cov(grid.at(i), grid.at(j));
  }
  factor_ = psd_factor(k);
  const double drift = (factor_.rowwise().squaredNorm().array() - 1.0).abs().maxCoeff();
  if (drift > 1e-8) {
    throw IndefiniteCovarianceError(cov.name + ": factorized marginal variance off by " + std::to_string(drift) +
                                    " (> 1e-8)");
  }
}

std::vector<double> PathSimulator1D::draw(RandomStream& stream) const {
  Eigen::VectorXd z(factor_.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.next_normal();
  const Eigen::VectorXd x = factor_ * z;
  return {x.data(), x.data() + x.size()};
}

std::vector<double> simulate_1d(const CovarianceHandle1D& cov, const Grid1D& grid, RandomStream& stream) {
  return PathSimulator1D(cov, grid).draw(stream);
}

namespace {

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct StationarySimulator2D::Fft {
  fftw_plan plan = nullptr;
  ~Fft() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

StationarySimulator2D::StationarySimulator2D(StationaryCovariance2D cov, const Grid2D& grid, int padding)
    : cov_(std::move(cov)), grid_(grid) {
  grid.validate();
  if (!cov_) throw std::invalid_argument("StationarySimulator2D: empty covariance");
  if (padding < 2) throw std::invalid_argument("StationarySimulator2D: padding >= 2 required");
  if (std::abs(cov_(0.0, 0.0) - 1.0) > 1e-10) throw std::invalid_argument("StationarySimulator2D: C(0) = 1 violated");
  for (int p = padding; p <= std::max(padding, 4); p *= 2) {
    if (try_embedding(p)) return;
  }
  const std::size_t n = grid.x.n_points * grid.y.n_points;
  if (grid.x.n_points > 64 || grid.y.n_points > 64) {
    throw IndefiniteCovarianceError("circulant embedding indefinite after padding escalation and grid exceeds 64 x 64");
  }
  method_ = Simulation2DMethod::kDense;
  padding_ = 0;
  Eigen::MatrixXd k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    const double xa = grid.x.at(a / grid.y.n_points), ya = grid.y.at(a % grid.y.n_points);
    for (std::size_t b = a; b < n; ++b) {
      const double xb = grid.x.at(b / grid.y.n_points), yb = grid.y.at(b % grid.y.n_points);
      const double v = cov_(xb - xa, yb - ya);
      k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      k(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
  }
  dense_factor_ = psd_factor(k);
}

StationarySimulator2D::~StationarySimulator2D() = default;

bool StationarySimulator2D::try_embedding(int padding) {
  const std::size_t m1 = static_cast<std::size_t>(padding) * grid_.x.n_points;
  const std::size_t m2 = static_cast<std::size_t>(padding) * grid_.y.n_points;
  FftwBuffer buf(m1 * m2);
  auto fft = std::make_unique<Fft>();
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fft->plan = fftw_plan_dft_2d(static_cast<int>(m1), static_cast<int>(m2), buf.data, buf.data, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
  }
  if (!fft->plan) throw std::runtime_error("StationarySimulator2D: FFTW planning failed");
  auto lag = [](std::size_t k, std::size_t m) {
    return k <= m / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m);
  };
  for (std::size_t k1 = 0; k1 < m1; ++k1) {
    for (std::size_t k2 = 0; k2 < m2; ++k2) {
      buf.data[k1 * m2 + k2][0] = cov_(lag(k1, m1) * grid_.x.step, lag(k2, m2) * grid_.y.step);
      buf.data[k1 * m2 + k2][1] = 0.0;
    }
  }
  fftw_execute_dft(fft->plan, buf.data, buf.data);
  double top = 0.0, bottom = 0.0;
  for (std::size_t i = 0; i < m1 * m2; ++i) {
    top = std::max(top, buf.data[i][0]);
    bottom = std::min(bottom, buf.data[i][0]);
  }
  if (bottom < -1e-6 * top) return false;
  const double scale = 1.0 / static_cast<double>(m1 * m2);
  sqrt_eig_.resize(m1 * m2);
  for (std::size_t i = 0; i < m1 * m2; ++i) sqrt_eig_[i] = std::sqrt(std::max(buf.data[i][0], 0.0) * scale);
  m1_ = m1;
  m2_ = m2;
  padding_ = padding;
  method_ = Simulation2DMethod::kCirculant;
  fft_ = std::move(fft);
  return true;
}

std::pair<Field2D, Field2D> StationarySimulator2D::draw_pair(RandomStream& stream) const {
  const std::size_t nx = grid_.x.n_points, ny = grid_.y.n_points;
  std::pair<Field2D, Field2D> out{Field2D(nx, ny), Field2D(nx, ny)};
  if (method_ == Simulation2DMethod::kDense) {
    for (Field2D* f : {&out.first, &out.second}) {
      Eigen::VectorXd z(dense_factor_.cols());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.next_normal();
      const Eigen::VectorXd v = dense_factor_ * z;
      std::copy(v.data(), v.data() + v.size(), f->values.begin());
    }
    return out;
  }
  FftwBuffer buf(m1_ * m2_);
  for (std::size_t i = 0; i < m1_ * m2_; ++i) {
    buf.data[i][0] = sqrt_eig_[i] * stream.next_normal();
    buf.data[i][1] = sqrt_eig_[i] * stream.next_normal();
  }
  fftw_execute_dft(fft_->plan, buf.data, buf.data);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      out.first(i, j) = buf.data[i * m2_ + j][0];
      out.second(i, j) = buf.data[i * m2_ + j][1];
    }
  }
  return out;
}

Field2D simulate_stationary_2d(StationaryCovariance2D cov, const Grid2D& grid, RandomStream& stream, int padding) {
  return StationarySimulator2D(std::move(cov), grid, padding).draw(stream);
}

namespace {

// a cos(w t) + b sin(w t) along one axis
std::vector<double> harmonic(double omega, const Grid1D& grid, RandomStream& stream) {
  const double a = stream.next_normal();
  const double b = stream.next_normal();
  std::vector<double> v(grid.n_points);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = omega * grid.at(i);
    v[i] = a * std::cos(t) + b * std::sin(t);
  }
  return v;
}

}  // namespace

std::vector<double> simulate_cosine_1d(const cosine::CosineSpec& spec, const Grid1D& grid, RandomStream& stream) {
  spec.validate();
  if (spec.n_dim != 1) throw std::invalid_argument("simulate_cosine_1d: N = 1 required");
  grid.validate();
  return harmonic(spec.omegas[0], grid, stream);
}

Field2D simulate_cosine_2d(const cosine::CosineSpec& spec, const Grid2D& grid, RandomStream& stream) {
  spec.validate();
  if (spec.n_dim != 2) throw std::invalid_argument("simulate_cosine_2d: N = 2 required");
  grid.validate();
  const std::vector<double> a = harmonic(spec.omegas[0], grid.x, stream);
  const std::vector<double> b = harmonic(spec.omegas[1], grid.y, stream);
  Field2D f(a.size(), b.size());
  const double norm = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) f(i, j) = norm * (a[i] + b[j]);
  }
  return f;
}

}  // namespace peakheight::validate
