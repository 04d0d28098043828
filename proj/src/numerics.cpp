#include "arden/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "arden/error.hpp"

namespace arden {

bool all_finite(const Matrix& m) { return m.allFinite(); }

// ---------------------------------------------------------------------------
// BandedSPDMatrix

BandedSPDMatrix::BandedSPDMatrix(std::size_t dim, std::size_t bandwidth)
    : dim_(dim), bandwidth_(std::min(bandwidth, dim == 0 ? 0 : dim - 1)),
      bands_((bandwidth_ + 1) * dim, 0.0) {
  require(dim >= 1, ErrorKind::InvalidArgument, "banded matrix needs dim >= 1");
}

double& BandedSPDMatrix::slot(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  return bands_[(i - j) * dim_ + j];
}

double BandedSPDMatrix::at(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i >= dim_) fail(ErrorKind::IndexOutOfRange, "banded matrix index");
  if (i - j > bandwidth_) return 0.0;
  return bands_[(i - j) * dim_ + j];
}

void BandedSPDMatrix::add(std::size_t i, std::size_t j, double value) {
  const std::size_t hi = std::max(i, j), lo = std::min(i, j);
  if (hi >= dim_ || hi - lo > bandwidth_) {
    fail(ErrorKind::IndexOutOfRange, "entry outside the stored band");
  }
  slot(i, j) += value;
}

Vector BandedSPDMatrix::multiply(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim_, ErrorKind::InvalidArgument,
          "banded multiply: size mismatch");
  Vector y = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (std::size_t j = 0; j < dim_; ++j) {
    y[j] += bands_[j] * x[j];
    for (std::size_t k = 1; k <= bandwidth_ && j + k < dim_; ++k) {
      const double a = bands_[k * dim_ + j];
      y[j + k] += a * x[j];
      y[j] += a * x[j + k];
    }
  }
  return y;
}

Matrix BandedSPDMatrix::to_dense() const {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t k = 0; k <= bandwidth_ && j + k < dim_; ++k) {
      m(j + k, j) = m(j, j + k) = bands_[k * dim_ + j];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// BlockTridiagonalSPDMatrix

BlockTridiagonalSPDMatrix::BlockTridiagonalSPDMatrix(std::size_t num_blocks,
                                                     std::size_t block_dim)
    : block_dim_(block_dim) {
  require(num_blocks >= 1 && block_dim >= 1, ErrorKind::InvalidArgument,
          "block tridiagonal matrix needs at least one non-empty block");
  const auto b = static_cast<Eigen::Index>(block_dim);
  diagonal_.assign(num_blocks, Matrix::Zero(b, b));
  lower_.assign(num_blocks - 1, Matrix::Zero(b, b));
}

Vector BlockTridiagonalSPDMatrix::multiply(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim(), ErrorKind::InvalidArgument,
          "block multiply: size mismatch");
  const auto b = static_cast<Eigen::Index>(block_dim_);
  Vector y = Vector::Zero(x.size());
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const auto off = static_cast<Eigen::Index>(i) * b;
    y.segment(off, b) += diagonal_[i] * x.segment(off, b);
    if (i + 1 < num_blocks()) {
      y.segment(off + b, b) += lower_[i] * x.segment(off, b);
      y.segment(off, b) += lower_[i].transpose() * x.segment(off + b, b);
    }
  }
  return y;
}

Matrix BlockTridiagonalSPDMatrix::to_dense() const {
  const auto b = static_cast<Eigen::Index>(block_dim_);
  const auto n = static_cast<Eigen::Index>(dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const auto off = static_cast<Eigen::Index>(i) * b;
    m.block(off, off, b, b) = diagonal_[i];
    if (i + 1 < num_blocks()) {
      m.block(off + b, off, b, b) = lower_[i];
      m.block(off, off + b, b, b) = lower_[i].transpose();
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Dense ridge regression

Matrix solve_regularized_ls(const Matrix& design, const Matrix& targets, double lambda) {
  require(design.rows() >= 1 && design.cols() >= 1, ErrorKind::InvalidArgument,
          "design matrix must be non-empty");
  require(targets.rows() == design.rows(), ErrorKind::InvalidArgument,
          "design and targets row counts differ");
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument,
          "lambda must be finite and non-negative");
  if (!design.allFinite() || !targets.allFinite()) {
    fail(ErrorKind::NonFinite, "least-squares inputs contain NaN or Inf");
  }

  const Eigen::Index n = design.cols();
  Matrix normal = design.transpose() * design;
  normal.diagonal().array() += lambda;

  Eigen::LLT<Matrix> llt(normal);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::SingularSystem, "normal matrix is not positive definite");
  }
  if (lambda == 0.0) {
    // Rank deficiency shows up as a reciprocal condition number at roundoff level.
    const double threshold =
        16.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    if (llt.rcond() < threshold) {
      fail(ErrorKind::SingularSystem, "normal matrix is numerically rank deficient");
    }
  }
  Matrix w = llt.solve(design.transpose() * targets);
  if (!w.allFinite()) fail(ErrorKind::SingularSystem, "least-squares solution is not finite");
  return w;
}

// ---------------------------------------------------------------------------
// Banded Cholesky

namespace {

double relative_residual(const Vector& residual, const Vector& rhs) {
  const double scale = rhs.norm();
  return scale > 0.0 ? residual.norm() / scale : residual.norm();
}

}  // namespace

Vector solve_banded_spd(const BandedSPDMatrix& matrix, const Vector& rhs) {
  const std::size_t n = matrix.dim_;
  const std::size_t bw = matrix.bandwidth_;
  require(static_cast<std::size_t>(rhs.size()) == n, ErrorKind::InvalidArgument,
          "rhs length must equal matrix dimension");
  if (!rhs.allFinite()) fail(ErrorKind::NonFinite, "rhs contains NaN or Inf");
  for (double v : matrix.bands_) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "banded matrix contains NaN or Inf");
  }

  // Factor in place on a copy: factor[k * n + j] = L(j + k, j).
  std::vector<double> factor = matrix.bands_;
  auto l = [&](std::size_t i, std::size_t j) -> double& { return factor[(i - j) * n + j]; };

  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k0 = j > bw ? j - bw : 0;
    double pivot = l(j, j);
    for (std::size_t k = k0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      fail(ErrorKind::NotPositiveDefinite,
           "non-positive Cholesky pivot at row " + std::to_string(j));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    const std::size_t i_end = std::min(n, j + bw + 1);
    for (std::size_t i = j + 1; i < i_end; ++i) {
      const std::size_t kk0 = i > bw ? i - bw : 0;
      double s = l(i, j);
      for (std::size_t k = kk0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }

  auto substitute = [&](const Vector& b) {
    Vector x = b;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k0 = i > bw ? i - bw : 0;
      double s = x[i];
      for (std::size_t k = k0; k < i; ++k) s -= l(i, k) * x[k];
      x[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      const std::size_t k_end = std::min(n, ii + bw + 1);
      double s = x[ii];
      for (std::size_t k = ii + 1; k < k_end; ++k) s -= l(k, ii) * x[k];
      x[ii] = s / l(ii, ii);
    }
    return x;
  };

  Vector x = substitute(rhs);
  // Up to two refinement sweeps when roundoff leaves the residual above tolerance.
  for (int sweep = 0; sweep < 2; ++sweep) {
    const Vector residual = rhs - matrix.multiply(x);
    if (relative_residual(residual, rhs) <= kSolverRelTol) break;
    x += substitute(residual);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Block tridiagonal Cholesky

Vector solve_block_tridiagonal_spd(const BlockTridiagonalSPDMatrix& matrix, const Vector& rhs) {
  const std::size_t nb = matrix.num_blocks();
  const auto b = static_cast<Eigen::Index>(matrix.block_dim());
  require(static_cast<std::size_t>(rhs.size()) == matrix.dim(), ErrorKind::InvalidArgument,
          "rhs length must equal matrix dimension");
  if (!rhs.allFinite()) fail(ErrorKind::NonFinite, "rhs contains NaN or Inf");
  for (std::size_t i = 0; i < nb; ++i) {
    if (!matrix.diagonal(i).allFinite() || (i + 1 < nb && !matrix.lower(i).allFinite())) {
      fail(ErrorKind::NonFinite, "block matrix contains NaN or Inf");
    }
  }

  // diag_factor[i] = L_ii (lower), coupling[i] = L_{i+1,i} = B_i L_ii^{-T}.
  std::vector<Eigen::LLT<Matrix>> diag_factor;
  std::vector<Matrix> coupling;
  diag_factor.reserve(nb);
  coupling.reserve(nb > 0 ? nb - 1 : 0);

  Matrix schur = matrix.diagonal(0);
  for (std::size_t i = 0; i < nb; ++i) {
    diag_factor.emplace_back(schur);
    if (diag_factor.back().info() != Eigen::Success) {
      fail(ErrorKind::NotPositiveDefinite,
           "non-positive Cholesky pivot in block " + std::to_string(i));
    }
    if (i + 1 == nb) break;
    // Solve M L_ii^T = B_i  <=>  L_ii M^T = B_i^T.
    Matrix m = diag_factor.back().matrixL().solve(matrix.lower(i).transpose()).transpose();
    schur = matrix.diagonal(i + 1) - m * m.transpose();
    coupling.push_back(std::move(m));
  }

  auto substitute = [&](const Vector& r) {
    Vector z(r.size());
    for (std::size_t i = 0; i < nb; ++i) {
      const auto off = static_cast<Eigen::Index>(i) * b;
      Vector seg = r.segment(off, b);
      if (i > 0) seg -= coupling[i - 1] * z.segment(off - b, b);
      z.segment(off, b) = diag_factor[i].matrixL().solve(seg);
    }
    Vector x(r.size());
    for (std::size_t ii = nb; ii-- > 0;) {
      const auto off = static_cast<Eigen::Index>(ii) * b;
      Vector seg = z.segment(off, b);
      if (ii + 1 < nb) seg -= coupling[ii].transpose() * x.segment(off + b, b);
      x.segment(off, b) = diag_factor[ii].matrixU().solve(seg);
    }
    return x;
  };

  Vector x = substitute(rhs);
  for (int sweep = 0; sweep < 2; ++sweep) {
    const Vector residual = rhs - matrix.multiply(x);
    if (relative_residual(residual, rhs) <= kSolverRelTol) break;
    x += substitute(residual);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Companion spectrum via Aberth-Ehrlich

namespace {

struct HornerValue {
  Complex p;
  Complex dp;
  double bound;  // sum |a_i| |z|^(r-i), for the backward-error stopping test
};

// coeffs[0] == 1 is the leading coefficient.
HornerValue horner(const std::vector<double>& coeffs, Complex z) {
  Complex p = coeffs[0], dp = 0.0;
  double bound = std::abs(coeffs[0]);
  const double az = std::abs(z);
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    dp = dp * z + p;
    p = p * z + coeffs[i];
    bound = bound * az + std::abs(coeffs[i]);
  }
  return {p, dp, bound};
}

}  // namespace

std::vector<Complex> companion_eigenvalues(std::span<const double> theta) {
  const std::size_t r = theta.size();
  require(r >= 1, ErrorKind::InvalidArgument, "companion spectrum needs order >= 1");
  for (double t : theta) {
    if (!std::isfinite(t)) fail(ErrorKind::NonFinite, "AR coefficients contain NaN or Inf");
  }
  if (r == 1) return {Complex(theta[0], 0.0)};

  std::vector<double> coeffs(r + 1);
  coeffs[0] = 1.0;
  double inf_norm = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    coeffs[i + 1] = -theta[i];
    inf_norm = std::max(inf_norm, std::abs(theta[i]));
  }

  const double radius = std::max(1.0, std::pow(inf_norm, 1.0 / static_cast<double>(r)));
  std::vector<Complex> z(r);
  for (std::size_t k = 0; k < r; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(r) + 0.4;
    const double rad = radius * (1.0 + 0.01 * static_cast<double>(k) / static_cast<double>(r));
    z[k] = std::polar(rad, angle);
  }

  constexpr int kMaxIterations = 500;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(r, false);
  std::size_t remaining = r;
  for (int iter = 0; iter < kMaxIterations && remaining > 0; ++iter) {
    for (std::size_t k = 0; k < r; ++k) {
      if (done[k]) continue;
      const HornerValue hv = horner(coeffs, z[k]);
      if (std::abs(hv.p) <= 4.0 * eps * hv.bound) {
        done[k] = true;
        --remaining;
        continue;
      }
      const Complex ratio = hv.p / hv.dp;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < r; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      if (std::abs(step) <= eps * std::abs(z[k])) {
        done[k] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0) {
    fail(ErrorKind::NoConvergence,
         "Aberth iteration did not converge for " + std::to_string(remaining) + " roots");
  }

  std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return z;
}

double min_magnitude(std::span<const Complex> values) {
  if (values.empty()) return 0.0;
  double m = std::abs(values.front());
  for (const Complex& v : values) m = std::min(m, std::abs(v));
  return m;
}

}  // namespace arden
