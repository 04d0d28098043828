#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace arden {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Residual tolerance every structured solve is held to.
inline constexpr double kSolverRelTol = 1e-10;

bool all_finite(const Matrix& m);

/// Symmetric banded matrix stored as its diagonal and `bandwidth` sub-diagonals.
///
/// Band k holds the entries A(i + k, i) for i = 0 .. dim - k - 1. Writes to the
/// upper triangle are folded onto the lower one, so the matrix is symmetric by
/// construction.
class BandedSPDMatrix {
 public:
  BandedSPDMatrix(std::size_t dim, std::size_t bandwidth);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t bandwidth() const noexcept { return bandwidth_; }

  double at(std::size_t i, std::size_t j) const;
  void add(std::size_t i, std::size_t j, double value);

  Vector multiply(const Vector& x) const;
  Matrix to_dense() const;

 private:
  friend Vector solve_banded_spd(const BandedSPDMatrix&, const Vector&);

  double& slot(std::size_t i, std::size_t j);

  std::size_t dim_;
  std::size_t bandwidth_;
  std::vector<double> bands_;  // bands_[k * dim_ + j] = A(j + k, j)
};

/// Symmetric block-tridiagonal matrix with square blocks of equal size.
///
/// `lower(i)` is the block at block-row i + 1, block-column i; the upper
/// off-diagonal blocks are its transposes.
class BlockTridiagonalSPDMatrix {
 public:
  BlockTridiagonalSPDMatrix(std::size_t num_blocks, std::size_t block_dim);

  std::size_t num_blocks() const noexcept { return diagonal_.size(); }
  std::size_t block_dim() const noexcept { return block_dim_; }
  std::size_t dim() const noexcept { return num_blocks() * block_dim_; }

  Matrix& diagonal(std::size_t i) { return diagonal_.at(i); }
  const Matrix& diagonal(std::size_t i) const { return diagonal_.at(i); }
  Matrix& lower(std::size_t i) { return lower_.at(i); }
  const Matrix& lower(std::size_t i) const { return lower_.at(i); }

  Vector multiply(const Vector& x) const;
  Matrix to_dense() const;

 private:
  std::size_t block_dim_;
  std::vector<Matrix> diagonal_;
  std::vector<Matrix> lower_;
};

/// Ridge regression: argmin_W |design W - targets|_F^2 + lambda |W|_F^2.
///
/// Solved through the Cholesky factor of design^T design + lambda I. At
/// lambda == 0 a rank-deficient normal matrix is reported as SingularSystem
/// instead of falling back to a minimum-norm solution.
Matrix solve_regularized_ls(const Matrix& design, const Matrix& targets, double lambda);

/// Banded Cholesky without pivoting, O(dim * bandwidth^2).
Vector solve_banded_spd(const BandedSPDMatrix& matrix, const Vector& rhs);

/// Block Cholesky (block Thomas) recursion, O(num_blocks * block_dim^3).
Vector solve_block_tridiagonal_spd(const BlockTridiagonalSPDMatrix& matrix, const Vector& rhs);

/// All roots of z^r - theta_1 z^(r-1) - ... - theta_r, by Aberth-Ehrlich
/// iteration. These are the eigenvalues of the companion matrix of theta.
std::vector<Complex> companion_eigenvalues(std::span<const double> theta);

// Smallest root magnitude, 0 for an empty input.
double min_magnitude(std::span<const Complex> values);

}  // namespace arden
