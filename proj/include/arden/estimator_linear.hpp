#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "arden/model.hpp"
#include "arden/numerics.hpp"

namespace arden {

struct FitConfig {
  std::size_t order = 1;
  double rho = 0.1;
  double lambda = 0.0;
  std::size_t max_iterations = 100;
  double convergence_tol = 1e-10;
  // Measurement residuals on every step t = 1..N. When false only t = r..N
  // are measured and yhat_1..yhat_{r-1} are held by the dynamics alone.
  bool measure_from_start = true;

  void validate() const;
};

/// Terms of the overparameterised loss
///   sum_{t=r}^{N-1} (yhat_{t+1} - theta^T xhat_t)^2 + rho sum_t (y_t - yhat_t)^2,
/// the second sum running over the measured steps (see FitConfig).
struct LossBreakdown {
  double dynamics_term = 0.0;
  double measurement_term = 0.0;
  double total = 0.0;       // dynamics_term + rho * measurement_term
  double normalized = 0.0;  // total / N
  double penalized = 0.0;   // total + lambda (|coefficients|^2 + |yhat|^2); equals total at lambda 0
};

/// Normal equations of the state step. Unknown i of the banded form is
/// yhat_{i+1}; block i of the block form is the state vector at step i + 1.
struct SmootherSystem {
  std::variant<BandedSPDMatrix, BlockTridiagonalSPDMatrix> normal;
  Vector rhs;

  Vector solve() const;
};

struct FitResult {
  Vector theta;       // AR coefficients (empty for VAR fits)
  Matrix transition;  // companion matrix of theta, or the full VAR transition
  TimeSeries y_hat;
  std::vector<LossBreakdown> loss_history;
  std::vector<Matrix> coefficient_history;  // theta (r x 1) or A (p x p) per iteration
  Matrix y_hat_first;                       // denoised series after iteration 1
  std::size_t iterations_run = 0;
  bool converged = false;
  std::vector<Complex> eigenvalues;
  double min_eig_magnitude = 0.0;
};

struct ErrorMetrics {
  double e_norm_theta = 0.0;
  Matrix e_theta;  // (theta_hat - theta_true) / |theta_true|
  double e_x = 0.0;
};

// Scalar AR(r)

LossBreakdown evaluate_loss(const ARParams& params, const Vector& y_hat, const Vector& y,
                            double rho, bool measure_from_start = true);
LossBreakdown evaluate_loss(const ARParams& params, const TimeSeries& y_hat, const TimeSeries& y,
                            double rho);

ARParams param_step(const Vector& y_hat, std::size_t order, double lambda);

SmootherSystem assemble_ar_smoother(const ARParams& params, const Vector& y, double rho,
                                    double lambda, bool measure_from_start = true);

// Exact minimiser of the loss over yhat_1..yhat_N at fixed theta.
Vector state_step(const ARParams& params, const Vector& y, double rho, double lambda,
                  bool measure_from_start = true);

FitResult fit_ar(const TimeSeries& y, const FitConfig& config);

// Multichannel VAR(1) with identity observation map

LossBreakdown evaluate_var_loss(const Matrix& transition, const Matrix& x_hat, const Matrix& y,
                                double rho);
Matrix var_param_step(const Matrix& x_hat, double lambda);
SmootherSystem assemble_var_smoother(const Matrix& transition, const Matrix& y, double rho,
                                     double lambda);
Matrix var_state_step(const Matrix& transition, const Matrix& y, double rho, double lambda);

FitResult fit_var1(const TimeSeries& y, const FitConfig& config);

ErrorMetrics error_metrics(const Matrix& theta_hat, const Matrix& theta_true, const Matrix& y_hat,
                           const Matrix& x_true);

}  // namespace arden
