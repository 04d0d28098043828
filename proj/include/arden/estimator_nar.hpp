#pragma once

#include <cstddef>
#include <vector>

#include "arden/estimator_linear.hpp"
#include "arden/model.hpp"
#include "arden/signature.hpp"

namespace arden {

struct NarFitConfig {
  std::size_t order = 4;
  std::size_t depth = 2;
  double rho = 0.1;
  double lambda = 0.001;
  std::size_t max_iterations = 20;
  // Stop early once |yhat_new - yhat_old| / |yhat_old| drops below this.
  double change_tol = 1e-8;

  void validate() const;
};

/// Linear dynamics in signature space: s_{t+1} ~ A s_t, y_t ~ C s_t.
struct NARModel {
  std::size_t order = 0;
  std::size_t depth = 0;
  Matrix a_sig;  // n_s x n_s
  Matrix c_sig;  // 1 x n_s

  std::size_t state_dim() const noexcept { return static_cast<std::size_t>(a_sig.rows()); }
};

struct SigMatrices {
  Matrix gamma_minus;  // rows s_r .. s_{N-1}
  Matrix gamma_plus;   // rows s_{r+1} .. s_N
  Vector y_plus;       // yhat_{r+1} .. yhat_N
};

struct NarStateEstimate {
  Matrix s_hat;  // rows s_r .. s_N
  Vector y_hat;  // full length N
};

struct NarFitResult {
  NARModel model;        // after the last iteration
  NARModel first_model;  // after iteration 1 (plain least squares on raw signatures)
  TimeSeries y_hat;
  Matrix s_hat;
  Matrix y_hat_first;
  std::vector<LossBreakdown> loss_history;
  std::size_t iterations_run = 0;
  bool converged = false;
};

/// Signature of the path of every delay window, rows s_r .. s_N (1-based t).
Matrix signature_states(const Vector& y_hat, std::size_t order, std::size_t depth);

SigMatrices build_sig_matrices(const Vector& y_hat, std::size_t order, std::size_t depth);

NARModel nar_param_step(const SigMatrices& sig, double lambda, std::size_t order,
                        std::size_t depth);

SmootherSystem assemble_nar_smoother(const NARModel& model, const Vector& y, double rho,
                                     double lambda);

/// Minimises sum |s_{t+1} - A s_t|^2 + rho sum (y_t - C s_t)^2 + lambda sum |s_t|^2
/// over free signature-space states, then reads yhat_t = C s_t for t >= r.
/// yhat_1 .. yhat_{r-1} are copied from `y_hat_current`.
NarStateEstimate nar_state_step(const NARModel& model, const Vector& y, double rho, double lambda,
                                const Vector& y_hat_current);

LossBreakdown evaluate_nar_loss(const NARModel& model, const Matrix& s_hat, const Vector& y,
                                double rho);

NarFitResult fit_nar(const TimeSeries& y, const NarFitConfig& config);

/// One-step predictions C A s_t from raw context windows, one per t = r..M.
/// Entry j predicts the value following window j (i.e. y_{r+j+1}).
Vector nar_predict_one_step(const NARModel& model, const Vector& context);

/// Mean squared one-step error over the targets available inside `series`.
double nar_one_step_mse(const NARModel& model, const Vector& series);

}  // namespace arden
