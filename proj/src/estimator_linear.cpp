#include "arden/estimator_linear.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "arden/error.hpp"

namespace arden {

void FitConfig::validate() const {
  require(order >= 1, ErrorKind::InvalidArgument, "order must be >= 1");
  require(rho > 0.0 && std::isfinite(rho), ErrorKind::InvalidArgument, "rho must be positive");
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument,
          "lambda must be non-negative");
  require(max_iterations >= 1, ErrorKind::InvalidArgument, "max_iterations must be >= 1");
  require(convergence_tol > 0.0, ErrorKind::InvalidArgument, "convergence_tol must be positive");
}

Vector SmootherSystem::solve() const {
  return std::visit(
      [this](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BandedSPDMatrix>) {
          return solve_banded_spd(m, rhs);
        } else {
          return solve_block_tridiagonal_spd(m, rhs);
        }
      },
      normal);
}

namespace {

// Shared stopping rule: relative decrease of the monitored objective, or an
// objective that is negligible against the data energy (exact fit).
bool has_converged(const std::vector<LossBreakdown>& history, double data_scale, double tol) {
  const double current = history.back().penalized;
  if (current <= tol * data_scale) return true;
  if (history.size() < 2) return false;
  const double previous = history[history.size() - 2].penalized;
  return std::abs(previous - current) <= tol * std::max(previous, std::numeric_limits<double>::min());
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar AR(r)

LossBreakdown evaluate_loss(const ARParams& params, const Vector& y_hat, const Vector& y,
                            double rho, bool measure_from_start) {
  require(y_hat.size() == y.size(), ErrorKind::InvalidArgument,
          "denoised and measured series differ in length");
  const auto r = static_cast<Eigen::Index>(params.order());
  const Eigen::Index n = y.size();
  if (n <= r) fail(ErrorKind::HorizonTooShort, "series must be longer than the order");

  LossBreakdown loss;
  // 0-based t indexes the newest entry of the embedding xhat_t.
  for (Eigen::Index t = r - 1; t + 1 < n; ++t) {
    double prediction = 0.0;
    for (Eigen::Index lag = 0; lag < r; ++lag) prediction += params.theta[lag] * y_hat[t - lag];
    const double e = y_hat[t + 1] - prediction;
    loss.dynamics_term += e * e;
  }
  for (Eigen::Index t = measure_from_start ? 0 : r - 1; t < n; ++t) {
    const double e = y[t] - y_hat[t];
    loss.measurement_term += e * e;
  }
  loss.total = loss.dynamics_term + rho * loss.measurement_term;
  loss.normalized = loss.total / static_cast<double>(n);
  loss.penalized = loss.total;
  return loss;
}

LossBreakdown evaluate_loss(const ARParams& params, const TimeSeries& y_hat, const TimeSeries& y,
                            double rho) {
  require(y_hat.channels() == 1 && y.channels() == 1, ErrorKind::InvalidArgument,
          "scalar series expected");
  return evaluate_loss(params, y_hat.column(0), y.column(0), rho);
}

ARParams param_step(const Vector& y_hat, std::size_t order, double lambda) {
  const DelayEmbedding emb = delay_embed(y_hat, order);
  return ARParams(solve_regularized_ls(emb.gamma, emb.y_plus, lambda).col(0));
}

SmootherSystem assemble_ar_smoother(const ARParams& params, const Vector& y, double rho,
                                    double lambda, bool measure_from_start) {
  require(rho > 0.0, ErrorKind::InvalidArgument, "rho must be positive");
  require(lambda >= 0.0, ErrorKind::InvalidArgument, "lambda must be non-negative");
  const std::size_t r = params.order();
  const auto n = static_cast<std::size_t>(y.size());
  if (n <= r) fail(ErrorKind::HorizonTooShort, "series must be longer than the order");

  BandedSPDMatrix normal(n, r);
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(n));

  // Each dynamics residual yhat_{t+1} - sum_j theta_j yhat_{t-j} touches the
  // r + 1 consecutive unknowns t-r+1 .. t+1; its outer product fills the band.
  std::vector<double> coeff(r + 1);
  for (std::size_t t = r - 1; t + 1 < n; ++t) {
    const std::size_t first = t + 1 - r;
    for (std::size_t lag = 0; lag < r; ++lag) coeff[r - 1 - lag] = -params.theta[static_cast<Eigen::Index>(lag)];
    coeff[r] = 1.0;
    for (std::size_t a = 0; a <= r; ++a) {
      for (std::size_t b = 0; b <= a; ++b) normal.add(first + a, first + b, coeff[a] * coeff[b]);
    }
  }
  for (std::size_t t = measure_from_start ? 0 : r - 1; t < n; ++t) {
    normal.add(t, t, rho);
    rhs[static_cast<Eigen::Index>(t)] = rho * y[static_cast<Eigen::Index>(t)];
  }
  if (lambda > 0.0) {
    for (std::size_t t = 0; t < n; ++t) normal.add(t, t, lambda);
  }
  return SmootherSystem{std::move(normal), std::move(rhs)};
}

Vector state_step(const ARParams& params, const Vector& y, double rho, double lambda,
                  bool measure_from_start) {
  if (!y.allFinite()) fail(ErrorKind::NonFinite, "measurements contain NaN or Inf");
  return assemble_ar_smoother(params, y, rho, lambda, measure_from_start).solve();
}

FitResult fit_ar(const TimeSeries& series, const FitConfig& config) {
  config.validate();
  require(series.channels() == 1, ErrorKind::InvalidArgument, "fit_ar needs a scalar series");
  const Vector y = series.column(0);
  if (static_cast<std::size_t>(y.size()) <= config.order) {
    fail(ErrorKind::HorizonTooShort, "series must be longer than the order");
  }

  const double data_scale = config.rho * y.squaredNorm() + std::numeric_limits<double>::min();
  Vector y_hat = y;
  Vector theta;
  std::vector<LossBreakdown> history;
  std::vector<Matrix> coefficient_history;
  Matrix y_hat_first;
  bool converged = false;

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    const ARParams params = param_step(y_hat, config.order, config.lambda);
    y_hat = state_step(params, y, config.rho, config.lambda, config.measure_from_start);
    theta = params.theta;

    LossBreakdown loss = evaluate_loss(params, y_hat, y, config.rho, config.measure_from_start);
    loss.penalized = loss.total + config.lambda * (theta.squaredNorm() + y_hat.squaredNorm());
    history.push_back(loss);
    coefficient_history.emplace_back(theta);
    if (iter == 0) y_hat_first = y_hat;

    if (has_converged(history, data_scale, config.convergence_tol)) {
      converged = true;
      break;
    }
  }

  const ARParams final_params(theta);
  std::vector<Complex> eig = companion_eigenvalues(std::span<const double>(theta.data(), theta.size()));
  const double min_eig = min_magnitude(eig);
  const std::size_t iterations = coefficient_history.size();
  return FitResult{
      .theta = theta,
      .transition = build_companion(final_params).transition,
      .y_hat = TimeSeries(Matrix(y_hat), series.sample_rate_hz(), series.channel_names()),
      .loss_history = std::move(history),
      .coefficient_history = std::move(coefficient_history),
      .y_hat_first = std::move(y_hat_first),
      .iterations_run = iterations,
      .converged = converged,
      .eigenvalues = std::move(eig),
      .min_eig_magnitude = min_eig,
  };
}

// ---------------------------------------------------------------------------
// VAR(1)

LossBreakdown evaluate_var_loss(const Matrix& transition, const Matrix& x_hat, const Matrix& y,
                                double rho) {
  require(x_hat.rows() == y.rows() && x_hat.cols() == y.cols(), ErrorKind::InvalidArgument,
          "state and measurement shapes differ");
  require(transition.rows() == y.cols() && transition.cols() == y.cols(),
          ErrorKind::InvalidArgument, "transition must be p x p");
  const Eigen::Index n = y.rows();
  if (n < 2) fail(ErrorKind::HorizonTooShort, "VAR(1) needs at least two steps");

  LossBreakdown loss;
  for (Eigen::Index t = 0; t + 1 < n; ++t) {
    loss.dynamics_term +=
        (x_hat.row(t + 1).transpose() - transition * x_hat.row(t).transpose()).squaredNorm();
  }
  loss.measurement_term = (y - x_hat).squaredNorm();
  loss.total = loss.dynamics_term + rho * loss.measurement_term;
  loss.normalized = loss.total / static_cast<double>(n);
  loss.penalized = loss.total;
  return loss;
}

Matrix var_param_step(const Matrix& x_hat, double lambda) {
  const Eigen::Index n = x_hat.rows();
  if (n < 2) fail(ErrorKind::HorizonTooShort, "VAR(1) needs at least two steps");
  // Rows x_t^T W ~ x_{t+1}^T, so the transition is W^T.
  const Matrix w = solve_regularized_ls(x_hat.topRows(n - 1), x_hat.bottomRows(n - 1), lambda);
  return w.transpose();
}

SmootherSystem assemble_var_smoother(const Matrix& transition, const Matrix& y, double rho,
                                     double lambda) {
  require(rho > 0.0, ErrorKind::InvalidArgument, "rho must be positive");
  require(lambda >= 0.0, ErrorKind::InvalidArgument, "lambda must be non-negative");
  const Eigen::Index n = y.rows();
  const Eigen::Index p = y.cols();
  require(transition.rows() == p && transition.cols() == p, ErrorKind::InvalidArgument,
          "transition must be p x p");
  if (n < 2) fail(ErrorKind::HorizonTooShort, "VAR(1) needs at least two steps");

  BlockTridiagonalSPDMatrix normal(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  Vector rhs(n * p);
  const Matrix ata = transition.transpose() * transition;
  const Matrix identity = Matrix::Identity(p, p);
  for (Eigen::Index t = 0; t < n; ++t) {
    Matrix& d = normal.diagonal(static_cast<std::size_t>(t));
    d = (rho + lambda) * identity;
    if (t + 1 < n) {
      d += ata;
      normal.lower(static_cast<std::size_t>(t)) = -transition;
    }
    if (t > 0) d += identity;
    rhs.segment(t * p, p) = rho * y.row(t).transpose();
  }
  return SmootherSystem{std::move(normal), std::move(rhs)};
}

Matrix var_state_step(const Matrix& transition, const Matrix& y, double rho, double lambda) {
  if (!y.allFinite()) fail(ErrorKind::NonFinite, "measurements contain NaN or Inf");
  const Vector stacked = assemble_var_smoother(transition, y, rho, lambda).solve();
  // Stacked layout is time-major; reshape into N x p rows.
  Matrix x_hat(y.rows(), y.cols());
  for (Eigen::Index t = 0; t < y.rows(); ++t) {
    x_hat.row(t) = stacked.segment(t * y.cols(), y.cols()).transpose();
  }
  return x_hat;
}

FitResult fit_var1(const TimeSeries& series, const FitConfig& config) {
  config.validate();
  require(config.order == 1, ErrorKind::InvalidArgument, "fit_var1 requires order 1");
  const Matrix& y = series.values();
  if (y.rows() < 2) fail(ErrorKind::HorizonTooShort, "VAR(1) needs at least two steps");

  const double data_scale = config.rho * y.squaredNorm() + std::numeric_limits<double>::min();
  Matrix x_hat = y;
  Matrix a;
  std::vector<LossBreakdown> history;
  std::vector<Matrix> coefficient_history;
  Matrix y_hat_first;
  bool converged = false;

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    a = var_param_step(x_hat, config.lambda);
    x_hat = var_state_step(a, y, config.rho, config.lambda);

    LossBreakdown loss = evaluate_var_loss(a, x_hat, y, config.rho);
    loss.penalized = loss.total + config.lambda * (a.squaredNorm() + x_hat.squaredNorm());
    history.push_back(loss);
    coefficient_history.push_back(a);
    if (iter == 0) y_hat_first = x_hat;

    if (has_converged(history, data_scale, config.convergence_tol)) {
      converged = true;
      break;
    }
  }

  std::vector<Complex> eig;
  if (a.rows() == 1) {
    eig.emplace_back(a(0, 0), 0.0);
  } else {
    Eigen::EigenSolver<Matrix> solver(a, false);
    if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "VAR eigenvalues");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) eig.push_back(solver.eigenvalues()[i]);
  }
  const double min_eig = min_magnitude(eig);
  const std::size_t iterations = coefficient_history.size();
  return FitResult{
      .theta = Vector(),
      .transition = a,
      .y_hat = TimeSeries(x_hat, series.sample_rate_hz(), series.channel_names()),
      .loss_history = std::move(history),
      .coefficient_history = std::move(coefficient_history),
      .y_hat_first = std::move(y_hat_first),
      .iterations_run = iterations,
      .converged = converged,
      .eigenvalues = std::move(eig),
      .min_eig_magnitude = min_eig,
  };
}

ErrorMetrics error_metrics(const Matrix& theta_hat, const Matrix& theta_true, const Matrix& y_hat,
                           const Matrix& x_true) {
  require(theta_hat.rows() == theta_true.rows() && theta_hat.cols() == theta_true.cols(),
          ErrorKind::InvalidArgument, "coefficient shapes differ");
  require(y_hat.rows() == x_true.rows() && y_hat.cols() == x_true.cols(),
          ErrorKind::InvalidArgument, "trajectory shapes differ");
  const double theta_norm = theta_true.norm();
  const double x_norm = x_true.norm();
  if (!(theta_norm > 0.0) || !(x_norm > 0.0)) {
    fail(ErrorKind::ZeroNormReference, "reference has zero norm");
  }
  ErrorMetrics m;
  m.e_theta = (theta_hat - theta_true) / theta_norm;
  m.e_norm_theta = (theta_hat - theta_true).norm() / theta_norm;
  m.e_x = (y_hat - x_true).norm() / x_norm;
  return m;
}

}  // namespace arden
