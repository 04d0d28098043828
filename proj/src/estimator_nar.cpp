#include "arden/estimator_nar.hpp"

#include <cmath>

#include "arden/error.hpp"

namespace arden {

void NarFitConfig::validate() const {
  if (order < 2) fail(ErrorKind::EmbeddingTooShort, "signature models need order >= 2");
  require(depth >= 1, ErrorKind::InvalidArgument, "depth must be >= 1");
  require(rho > 0.0 && std::isfinite(rho), ErrorKind::InvalidArgument, "rho must be positive");
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument,
          "lambda must be non-negative");
  require(max_iterations >= 1, ErrorKind::InvalidArgument, "max_iterations must be >= 1");
}

Matrix signature_states(const Vector& y_hat, std::size_t order, std::size_t depth) {
  if (order < 2) fail(ErrorKind::EmbeddingTooShort, "signature models need order >= 2");
  const auto n = static_cast<std::size_t>(y_hat.size());
  if (n <= order) fail(ErrorKind::HorizonTooShort, "series must be longer than the order");

  const auto r = static_cast<Eigen::Index>(order);
  const Eigen::Index rows = static_cast<Eigen::Index>(n) - r + 1;
  Matrix states(rows, static_cast<Eigen::Index>(signature_dimension(2, depth)));
  for (Eigen::Index j = 0; j < rows; ++j) {
    // Window of s_{r+j}: oldest-first values y_{j+1} .. y_{j+r}.
    states.row(j) = signature(embed_to_path(y_hat.segment(j, r)), depth).coefficients.transpose();
  }
  return states;
}

SigMatrices build_sig_matrices(const Vector& y_hat, std::size_t order, std::size_t depth) {
  const Matrix s = signature_states(y_hat, order, depth);
  const Eigen::Index rows = s.rows() - 1;
  return SigMatrices{s.topRows(rows), s.bottomRows(rows), y_hat.tail(rows)};
}

NARModel nar_param_step(const SigMatrices& sig, double lambda, std::size_t order,
                        std::size_t depth) {
  require(sig.gamma_minus.rows() == sig.gamma_plus.rows() &&
              sig.gamma_plus.rows() == sig.y_plus.size(),
          ErrorKind::InvalidArgument, "signature matrices differ in row count");
  NARModel model;
  model.order = order;
  model.depth = depth;
  // Row convention: s_t^T W ~ s_{t+1}^T, so A = W^T.
  model.a_sig = solve_regularized_ls(sig.gamma_minus, sig.gamma_plus, lambda).transpose();
  model.c_sig = solve_regularized_ls(sig.gamma_plus, sig.y_plus, lambda).transpose();
  return model;
}

SmootherSystem assemble_nar_smoother(const NARModel& model, const Vector& y, double rho,
                                     double lambda) {
  require(rho > 0.0, ErrorKind::InvalidArgument, "rho must be positive");
  require(lambda >= 0.0, ErrorKind::InvalidArgument, "lambda must be non-negative");
  const auto r = static_cast<Eigen::Index>(model.order);
  const Eigen::Index n = y.size();
  if (n <= r) fail(ErrorKind::HorizonTooShort, "series must be longer than the order");

  const Eigen::Index blocks = n - r + 1;
  const Eigen::Index ns = model.a_sig.rows();
  BlockTridiagonalSPDMatrix normal(static_cast<std::size_t>(blocks), static_cast<std::size_t>(ns));
  Vector rhs(blocks * ns);

  const Matrix ata = model.a_sig.transpose() * model.a_sig;
  const Matrix ctc = model.c_sig.transpose() * model.c_sig;
  const Matrix identity = Matrix::Identity(ns, ns);
  for (Eigen::Index b = 0; b < blocks; ++b) {
    Matrix& d = normal.diagonal(static_cast<std::size_t>(b));
    d = rho * ctc + lambda * identity;
    if (b + 1 < blocks) {
      d += ata;
      normal.lower(static_cast<std::size_t>(b)) = -model.a_sig;
    }
    if (b > 0) d += identity;
    // Block b is s_{r+b}, measured against y_{r+b} (0-based index r-1+b).
    rhs.segment(b * ns, ns) = rho * y[r - 1 + b] * model.c_sig.transpose();
  }
  return SmootherSystem{std::move(normal), std::move(rhs)};
}

NarStateEstimate nar_state_step(const NARModel& model, const Vector& y, double rho, double lambda,
                                const Vector& y_hat_current) {
  require(y_hat_current.size() == y.size(), ErrorKind::InvalidArgument,
          "current estimate and measurements differ in length");
  if (!y.allFinite()) fail(ErrorKind::NonFinite, "measurements contain NaN or Inf");
  const Vector stacked = assemble_nar_smoother(model, y, rho, lambda).solve();

  const auto r = static_cast<Eigen::Index>(model.order);
  const Eigen::Index ns = model.a_sig.rows();
  const Eigen::Index blocks = y.size() - r + 1;
  NarStateEstimate out{Matrix(blocks, ns), y_hat_current};
  for (Eigen::Index b = 0; b < blocks; ++b) {
    out.s_hat.row(b) = stacked.segment(b * ns, ns).transpose();
    out.y_hat[r - 1 + b] = (model.c_sig * out.s_hat.row(b).transpose())(0, 0);
  }
  return out;
}

LossBreakdown evaluate_nar_loss(const NARModel& model, const Matrix& s_hat, const Vector& y,
                                double rho) {
  const auto r = static_cast<Eigen::Index>(model.order);
  require(s_hat.rows() == y.size() - r + 1, ErrorKind::InvalidArgument,
          "state count must be N - r + 1");
  LossBreakdown loss;
  for (Eigen::Index b = 0; b < s_hat.rows(); ++b) {
    const Vector s = s_hat.row(b).transpose();
    if (b + 1 < s_hat.rows()) {
      loss.dynamics_term += (s_hat.row(b + 1).transpose() - model.a_sig * s).squaredNorm();
    }
    const double e = y[r - 1 + b] - (model.c_sig * s)(0, 0);
    loss.measurement_term += e * e;
  }
  loss.total = loss.dynamics_term + rho * loss.measurement_term;
  loss.normalized = loss.total / static_cast<double>(y.size());
  loss.penalized = loss.total;
  return loss;
}

NarFitResult fit_nar(const TimeSeries& series, const NarFitConfig& config) {
  config.validate();
  require(series.channels() == 1, ErrorKind::InvalidArgument, "fit_nar needs a scalar series");
  const Vector y = series.column(0);
  if (static_cast<std::size_t>(y.size()) <= config.order + 1) {
    fail(ErrorKind::HorizonTooShort, "series too short for the signature order");
  }

  Vector y_hat = y;
  NARModel model, first_model;
  Matrix s_hat, y_hat_first;
  std::vector<LossBreakdown> history;
  bool converged = false;

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    const SigMatrices sig = build_sig_matrices(y_hat, config.order, config.depth);
    model = nar_param_step(sig, config.lambda, config.order, config.depth);
    NarStateEstimate est = nar_state_step(model, y, config.rho, config.lambda, y_hat);

    LossBreakdown loss = evaluate_nar_loss(model, est.s_hat, y, config.rho);
    loss.penalized = loss.total + config.lambda * est.s_hat.squaredNorm();
    history.push_back(loss);

    const double change = (est.y_hat - y_hat).norm() / std::max(y_hat.norm(), 1e-300);
    y_hat = std::move(est.y_hat);
    s_hat = std::move(est.s_hat);
    if (iter == 0) {
      first_model = model;
      y_hat_first = y_hat;
    }
    if (change < config.change_tol) {
      converged = true;
      break;
    }
  }

  const std::size_t iterations = history.size();
  return NarFitResult{
      .model = std::move(model),
      .first_model = std::move(first_model),
      .y_hat = TimeSeries(Matrix(y_hat), series.sample_rate_hz(), series.channel_names()),
      .s_hat = std::move(s_hat),
      .y_hat_first = std::move(y_hat_first),
      .loss_history = std::move(history),
      .iterations_run = iterations,
      .converged = converged,
  };
}

Vector nar_predict_one_step(const NARModel& model, const Vector& context) {
  if (static_cast<std::size_t>(context.size()) < model.order) {
    fail(ErrorKind::HorizonTooShort, "context shorter than the model order");
  }
  const auto r = static_cast<Eigen::Index>(model.order);
  const Eigen::Index count = context.size() - r + 1;
  const Matrix ca = model.c_sig * model.a_sig;
  Vector predictions(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const SignatureVector s = signature(embed_to_path(context.segment(j, r)), model.depth);
    predictions[j] = (ca * s.coefficients)(0, 0);
  }
  return predictions;
}

double nar_one_step_mse(const NARModel& model, const Vector& series) {
  const auto r = static_cast<Eigen::Index>(model.order);
  if (series.size() <= r) fail(ErrorKind::HorizonTooShort, "series shorter than order + 1");
  // Drop the last window: its target lies beyond the series.
  const Vector predictions = nar_predict_one_step(model, series.head(series.size() - 1));
  const Vector targets = series.tail(predictions.size());
  return (predictions - targets).squaredNorm() / static_cast<double>(predictions.size());
}

}  // namespace arden
