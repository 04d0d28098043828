#include "arden/model.hpp"

#include <algorithm>
#include <cmath>

#include "arden/error.hpp"
#include "arden/rng.hpp"

namespace arden {

TimeSeries::TimeSeries(Matrix values, std::optional<double> sample_rate_hz,
                       std::vector<std::string> channel_names)
    : values_(std::move(values)),
      sample_rate_hz_(sample_rate_hz),
      channel_names_(std::move(channel_names)) {
  require(values_.rows() >= 1 && values_.cols() >= 1, ErrorKind::InvalidArgument,
          "time series needs at least one step and one channel");
  if (!values_.allFinite()) fail(ErrorKind::NonFinite, "time series contains NaN or Inf");
  if (sample_rate_hz_) {
    require(*sample_rate_hz_ > 0.0, ErrorKind::InvalidArgument, "sample rate must be positive");
  }
  require(channel_names_.empty() || channel_names_.size() == channels(),
          ErrorKind::InvalidArgument, "one channel name per column expected");
}

TimeSeries TimeSeries::scalar(const Vector& values, std::optional<double> sample_rate_hz) {
  return TimeSeries(Matrix(values), sample_rate_hz);
}

Vector TimeSeries::column(std::size_t channel) const {
  if (channel >= channels()) fail(ErrorKind::IndexOutOfRange, "channel index");
  return values_.col(static_cast<Eigen::Index>(channel));
}

ARParams::ARParams(Vector coefficients) : theta(std::move(coefficients)) {
  require(theta.size() >= 1, ErrorKind::InvalidArgument, "AR order must be >= 1");
  if (!theta.allFinite()) fail(ErrorKind::NonFinite, "AR coefficients contain NaN or Inf");
}

LinearSSModel build_companion(const ARParams& params) {
  const auto r = static_cast<Eigen::Index>(params.order());
  LinearSSModel model;
  model.transition = Matrix::Zero(r, r);
  model.transition.row(0) = params.theta.transpose();
  for (Eigen::Index i = 1; i < r; ++i) model.transition(i, i - 1) = 1.0;
  model.observation = Matrix::Zero(1, r);
  model.observation(0, 0) = 1.0;
  model.structure = Structure::Companion;
  return model;
}

ARParams coefficients_from_roots(std::span<const Complex> roots) {
  require(!roots.empty(), ErrorKind::InvalidArgument, "at least one root required");

  // Every root needs a distinct conjugate partner (real roots pair with themselves).
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    const double tol = 1e-8 * std::max(1.0, std::abs(roots[i]));
    if (std::abs(roots[i].imag()) <= tol) {
      used[i] = true;
      continue;
    }
    bool matched = false;
    for (std::size_t j = i + 1; j < roots.size() && !matched; ++j) {
      if (!used[j] && std::abs(roots[j] - std::conj(roots[i])) <= tol) {
        used[i] = used[j] = true;
        matched = true;
      }
    }
    if (!matched) fail(ErrorKind::NotConjugateClosed, "root without conjugate partner");
  }

  // Expand prod (z - root_i), highest power first.
  std::vector<Complex> poly{Complex(1.0, 0.0)};
  for (const Complex& root : roots) {
    std::vector<Complex> next(poly.size() + 1, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + 1] -= root * poly[k];
    }
    poly = std::move(next);
  }

  Vector theta(static_cast<Eigen::Index>(roots.size()));
  for (std::size_t k = 1; k < poly.size(); ++k) {
    const double scale = std::max(1.0, std::abs(poly[k]));
    if (std::abs(poly[k].imag()) > 1e-12 * scale * static_cast<double>(roots.size())) {
      fail(ErrorKind::NotConjugateClosed, "expanded polynomial is not real");
    }
    theta[static_cast<Eigen::Index>(k - 1)] = -poly[k].real();
  }
  return ARParams(std::move(theta));
}

Simulation simulate(const LinearSSModel& model, const Vector& x1, std::size_t steps,
                    const NoiseSpec& noise) {
  const Eigen::Index n = model.transition.rows();
  require(model.transition.cols() == n && model.observation.cols() == n,
          ErrorKind::InvalidArgument, "inconsistent model dimensions");
  require(x1.size() == n, ErrorKind::InvalidArgument, "initial state has wrong dimension");
  require(steps >= 1, ErrorKind::InvalidArgument, "horizon must be >= 1");
  require(noise.transition_std >= 0.0 && noise.measurement_std >= 0.0,
          ErrorKind::InvalidArgument, "noise standard deviations must be non-negative");

  const Eigen::Index p = model.observation.rows();
  const auto big_n = static_cast<Eigen::Index>(steps);
  const bool companion = model.structure == Structure::Companion;
  const Eigen::Index transition_draws = companion ? 1 : n;

  GaussianRng rng(noise.seed);
  Matrix states(big_n, n);
  Matrix measurements(big_n, p);
  Vector x = x1;
  Vector nu(transition_draws);
  Vector mu(p);
  for (Eigen::Index t = 0; t < big_n; ++t) {
    for (Eigen::Index i = 0; i < transition_draws; ++i) nu[i] = noise.transition_std * rng.normal();
    for (Eigen::Index i = 0; i < p; ++i) mu[i] = noise.measurement_std * rng.normal();

    states.row(t) = x.transpose();
    measurements.row(t) = (model.observation * x + mu).transpose();

    Vector next = model.transition * x;
    if (companion) {
      next[0] += nu[0];
    } else {
      next += nu;
    }
    x = std::move(next);
  }
  return Simulation{std::move(states), TimeSeries(std::move(measurements))};
}

DelayEmbedding delay_embed(const Vector& y, std::size_t order) {
  const auto n = static_cast<std::size_t>(y.size());
  require(order >= 1, ErrorKind::InvalidArgument, "embedding order must be >= 1");
  if (n <= order) fail(ErrorKind::HorizonTooShort, "series must be longer than the order");

  const auto rows = static_cast<Eigen::Index>(n - order);
  const auto r = static_cast<Eigen::Index>(order);
  DelayEmbedding out{Matrix(rows, r), Vector(rows)};
  for (Eigen::Index j = 0; j < rows; ++j) {
    const Eigen::Index t = r - 1 + j;  // 0-based index of y_t
    for (Eigen::Index lag = 0; lag < r; ++lag) out.gamma(j, lag) = y[t - lag];
    out.y_plus[j] = y[t + 1];
  }
  return out;
}

DelayEmbedding delay_embed(const TimeSeries& y, std::size_t order) {
  require(y.channels() == 1, ErrorKind::InvalidArgument, "delay embedding needs a scalar series");
  return delay_embed(y.column(0), order);
}

double predict_one_step(const ARParams& params, const Vector& embedding) {
  require(embedding.size() == params.theta.size(), ErrorKind::InvalidArgument,
          "embedding length must equal the AR order");
  return params.theta.dot(embedding);
}

}  // namespace arden
