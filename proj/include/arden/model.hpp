#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arden/numerics.hpp"

namespace arden {

/// N x p block of finite measurements; row t is y_t.
class TimeSeries {
 public:
  explicit TimeSeries(Matrix values, std::optional<double> sample_rate_hz = std::nullopt,
                      std::vector<std::string> channel_names = {});

  static TimeSeries scalar(const Vector& values,
                           std::optional<double> sample_rate_hz = std::nullopt);

  std::size_t length() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t channels() const noexcept { return static_cast<std::size_t>(values_.cols()); }

  const Matrix& values() const noexcept { return values_; }
  Vector column(std::size_t channel) const;
  const std::optional<double>& sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::vector<std::string>& channel_names() const noexcept { return channel_names_; }

 private:
  Matrix values_;
  std::optional<double> sample_rate_hz_;
  std::vector<std::string> channel_names_;
};

/// AR(r) coefficients theta_1..theta_r, newest lag first.
struct ARParams {
  explicit ARParams(Vector coefficients);

  std::size_t order() const noexcept { return static_cast<std::size_t>(theta.size()); }

  Vector theta;
};

enum class Structure { Companion, General };

struct LinearSSModel {
  Matrix transition;   // A, n x n
  Matrix observation;  // C, p x n
  Structure structure = Structure::General;

  std::size_t state_dim() const noexcept { return static_cast<std::size_t>(transition.rows()); }
};

struct NoiseSpec {
  double transition_std = 0.0;
  double measurement_std = 0.0;
  std::uint64_t seed = 0;
};

struct Simulation {
  Matrix states;  // N x n, row t is x_t
  TimeSeries measurements;
};

struct DelayEmbedding {
  Matrix gamma;  // (N - r) x r, row for time t holds (y_t, ..., y_{t-r+1})
  Vector y_plus; // y_{t+1} for each row
};

/// Companion form acting on delay vectors (y_t, ..., y_{t-r+1}): theta in the
/// first row, ones on the sub-diagonal, C = e_1^T.
LinearSSModel build_companion(const ARParams& params);

/// Real AR coefficients whose characteristic polynomial has the given roots.
ARParams coefficients_from_roots(std::span<const Complex> roots);

/// Runs x_{t+1} = A x_t + nu_t, y_t = C x_t + mu_t for N steps.
///
/// Per step the transition draws come before the measurement draws. For a
/// companion model nu_t is a single scalar entering the first coordinate.
Simulation simulate(const LinearSSModel& model, const Vector& x1, std::size_t steps,
                    const NoiseSpec& noise);

DelayEmbedding delay_embed(const Vector& y, std::size_t order);
DelayEmbedding delay_embed(const TimeSeries& y, std::size_t order);

double predict_one_step(const ARParams& params, const Vector& embedding);

}  // namespace arden
