#include "arden/experiments.hpp"

#include <cmath>
#include <numbers>

#include "arden/error.hpp"
#include "arden/io.hpp"
#include "arden/parallel.hpp"

namespace arden {

ConvergenceStudyReport convergence_study(const SyntheticARSpec& spec, const FitConfig& base,
                                         std::size_t num_trials, double threshold) {
  require(num_trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
  FitConfig config = base;
  config.order = static_cast<std::size_t>(spec.theta.size());

  ConvergenceStudyReport report;
  report.threshold = threshold;
  report.trials.resize(num_trials);
  parallel_for(num_trials, [&](std::size_t i) {
    const Simulation sim = spec.simulate_trial(i);
    const Matrix truth = sim.states.col(0);
    const FitResult fit = fit_ar(sim.measurements, config);

    ConvergenceTrial& out = report.trials[i];
    out.trial = i;
    for (const Matrix& theta : fit.coefficient_history) {
      out.e_norm_theta.push_back(error_metrics(theta, spec.theta, truth, truth).e_norm_theta);
    }
    out.e_theta_first = error_metrics(fit.coefficient_history.front(), spec.theta, truth, truth).e_theta;
    out.e_theta_final = error_metrics(fit.theta, spec.theta, truth, truth).e_theta;
    out.e_x_raw = error_metrics(spec.theta, spec.theta, sim.measurements.values(), truth).e_x;
    out.e_x_first = error_metrics(spec.theta, spec.theta, fit.y_hat_first, truth).e_x;
    out.e_x_final = error_metrics(spec.theta, spec.theta, fit.y_hat.values(), truth).e_x;
  });
  for (const auto& t : report.trials) {
    if (t.e_norm_theta.back() < threshold) ++report.near_truth;
    if (t.e_x_final < t.e_x_raw) ++report.denoised;
  }
  return report;
}

ArtefactStudySpec eeg_rhythm_ar5_spec(std::uint64_t base_seed) {
  constexpr double kSampleRate = 400.0;
  constexpr double kRadius = 0.97;
  const double alpha = 2.0 * std::numbers::pi * 10.0 / kSampleRate;
  const double beta = 2.0 * std::numbers::pi * 25.0 / kSampleRate;
  const std::vector<Complex> roots{std::polar(kRadius, alpha), std::polar(kRadius, -alpha),
                                   std::polar(kRadius, beta),  std::polar(kRadius, -beta),
                                   Complex(-0.5, 0.0)};
  ArtefactStudySpec spec;
  spec.theta = coefficients_from_roots(roots).theta;
  spec.base_seed = base_seed;
  return spec;
}

ArtefactCase make_artefact_case(const ArtefactStudySpec& spec, std::size_t trial) {
  require(spec.artefact_start >= 1 && spec.artefact_start <= spec.artefact_end &&
              spec.artefact_end <= spec.train_steps,
          ErrorKind::IndexOutOfRange, "artefact window outside the training range");
  const LinearSSModel model = build_companion(ARParams(spec.theta));
  const std::size_t total = spec.burn_in + spec.train_steps + spec.test_steps;
  const std::uint64_t seed = spec.base_seed + trial;
  const Simulation sim = simulate(model, Vector::Zero(spec.theta.size()), total,
                                  NoiseSpec{spec.transition_std, spec.measurement_std, seed});

  const auto burn = static_cast<Eigen::Index>(spec.burn_in);
  const auto n_train = static_cast<Eigen::Index>(spec.train_steps);
  const auto n_test = static_cast<Eigen::Index>(spec.test_steps);
  const Vector y = sim.measurements.column(0);

  ArtefactCase c;
  c.truth = sim.states.col(0).segment(burn, n_train);
  c.clean = y.segment(burn, n_train);
  c.test = y.segment(burn + n_train, n_test);
  const double mean = c.clean.mean();
  const double sample_std = std::sqrt((c.clean.array() - mean).square().sum() /
                                      static_cast<double>(n_train));
  c.artefact_std = spec.artefact_scale * sample_std;
  // Separate stream for the artefact so it does not alias the simulation draws.
  const TimeSeries injected =
      inject_artefact(TimeSeries::scalar(c.clean), 0, spec.artefact_start, spec.artefact_end,
                      c.artefact_std, seed ^ 0x5bd1e995a5a5a5a5ULL);
  c.train = injected.column(0);
  return c;
}

ArtefactTrial evaluate_artefact_case(const ArtefactStudySpec& spec, const ArtefactCase& data,
                                     const NarFitResult& fit, std::size_t trial) {
  const auto start = static_cast<Eigen::Index>(spec.artefact_start - 1);
  const auto len = static_cast<Eigen::Index>(spec.artefact_end - spec.artefact_start + 1);
  const Vector truth = data.truth.segment(start, len);
  const Vector y_hat = fit.y_hat.column(0);

  ArtefactTrial t;
  t.trial = trial;
  t.rmse_raw = std::sqrt((data.train.segment(start, len) - truth).squaredNorm() / static_cast<double>(len));
  t.rmse_denoised = std::sqrt((y_hat.segment(start, len) - truth).squaredNorm() / static_cast<double>(len));
  t.mse_first = nar_one_step_mse(fit.first_model, data.test);
  t.mse_final = nar_one_step_mse(fit.model, data.test);
  t.window_improved = t.rmse_denoised < t.rmse_raw;
  t.prediction_improved = t.mse_final < t.mse_first;
  return t;
}

ArtefactStudyReport artefact_study(const ArtefactStudySpec& spec, const NarFitConfig& config,
                                   std::size_t num_trials) {
  require(num_trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
  ArtefactStudyReport report;
  report.trials.resize(num_trials);
  parallel_for(num_trials, [&](std::size_t i) {
    const ArtefactCase data = make_artefact_case(spec, i);
    const NarFitResult fit = fit_nar(TimeSeries::scalar(data.train), config);
    report.trials[i] = evaluate_artefact_case(spec, data, fit, i);
  });
  for (const auto& t : report.trials) {
    report.window_improved += t.window_improved;
    report.prediction_improved += t.prediction_improved;
    report.both_improved += t.window_improved && t.prediction_improved;
  }
  return report;
}

Simulation SyntheticVarSpec::simulate_trial(std::size_t trial) const {
  const Eigen::Index p = transition.rows();
  LinearSSModel model{transition, Matrix::Identity(p, p), Structure::General};
  return simulate(model, Vector::Zero(p), steps,
                  NoiseSpec{transition_std, measurement_std, base_seed + trial});
}

SyntheticVarSpec coupled_var1_spec(std::uint64_t base_seed) {
  SyntheticVarSpec spec;
  spec.transition = 0.6 * Matrix::Identity(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) spec.transition(i, (i + 3) % 4) = 0.3;
  spec.base_seed = base_seed;
  return spec;
}

double off_diagonal_norm(const Matrix& m) {
  Matrix off = m;
  off.diagonal().setZero();
  return off.norm();
}

}  // namespace arden
