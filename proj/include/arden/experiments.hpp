#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "arden/estimator_linear.hpp"
#include "arden/estimator_nar.hpp"
#include "arden/selection.hpp"

namespace arden {

// ---------------------------------------------------------------------------
// Convergence of the linear fit towards a known generator

struct ConvergenceTrial {
  std::size_t trial = 0;
  std::vector<double> e_norm_theta;  // one entry per iteration
  Vector e_theta_first;
  Vector e_theta_final;
  double e_x_raw = 0.0;    // measurements against the noiseless trajectory
  double e_x_first = 0.0;  // denoised after iteration 1
  double e_x_final = 0.0;
};

struct ConvergenceStudyReport {
  std::vector<ConvergenceTrial> trials;
  double threshold = 0.05;
  std::size_t near_truth = 0;  // final e_norm_theta < threshold
  std::size_t denoised = 0;    // e_x_final < e_x_raw
};

ConvergenceStudyReport convergence_study(const SyntheticARSpec& spec, const FitConfig& config,
                                         std::size_t num_trials, double threshold = 0.05);

// ---------------------------------------------------------------------------
// Artefact robustness of the signature model

struct ArtefactStudySpec {
  Vector theta;
  std::size_t train_steps = 400;
  std::size_t test_steps = 400;
  std::size_t burn_in = 200;
  double transition_std = 1.0;
  double measurement_std = 0.5;
  // 1-based inclusive window replaced by white noise in the training part.
  std::size_t artefact_start = 150;
  std::size_t artefact_end = 250;
  // Artefact std as a multiple of the training sample std.
  double artefact_scale = 3.0;
  std::uint64_t base_seed = 0;
};

/// Damped 10 Hz and 25 Hz rhythms at 400 Hz sampling plus a real root at -0.5.
ArtefactStudySpec eeg_rhythm_ar5_spec(std::uint64_t base_seed = 0);

struct ArtefactCase {
  Vector truth;  // noiseless training signal
  Vector clean;  // measured training signal before injection
  Vector train;  // with the artefact window replaced
  Vector test;   // clean continuation
  double artefact_std = 0.0;
};

ArtefactCase make_artefact_case(const ArtefactStudySpec& spec, std::size_t trial);

struct ArtefactTrial {
  std::size_t trial = 0;
  double rmse_raw = 0.0;       // artefact window, measurements vs truth
  double rmse_denoised = 0.0;  // artefact window, yhat vs truth
  double mse_first = 0.0;      // one-step test error, iteration-1 model
  double mse_final = 0.0;      // one-step test error, final model
  bool window_improved = false;
  bool prediction_improved = false;
};

struct ArtefactStudyReport {
  std::vector<ArtefactTrial> trials;
  std::size_t window_improved = 0;
  std::size_t prediction_improved = 0;
  std::size_t both_improved = 0;
};

ArtefactTrial evaluate_artefact_case(const ArtefactStudySpec& spec, const ArtefactCase& data,
                                     const NarFitResult& fit, std::size_t trial);

ArtefactStudyReport artefact_study(const ArtefactStudySpec& spec, const NarFitConfig& config,
                                   std::size_t num_trials);

// ---------------------------------------------------------------------------
// Coupled VAR(1) generator

struct SyntheticVarSpec {
  Matrix transition;
  std::size_t steps = 400;
  double transition_std = 1.0;
  double measurement_std = 1.0;
  std::uint64_t base_seed = 0;

  Simulation simulate_trial(std::size_t trial) const;
};

/// Four channels, self-coupling 0.6 and a directed ring of 0.3 couplings.
SyntheticVarSpec coupled_var1_spec(std::uint64_t base_seed = 0);

double off_diagonal_norm(const Matrix& m);

}  // namespace arden
