#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "arden/estimator_linear.hpp"
#include "arden/model.hpp"

namespace arden {

/// Recipe for Monte Carlo trials of a companion AR model; trial i uses seed
/// base_seed + i.
struct SyntheticARSpec {
  Vector theta;
  Vector x1;
  std::size_t steps = 200;
  double transition_std = 0.1;
  double measurement_std = 1.0;
  std::uint64_t base_seed = 0;

  Simulation simulate_trial(std::size_t trial) const;
};

/// Five unit-modulus roots at angles 3pi/5 .. 7pi/5, x1 = e_1, N = 200,
/// transition std 0.1 and measurement std 1.
SyntheticARSpec unit_circle_ar5_spec(std::uint64_t base_seed = 0);

struct OrderScanTrial {
  std::size_t order = 0;
  std::size_t trial = 0;
  double normalized_loss = 0.0;
  double min_eig_magnitude = 0.0;
  double min_eig_iter1 = 0.0;
  std::size_t iterations = 0;
};

struct OrderScanEntry {
  std::size_t order = 0;
  double normalized_loss = 0.0;
  double min_eig_magnitude = 0.0;
  double min_eig_iter1 = 0.0;
};

struct OrderScanReport {
  std::vector<OrderScanEntry> per_r;  // ascending order, medians over trials
  std::vector<OrderScanTrial> trials; // sorted by (order, trial)
  std::size_t num_trials = 0;
};

/// Lower median: element (n - 1) / 2 of the sorted values.
double lower_median(std::vector<double> values);

OrderScanReport order_scan(const TimeSeries& y, const std::vector<std::size_t>& orders,
                           const FitConfig& config);

OrderScanReport order_scan(const SyntheticARSpec& spec, const std::vector<std::size_t>& orders,
                           const FitConfig& config, std::size_t num_trials);

}  // namespace arden
