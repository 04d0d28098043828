#include "arden/selection.hpp"

#include <algorithm>
#include <numbers>

#include "arden/error.hpp"
#include "arden/parallel.hpp"

namespace arden {

Simulation SyntheticARSpec::simulate_trial(std::size_t trial) const {
  const LinearSSModel model = build_companion(ARParams(theta));
  return simulate(model, x1, steps,
                  NoiseSpec{transition_std, measurement_std, base_seed + trial});
}

SyntheticARSpec unit_circle_ar5_spec(std::uint64_t base_seed) {
  std::vector<Complex> roots;
  for (int i = 0; i < 5; ++i) {
    roots.push_back(std::polar(1.0, 3.0 * std::numbers::pi / 5.0 + i * std::numbers::pi / 5.0));
  }
  SyntheticARSpec spec;
  spec.theta = coefficients_from_roots(roots).theta;
  spec.x1 = Vector::Zero(5);
  spec.x1[0] = 1.0;
  spec.steps = 200;
  spec.transition_std = 0.1;
  spec.measurement_std = 1.0;
  spec.base_seed = base_seed;
  return spec;
}

double lower_median(std::vector<double> values) {
  require(!values.empty(), ErrorKind::InvalidArgument, "median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

namespace {

OrderScanTrial run_one(const TimeSeries& y, std::size_t order, std::size_t trial,
                       const FitConfig& base) {
  FitConfig config = base;
  config.order = order;
  const FitResult fit = fit_ar(y, config);
  const Matrix& first = fit.coefficient_history.front();
  return OrderScanTrial{
      .order = order,
      .trial = trial,
      .normalized_loss = fit.loss_history.back().normalized,
      .min_eig_magnitude = fit.min_eig_magnitude,
      .min_eig_iter1 = min_magnitude(companion_eigenvalues(std::span<const double>(first.data(), first.size()))),
      .iterations = fit.iterations_run,
  };
}

OrderScanReport aggregate(std::vector<OrderScanTrial> trials, const std::vector<std::size_t>& orders,
                          std::size_t num_trials) {
  OrderScanReport report;
  report.num_trials = num_trials;
  std::vector<std::size_t> sorted = orders;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t r : sorted) {
    std::vector<double> loss, eig, eig1;
    for (const auto& t : trials) {
      if (t.order != r) continue;
      loss.push_back(t.normalized_loss);
      eig.push_back(t.min_eig_magnitude);
      eig1.push_back(t.min_eig_iter1);
    }
    report.per_r.push_back({r, lower_median(loss), lower_median(eig), lower_median(eig1)});
  }
  std::sort(trials.begin(), trials.end(), [](const auto& a, const auto& b) {
    return a.order != b.order ? a.order < b.order : a.trial < b.trial;
  });
  report.trials = std::move(trials);
  return report;
}

void check_orders(const std::vector<std::size_t>& orders) {
  require(!orders.empty(), ErrorKind::InvalidArgument, "order list is empty");
  std::vector<std::size_t> sorted = orders;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          ErrorKind::InvalidArgument, "order list has duplicates");
}

}  // namespace

OrderScanReport order_scan(const TimeSeries& y, const std::vector<std::size_t>& orders,
                           const FitConfig& config) {
  check_orders(orders);
  std::vector<OrderScanTrial> trials(orders.size());
  parallel_for(orders.size(), [&](std::size_t i) { trials[i] = run_one(y, orders[i], 0, config); });
  return aggregate(std::move(trials), orders, 1);
}

OrderScanReport order_scan(const SyntheticARSpec& spec, const std::vector<std::size_t>& orders,
                           const FitConfig& config, std::size_t num_trials) {
  check_orders(orders);
  require(num_trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
  std::vector<TimeSeries> series;
  series.reserve(num_trials);
  for (std::size_t t = 0; t < num_trials; ++t) series.push_back(spec.simulate_trial(t).measurements);

  const std::size_t jobs = orders.size() * num_trials;
  std::vector<OrderScanTrial> trials(jobs);
  parallel_for(jobs, [&](std::size_t k) {
    const std::size_t oi = k / num_trials, trial = k % num_trials;
    trials[k] = run_one(series[trial], orders[oi], trial, config);
  });
  return aggregate(std::move(trials), orders, num_trials);
}

}  // namespace arden
