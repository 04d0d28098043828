#include "doctest.h"

#include <cstdlib>

#include "arden/error.hpp"
#include "arden/experiments.hpp"
#include "arden/parallel.hpp"
#include "arden/selection.hpp"
#include "support/oracles.hpp"

using namespace arden;

namespace {

FitConfig scan_config(std::size_t iterations) {
  FitConfig c;
  c.rho = 0.1;
  c.max_iterations = iterations;
  return c;
}

}  // namespace

TEST_CASE("lower median") {
  CHECK(lower_median({3.0}) == 3.0);
  CHECK(lower_median({4.0, 1.0}) == 1.0);
  CHECK(lower_median({5.0, 1.0, 3.0}) == 3.0);
  CHECK(lower_median({4.0, 2.0, 3.0, 1.0}) == 2.0);
  CHECK_THROWS_AS(lower_median({}), Error);
}

TEST_CASE("unit-circle generator") {
  const SyntheticARSpec spec = unit_circle_ar5_spec(10);
  const auto roots = companion_eigenvalues(std::span<const double>(spec.theta.data(), 5));
  for (const Complex& z : roots) CHECK(std::abs(std::abs(z) - 1.0) < 1e-8);
  CHECK(spec.x1 == (Vector(5) << 1, 0, 0, 0, 0).finished());

  // Trial i is the plain simulation at seed base + i.
  const Simulation direct = simulate(build_companion(ARParams(spec.theta)), spec.x1, 200,
                                     NoiseSpec{0.1, 1.0, 13});
  CHECK(spec.simulate_trial(3).measurements.values() == direct.measurements.values());
}

TEST_CASE("scan on noise-free data reaches zero loss at the true order") {
  oracle::Gen g(71);
  const Vector theta = g.stable_ar(3);
  const Vector y = g.ar_series(theta, 100, 0.0, 0.0);
  const OrderScanReport report = order_scan(TimeSeries::scalar(y), {3, 1, 2}, scan_config(20));
  REQUIRE(report.per_r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(report.per_r[i].order == i + 1);
  CHECK(report.per_r[2].normalized_loss < 1e-12);
  CHECK(report.num_trials == 1);
  // Exact AR(3) data leaves an order-5 embedding rank deficient.
  CHECK_THROWS_AS(order_scan(TimeSeries::scalar(y), {5}, scan_config(20)), Error);
  CHECK_THROWS_AS(order_scan(TimeSeries::scalar(y), {2, 2}, scan_config(5)), Error);
  CHECK_THROWS_AS(order_scan(TimeSeries::scalar(y), {}, scan_config(5)), Error);
}

TEST_CASE("multi-trial scan is deterministic and independent of the worker count") {
  const SyntheticARSpec spec = unit_circle_ar5_spec(5);
  const std::vector<std::size_t> orders{2, 5};

  setenv("ARDEN_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const OrderScanReport serial = order_scan(spec, orders, scan_config(10), 6);
  setenv("ARDEN_THREADS", "4", 1);
  CHECK(worker_count() == 4);
  const OrderScanReport threaded = order_scan(spec, orders, scan_config(10), 6);
  unsetenv("ARDEN_THREADS");

  REQUIRE(serial.trials.size() == 12);
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    CHECK(serial.trials[i].order == threaded.trials[i].order);
    CHECK(serial.trials[i].trial == threaded.trials[i].trial);
    CHECK(serial.trials[i].normalized_loss == threaded.trials[i].normalized_loss);
    CHECK(serial.trials[i].min_eig_magnitude == threaded.trials[i].min_eig_magnitude);
  }
  for (std::size_t i = 0; i < serial.per_r.size(); ++i) {
    CHECK(serial.per_r[i].normalized_loss == threaded.per_r[i].normalized_loss);
  }

  // Trial records match standalone fits.
  FitConfig c = scan_config(10);
  c.order = 5;
  const FitResult fit = fit_ar(spec.simulate_trial(4).measurements, c);
  const auto& rec = serial.trials[6 + 4];
  CHECK(rec.order == 5);
  CHECK(rec.trial == 4);
  CHECK(rec.normalized_loss == fit.loss_history.back().normalized);
  CHECK(rec.min_eig_magnitude == fit.min_eig_magnitude);
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  setenv("ARDEN_THREADS", "3", 1);
  std::vector<int> hits(20, 0);
  try {
    parallel_for(20, [&](std::size_t i) {
      hits[i] = 1;
      if (i == 7 || i == 13) fail(ErrorKind::InvalidArgument, "index " + std::to_string(i));
    });
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("index 7") != std::string::npos);
  }
  unsetenv("ARDEN_THREADS");
  int total = 0;
  for (int h : hits) total += h;
  CHECK(total == 20);
}

TEST_CASE("coupled VAR(1): smoothing raises the coupling estimate") {
  const SyntheticVarSpec spec = coupled_var1_spec(0);
  CHECK(off_diagonal_norm(spec.transition) == doctest::Approx(0.6));
  FitConfig c;
  c.order = 1;
  c.rho = 1.0;
  c.max_iterations = 100;
  std::vector<double> first, final_;
  int raised = 0;
  const int trials = 50;
  for (int i = 0; i < trials; ++i) {
    const FitResult fit = fit_var1(spec.simulate_trial(static_cast<std::size_t>(i)).measurements, c);
    const double a1 = off_diagonal_norm(fit.coefficient_history.front());
    const double an = off_diagonal_norm(fit.transition);
    first.push_back(a1);
    final_.push_back(an);
    raised += an >= a1;
  }
  MESSAGE("coupling raised in " << raised << "/" << trials << " trials; median first "
                                << lower_median(first) << ", final " << lower_median(final_));
  CHECK(raised >= 45);
  CHECK(lower_median(final_) >= lower_median(first));
}
