#include "doctest.h"

#include <cmath>

#include "arden/error.hpp"
#include "arden/estimator_linear.hpp"
#include "support/oracles.hpp"

using namespace arden;

namespace {

Vector noise_free_ar(const Vector& theta, std::size_t steps, oracle::Gen& g) {
  return g.ar_series(theta, steps, 0.0, 0.0);
}

FitConfig config(std::size_t order, double rho, double lambda = 0.0, std::size_t iters = 100) {
  FitConfig c;
  c.order = order;
  c.rho = rho;
  c.lambda = lambda;
  c.max_iterations = iters;
  return c;
}

}  // namespace

TEST_CASE("loss: hand-computed ranges") {
  const Vector y = Vector::LinSpaced(3, 1, 3);
  const Vector y_hat = (Vector(3) << 1, 2, 2.5).finished();
  const LossBreakdown l = evaluate_loss(ARParams(Vector::Ones(1)), y_hat, y, 2.0);
  CHECK(l.dynamics_term == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(l.measurement_term == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(l.total == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(l.normalized == doctest::Approx(1.75 / 3));
  CHECK(l.penalized == l.total);
}

TEST_CASE("loss: exact model gives zero, rho enters linearly, oracle agreement") {
  oracle::Gen g(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = g.index(1, 6);
    const Vector theta = g.stable_ar(r);
    const Vector clean = noise_free_ar(theta, 60, g);
    const LossBreakdown zero = evaluate_loss(ARParams(theta), clean, clean, 0.3);
    CHECK(zero.dynamics_term < 1e-20 * std::max(1.0, clean.squaredNorm()));
    CHECK(zero.measurement_term == 0.0);

    const Vector y = clean + g.normal_vector(60);
    const Vector y_hat = clean + 0.1 * g.normal_vector(60);
    for (bool from_start : {true, false}) {
      const LossBreakdown a = evaluate_loss(ARParams(theta), y_hat, y, 0.5, from_start);
      const LossBreakdown b = evaluate_loss(ARParams(theta), y_hat, y, 1.0, from_start);
      CHECK((b.total - b.dynamics_term) == doctest::Approx(2 * (a.total - a.dynamics_term)).epsilon(1e-14));
      CHECK(a.total == doctest::Approx(a.dynamics_term + 0.5 * a.measurement_term).epsilon(1e-12));
      const oracle::Loss o = oracle::ar_loss(theta, y_hat, y, 0.5, from_start);
      CHECK(a.dynamics_term == doctest::Approx(o.dynamics).epsilon(1e-12));
      CHECK(a.measurement_term == doctest::Approx(o.measurement).epsilon(1e-12));
    }
  }
}

TEST_CASE("loss: short horizon") {
  try {
    evaluate_loss(ARParams(Vector::Ones(3)), Vector::Ones(3), Vector::Ones(3), 1.0);
    FAIL("accepted N <= r");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HorizonTooShort);
  }
}

TEST_CASE("parameter step") {
  oracle::Gen g(32);
  const Vector theta = g.stable_ar(4);
  const Vector clean = noise_free_ar(theta, 80, g);
  CHECK((param_step(clean, 4, 0.0).theta - theta).norm() < 1e-10 * theta.norm());

  // Constant series: y_{t+1} = 1 * y_t.
  CHECK(param_step(Vector::Constant(10, 2.5), 1, 0.0).theta[0] == doctest::Approx(1.0).epsilon(1e-14));

  const Vector noisy = g.normal_vector(50);
  const DelayEmbedding e = delay_embed(noisy, 3);
  const Matrix expected = solve_regularized_ls(e.gamma, e.y_plus, 0.5);
  CHECK(param_step(noisy, 3, 0.5).theta == Vector(expected.col(0)));
  CHECK(oracle::rel_error(param_step(noisy, 3, 0.5).theta, oracle::ridge(e.gamma, e.y_plus, 0.5)) < 1e-10);
}

TEST_CASE("state step: fixed point, large rho and dense oracle") {
  oracle::Gen g(33);
  const Vector theta = g.stable_ar(3);
  const Vector clean = noise_free_ar(theta, 60, g);
  CHECK((state_step(ARParams(theta), clean, 0.1, 0.0) - clean).norm() < 1e-9 * clean.norm());

  const Vector y = g.normal_vector(60);
  const Vector big_rho = state_step(ARParams(theta), y, 1e8, 0.0);
  CHECK((big_rho - y).norm() / y.norm() < 1e-3);

  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = g.index(1, 6);
    const Vector th = g.normal_vector(static_cast<Eigen::Index>(r));
    const Vector obs = g.normal_vector(30);
    const double rho = g.uniform(0.01, 2.0);
    const double lambda = trial % 2 ? 0.0 : g.uniform(0.0, 0.5);
    for (bool from_start : {true, false}) {
      const Vector got = state_step(ARParams(th), obs, rho, lambda, from_start);
      const Vector want = oracle::ar_state_minimizer(th, obs, rho, lambda, from_start);
      const Matrix h = std::get<BandedSPDMatrix>(assemble_ar_smoother(ARParams(th), obs, rho, lambda, from_start).normal).to_dense();
      CHECK(oracle::rel_error(got, want) < std::max(1e-12, 1e-14 * oracle::condition(h)));
    }
  }
}

TEST_CASE("state step: assembled normal matrix equals the explicit Hessian") {
  oracle::Gen g(34);
  const Vector th = g.normal_vector(3);
  const Vector y = g.normal_vector(12);
  const SmootherSystem sys = assemble_ar_smoother(ARParams(th), y, 0.7, 0.2, false);
  const Matrix d = oracle::ar_dynamics_operator(th, 12);
  Matrix h = d.transpose() * d;
  Vector mask = Vector::Ones(12);
  mask.head(2).setZero();
  h.diagonal() += 0.7 * mask + 0.2 * Vector::Ones(12);
  const Matrix dense = std::get<BandedSPDMatrix>(sys.normal).to_dense();
  CHECK((dense - h).norm() < 1e-13 * h.norm());
  CHECK((sys.rhs - 0.7 * mask.cwiseProduct(y)).norm() < 1e-15);
}

TEST_CASE("fit: noise-free data is recovered in one iteration") {
  oracle::Gen g(35);
  const Vector theta = g.stable_ar(5);
  const Vector clean = noise_free_ar(theta, 120, g);
  const FitResult fit = fit_ar(TimeSeries::scalar(clean), config(5, 0.1));
  CHECK(fit.converged);
  CHECK(fit.iterations_run == 1);
  CHECK((fit.theta - theta).norm() < 1e-9 * theta.norm());
  CHECK(fit.loss_history.front().total < 1e-18 * clean.squaredNorm());
}

TEST_CASE("fit: first iterate is the plain least-squares estimate") {
  oracle::Gen g(36);
  const Vector theta = g.stable_ar(4);
  const Vector y = g.ar_series(theta, 150, 0.3, 1.0);
  const FitResult fit = fit_ar(TimeSeries::scalar(y), config(4, 0.1, 0.0, 10));
  const DelayEmbedding e = delay_embed(y, 4);
  CHECK(fit.coefficient_history.front() == solve_regularized_ls(e.gamma, e.y_plus, 0.0));
  CHECK(fit.loss_history.size() == fit.iterations_run);
  CHECK(fit.coefficient_history.size() == fit.iterations_run);
  CHECK(fit.min_eig_magnitude == doctest::Approx(min_magnitude(fit.eigenvalues)));
  CHECK(fit.transition.row(0) == fit.theta.transpose());
}

TEST_CASE("fit: loss is non-increasing (lambda = 0) and penalized objective too (lambda > 0)") {
  oracle::Gen g(37);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = g.index(1, 6);
    const Vector theta = g.stable_ar(r, 0.3, 1.0);
    const Vector y = g.ar_series(theta, g.index(50, 200), g.uniform(0.01, 1.0), g.uniform(0.1, 2.0));
    const double lambda = trial % 2 ? 0.0 : 0.05;
    const FitResult fit = fit_ar(TimeSeries::scalar(y), config(r, 0.1, lambda, 30));
    for (std::size_t i = 1; i < fit.loss_history.size(); ++i) {
      const auto& prev = fit.loss_history[i - 1];
      const auto& cur = fit.loss_history[i];
      CHECK(cur.penalized <= prev.penalized * (1 + 1e-9));
      if (lambda == 0.0) CHECK(cur.total <= prev.total * (1 + 1e-9));
    }
  }
}

TEST_CASE("fit: deterministic") {
  oracle::Gen g(38);
  const Vector y = g.ar_series(g.stable_ar(3), 100, 0.5, 0.5);
  const FitResult a = fit_ar(TimeSeries::scalar(y), config(3, 0.1, 0.0, 20));
  const FitResult b = fit_ar(TimeSeries::scalar(y), config(3, 0.1, 0.0, 20));
  CHECK(a.theta == b.theta);
  CHECK(a.y_hat.values() == b.y_hat.values());
}

TEST_CASE("fit: invalid configuration") {
  FitConfig c = config(2, 0.0);
  CHECK_THROWS_AS(fit_ar(TimeSeries::scalar(Vector::Ones(10)), c), Error);
  c = config(20, 0.1);
  try {
    fit_ar(TimeSeries::scalar(Vector::LinSpaced(10, 0, 1)), c);
    FAIL("accepted N <= r");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HorizonTooShort);
  }
}

TEST_CASE("VAR(1): scalar case reduces to AR(1)") {
  oracle::Gen g(39);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector y = g.ar_series(Vector::Constant(1, g.uniform(-0.9, 0.9)), 80, 0.5, 0.5);
    const FitResult ar = fit_ar(TimeSeries::scalar(y), config(1, 0.3, 0.0, 25));
    const FitResult var = fit_var1(TimeSeries(Matrix(y)), config(1, 0.3, 0.0, 25));
    CHECK(std::abs(var.transition(0, 0) - ar.theta[0]) < 1e-12);
    CHECK((var.y_hat.values() - ar.y_hat.values()).norm() < 1e-12 * y.norm());
  }
}

TEST_CASE("VAR(1): noise-free data recovered after one iteration") {
  oracle::Gen g(40);
  Matrix a = 0.3 * g.normal_matrix(3, 3);
  a /= std::max(1.0, 1.25 * a.norm());
  Matrix x(60, 3);
  x.row(0) = g.normal_vector(3).transpose();
  for (Eigen::Index t = 1; t < 60; ++t) x.row(t) = (a * x.row(t - 1).transpose()).transpose();
  const FitResult fit = fit_var1(TimeSeries(x), config(1, 1.0));
  CHECK(oracle::rel_error(fit.coefficient_history.front(), a) < 1e-10);
  CHECK(fit.iterations_run == 1);
}

TEST_CASE("VAR(1): state step matches dense oracle and the loss is monotone") {
  oracle::Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = static_cast<Eigen::Index>(g.index(1, 4));
    const Eigen::Index n = 15;
    const Matrix a = 0.5 * g.normal_matrix(p, p);
    const Matrix y = g.normal_matrix(n, p);
    const double rho = g.uniform(0.1, 2.0);
    const double lambda = trial % 2 ? 0.0 : 0.1;

    // Objective |D x|^2 + rho |x - y|^2 + lambda |x|^2 over the time-major stack.
    Matrix d = Matrix::Zero((n - 1) * p, n * p);
    for (Eigen::Index t = 0; t + 1 < n; ++t) {
      d.block(t * p, (t + 1) * p, p, p) = Matrix::Identity(p, p);
      d.block(t * p, t * p, p, p) = -a;
    }
    Matrix h = d.transpose() * d;
    h.diagonal().array() += rho + lambda;
    Vector stacked_y(n * p);
    for (Eigen::Index t = 0; t < n; ++t) stacked_y.segment(t * p, p) = y.row(t).transpose();
    const Vector want = oracle::dense_solve(h, Vector(rho * stacked_y));
    const Matrix got = var_state_step(a, y, rho, lambda);
    Vector got_stacked(n * p);
    for (Eigen::Index t = 0; t < n; ++t) got_stacked.segment(t * p, p) = got.row(t).transpose();
    CHECK(oracle::rel_error(got_stacked, want) < 1e-10);

    const Matrix w = var_param_step(y, lambda);
    CHECK(oracle::rel_error(w, oracle::ridge(y.topRows(n - 1), y.bottomRows(n - 1), lambda).transpose()) < 1e-10);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix y = g.normal_matrix(40, 3).array() + 1.0;
    const FitResult fit = fit_var1(TimeSeries(y), config(1, 0.5, 0.0, 30));
    for (std::size_t i = 1; i < fit.loss_history.size(); ++i) {
      CHECK(fit.loss_history[i].total <= fit.loss_history[i - 1].total * (1 + 1e-9));
    }
  }
}

TEST_CASE("error metrics") {
  const Vector t = (Vector(2) << 3, 4).finished();
  const Matrix x = Matrix::Ones(4, 1);
  CHECK(error_metrics(t, t, x, x).e_norm_theta == 0.0);
  CHECK(error_metrics(2 * t, t, x, x).e_norm_theta == doctest::Approx(1.0));
  const ErrorMetrics m = error_metrics((Vector(2) << 3, 1).finished(), t, 2 * x, x);
  CHECK(m.e_norm_theta == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m.e_theta(1, 0) == doctest::Approx(-0.6));
  CHECK(m.e_x == doctest::Approx(1.0));
  try {
    error_metrics(t, Vector::Zero(2), x, x);
    FAIL("zero reference accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroNormReference);
  }
}
