#include "arden/runner.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>

#include "json.hpp"

#include "arden/error.hpp"
#include "arden/experiments.hpp"

namespace arden {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// JSON helpers

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

json to_json(const std::vector<Complex>& values) {
  json out = json::array();
  for (const Complex& c : values) out.push_back({c.real(), c.imag()});
  return out;
}

json to_json(const std::vector<LossBreakdown>& history) {
  json out = json::array();
  for (const auto& l : history) {
    out.push_back({{"dynamics", l.dynamics_term},
                   {"measurement", l.measurement_term},
                   {"total", l.total},
                   {"normalized", l.normalized},
                   {"penalized", l.penalized}});
  }
  return out;
}

Matrix matrix_from_json(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = n ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = rows.at(i).at(j).get<double>();
  }
  return out;
}

Vector vector_from_json(const json& values) {
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = values.at(i).get<double>();
  return out;
}

// ---------------------------------------------------------------------------
// Shared plumbing

struct RunContext {
  const ExperimentConfig& config;
  fs::path out_dir;
  json files = json::array();
  std::map<std::string, double> timings;

  fs::path file(const std::string& name) {
    files.push_back(name);
    return out_dir / name;
  }

  template <typename F>
  auto timed(const std::string& label, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto result = f();
    timings[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
};

Matrix loss_table(const std::vector<LossBreakdown>& history) {
  Matrix out(static_cast<Eigen::Index>(history.size()), 6);
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& l = history[i];
    out.row(static_cast<Eigen::Index>(i)) << static_cast<double>(i + 1), l.dynamics_term,
        l.measurement_term, l.total, l.normalized, l.penalized;
  }
  return out;
}

const std::vector<std::string> kLossHeader{"iteration", "dynamics", "measurement",
                                           "total",     "normalized", "penalized"};

TimeSeries load_input(const ExperimentConfig& c, const fs::path& path) {
  TimeSeries y = load_csv(path, c.has_header);
  if (c.difference) y = first_difference(y);
  return y;
}

Vector scalar_input(const ExperimentConfig& c, const fs::path& path) {
  return load_input(c, path).column(c.channel);
}

SyntheticARSpec ar_spec(const ExperimentConfig& c) {
  if (!c.synthetic.empty() && c.synthetic != "unit-circle-ar5") {
    fail(ErrorKind::InvalidArgument, "synthetic generator '" + c.synthetic +
                                         "' is not an AR(5) trial generator; use unit-circle-ar5");
  }
  SyntheticARSpec spec = unit_circle_ar5_spec(c.seed);
  if (c.steps) spec.steps = *c.steps;
  if (c.transition_std) spec.transition_std = *c.transition_std;
  if (c.measurement_std) spec.measurement_std = *c.measurement_std;
  return spec;
}

ArtefactStudySpec artefact_spec(const ExperimentConfig& c) {
  ArtefactStudySpec spec = eeg_rhythm_ar5_spec(c.seed);
  spec.train_steps = c.train_steps;
  if (c.steps) spec.test_steps = *c.steps;
  if (c.transition_std) spec.transition_std = *c.transition_std;
  if (c.measurement_std) spec.measurement_std = *c.measurement_std;
  spec.artefact_start = c.artefact_start;
  spec.artefact_end = c.artefact_end;
  spec.artefact_scale = c.artefact_scale;
  return spec;
}

SyntheticVarSpec var_spec(const ExperimentConfig& c) {
  SyntheticVarSpec spec = coupled_var1_spec(c.seed);
  if (c.steps) spec.steps = *c.steps;
  if (c.transition_std) spec.transition_std = *c.transition_std;
  if (c.measurement_std) spec.measurement_std = *c.measurement_std;
  return spec;
}

FitConfig linear_config(const ExperimentConfig& c, std::size_t default_order, double default_rho) {
  FitConfig f;
  f.order = c.order.value_or(default_order);
  f.rho = c.rho.value_or(default_rho);
  f.lambda = c.lambda.value_or(0.0);
  f.max_iterations = c.iterations.value_or(100);
  f.convergence_tol = c.tol;
  f.measure_from_start = c.measure_from_start;
  f.validate();
  return f;
}

NarFitConfig nar_config(const ExperimentConfig& c) {
  NarFitConfig f;
  f.order = c.order.value_or(4);
  f.depth = c.depth;
  f.rho = c.rho.value_or(0.1);
  f.lambda = c.lambda.value_or(0.001);
  f.max_iterations = c.iterations.value_or(20);
  f.validate();
  return f;
}

json echo_linear(const FitConfig& f) {
  return {{"order", f.order},       {"rho", f.rho},
          {"lambda", f.lambda},     {"iterations", f.max_iterations},
          {"tol", f.convergence_tol}, {"measure_from_start", f.measure_from_start}};
}

json echo_nar(const NarFitConfig& f) {
  return {{"order", f.order},   {"depth", f.depth},
          {"rho", f.rho},       {"lambda", f.lambda},
          {"iterations", f.max_iterations}, {"change_tol", f.change_tol}};
}

json source_echo(const ExperimentConfig& c) {
  json s = {{"seed", c.seed}};
  if (!c.input.empty()) {
    s["input"] = c.input.string();
    s["has_header"] = c.has_header;
    s["channel"] = c.channel;
    s["difference"] = c.difference;
  } else {
    s["synthetic"] = c.synthetic;
  }
  if (c.steps) s["steps"] = *c.steps;
  if (c.transition_std) s["transition_std"] = *c.transition_std;
  if (c.measurement_std) s["measurement_std"] = *c.measurement_std;
  return s;
}

json nar_model_json(const NARModel& m) {
  return {{"type", "nar"}, {"order", m.order}, {"depth", m.depth},
          {"a_sig", to_json(m.a_sig)}, {"c_sig", to_json(Vector(m.c_sig.row(0).transpose()))}};
}

// ---------------------------------------------------------------------------
// Commands

json cmd_simulate(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const std::string name = c.synthetic.empty() ? "unit-circle-ar5" : c.synthetic;
  Simulation sim{Matrix(), TimeSeries(Matrix::Zero(1, 1))};
  json results;
  if (name == "unit-circle-ar5") {
    const SyntheticARSpec spec = ar_spec(c);
    sim = spec.simulate_trial(0);
    results = {{"theta", to_json(spec.theta)}, {"steps", spec.steps},
               {"transition_std", spec.transition_std}, {"measurement_std", spec.measurement_std}};
  } else if (name == "eeg-rhythm-ar5") {
    const ArtefactStudySpec spec = artefact_spec(c);
    const std::size_t steps = spec.burn_in + spec.train_steps + spec.test_steps;
    sim = simulate(build_companion(ARParams(spec.theta)), Vector::Zero(spec.theta.size()), steps,
                   NoiseSpec{spec.transition_std, spec.measurement_std, spec.base_seed});
    results = {{"theta", to_json(spec.theta)}, {"steps", steps},
               {"transition_std", spec.transition_std}, {"measurement_std", spec.measurement_std}};
  } else if (name == "coupled-var1") {
    const SyntheticVarSpec spec = var_spec(c);
    sim = spec.simulate_trial(0);
    results = {{"transition", to_json(spec.transition)}, {"steps", spec.steps},
               {"transition_std", spec.transition_std}, {"measurement_std", spec.measurement_std}};
  } else {
    fail(ErrorKind::InvalidArgument, "unknown synthetic generator '" + name + "'");
  }
  write_csv(ctx.file("measurements.csv"), sim.measurements);
  write_csv(ctx.file("states.csv"), sim.states);
  results["generator"] = name;
  return results;
}

json cmd_fit_ar(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const FitConfig fc = linear_config(c, 5, 0.1);
  std::optional<Simulation> sim;
  std::optional<SyntheticARSpec> spec;
  Vector y;
  if (!c.input.empty()) {
    y = scalar_input(c, c.input);
  } else {
    spec = ar_spec(c);
    sim = spec->simulate_trial(0);
    y = sim->measurements.column(0);
  }
  const FitResult fit = ctx.timed("fit", [&] { return fit_ar(TimeSeries::scalar(y), fc); });
  const Vector theta_first = fit.coefficient_history.front().col(0);
  const auto eig_first = companion_eigenvalues(std::span<const double>(theta_first.data(), theta_first.size()));

  json results = {
      {"model", {{"type", "ar"}, {"order", fc.order}, {"theta", to_json(fit.theta)}}},
      {"theta_first", to_json(theta_first)},
      {"eigenvalues", to_json(fit.eigenvalues)},
      {"eigenvalues_first", to_json(eig_first)},
      {"min_eig_magnitude", fit.min_eig_magnitude},
      {"min_eig_magnitude_first", min_magnitude(eig_first)},
      {"iterations_run", fit.iterations_run},
      {"converged", fit.converged},
      {"loss_history", to_json(fit.loss_history)},
  };
  if (spec) {
    const Matrix truth = sim->states.col(0);
    const auto first = error_metrics(theta_first, spec->theta, fit.y_hat_first, truth);
    const auto final_m = error_metrics(fit.theta, spec->theta, fit.y_hat.values(), truth);
    const auto raw = error_metrics(spec->theta, spec->theta, Matrix(y), truth);
    results["metrics"] = {{"e_norm_theta_first", first.e_norm_theta},
                          {"e_norm_theta", final_m.e_norm_theta},
                          {"e_theta_first", to_json(Matrix(first.e_theta))},
                          {"e_theta", to_json(Matrix(final_m.e_theta))},
                          {"e_x_raw", raw.e_x},
                          {"e_x_first", first.e_x},
                          {"e_x", final_m.e_x}};
  }

  Matrix table(y.size(), 4);
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    table.row(t) << static_cast<double>(t + 1), y[t], fit.y_hat_first(t, 0), fit.y_hat.values()(t, 0);
  }
  write_csv(ctx.file("denoised.csv"), table, {"t", "y", "y_hat_first", "y_hat"});
  write_csv(ctx.file("loss_history.csv"), loss_table(fit.loss_history), kLossHeader);
  results["fit_config"] = echo_linear(fc);
  return results;
}

json cmd_fit_var(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  FitConfig fc = linear_config(c, 1, 1.0);
  if (fc.order != 1) fail(ErrorKind::InvalidArgument, "fit-var supports order 1 only");
  std::optional<SyntheticVarSpec> spec;
  Matrix y;
  if (!c.input.empty()) {
    y = load_input(c, c.input).values();
  } else {
    spec = var_spec(c);
    y = spec->simulate_trial(0).measurements.values();
  }
  const FitResult fit = ctx.timed("fit", [&] { return fit_var1(TimeSeries(y), fc); });
  const Matrix& a_first = fit.coefficient_history.front();

  json results = {
      {"transition_first", to_json(a_first)},
      {"transition", to_json(fit.transition)},
      {"off_diagonal_norm_first", off_diagonal_norm(a_first)},
      {"off_diagonal_norm", off_diagonal_norm(fit.transition)},
      {"eigenvalues", to_json(fit.eigenvalues)},
      {"min_eig_magnitude", fit.min_eig_magnitude},
      {"iterations_run", fit.iterations_run},
      {"converged", fit.converged},
      {"loss_history", to_json(fit.loss_history)},
  };
  if (spec) results["true_transition"] = to_json(spec->transition);

  auto long_table = [](const Matrix& a) {
    Matrix out(a.size(), 4);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out.row(k++) << static_cast<double>(i + 1), static_cast<double>(j + 1), a(i, j), std::abs(a(i, j));
      }
    }
    return out;
  };
  const std::vector<std::string> header{"row", "col", "value", "abs_value"};
  write_csv(ctx.file("transition_first.csv"), long_table(a_first), header);
  write_csv(ctx.file("transition_final.csv"), long_table(fit.transition), header);
  write_csv(ctx.file("denoised.csv"), fit.y_hat.values());
  write_csv(ctx.file("loss_history.csv"), loss_table(fit.loss_history), kLossHeader);
  results["fit_config"] = echo_linear(fc);
  return results;
}

json cmd_fit_nar(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const NarFitConfig fc = nar_config(c);
  Vector train, test, truth;
  json source;
  if (!c.input.empty()) {
    const Vector all = scalar_input(c, c.input);
    if (!c.test_input.empty()) {
      train = all;
      test = scalar_input(c, c.test_input);
    } else if (static_cast<std::size_t>(all.size()) > c.train_steps) {
      train = all.head(static_cast<Eigen::Index>(c.train_steps));
      test = all.tail(all.size() - static_cast<Eigen::Index>(c.train_steps));
    } else {
      train = all;
    }
    if (c.inject) {
      const double std = c.artefact_std.value_or(
          c.artefact_scale * std::sqrt((train.array() - train.mean()).square().mean()));
      train = inject_artefact(TimeSeries::scalar(train), 0, c.artefact_start, c.artefact_end, std,
                              c.seed)
                  .column(0);
      source["artefact_std"] = std;
    }
  } else {
    const ArtefactStudySpec spec = artefact_spec(c);
    const ArtefactCase data = make_artefact_case(spec, 0);
    train = data.train;
    test = data.test;
    truth = data.truth;
    source["artefact_std"] = data.artefact_std;
  }

  const NarFitResult fit = ctx.timed("fit", [&] { return fit_nar(TimeSeries::scalar(train), fc); });
  const Vector y_hat = fit.y_hat.column(0);
  json results = {
      {"model", nar_model_json(fit.model)},
      {"model_first", nar_model_json(fit.first_model)},
      {"iterations_run", fit.iterations_run},
      {"converged", fit.converged},
      {"loss_history", to_json(fit.loss_history)},
  };
  if (!source.empty()) results["artefact"] = source;

  Matrix table(train.size(), 4);
  for (Eigen::Index t = 0; t < train.size(); ++t) {
    table.row(t) << static_cast<double>(t + 1), train[t], fit.y_hat_first(t, 0), y_hat[t];
  }
  write_csv(ctx.file("denoised.csv"), table, {"t", "y", "y_hat_first", "y_hat"});
  write_csv(ctx.file("loss_history.csv"), loss_table(fit.loss_history), kLossHeader);

  if (truth.size() > 0 && c.artefact_end <= static_cast<std::size_t>(train.size())) {
    const auto start = static_cast<Eigen::Index>(c.artefact_start - 1);
    const auto len = static_cast<Eigen::Index>(c.artefact_end - c.artefact_start + 1);
    const Vector w = truth.segment(start, len);
    results["window_rmse_raw"] = std::sqrt((train.segment(start, len) - w).squaredNorm() / static_cast<double>(len));
    results["window_rmse_denoised"] = std::sqrt((y_hat.segment(start, len) - w).squaredNorm() / static_cast<double>(len));
  }
  if (test.size() > static_cast<Eigen::Index>(fc.order)) {
    results["test_mse_first"] = nar_one_step_mse(fit.first_model, test);
    results["test_mse"] = nar_one_step_mse(fit.model, test);
    const Vector ctx_test = test.head(test.size() - 1);
    const Vector p_first = nar_predict_one_step(fit.first_model, ctx_test);
    const Vector p_final = nar_predict_one_step(fit.model, ctx_test);
    const Eigen::Index offset = test.size() - p_first.size();
    Matrix pred(p_first.size(), 4);
    for (Eigen::Index j = 0; j < p_first.size(); ++j) {
      pred.row(j) << static_cast<double>(offset + j + 1), test[offset + j], p_first[j], p_final[j];
    }
    write_csv(ctx.file("predictions.csv"), pred, {"t", "actual", "predicted_first", "predicted"});
  }
  results["fit_config"] = echo_nar(fc);
  return results;
}

std::vector<std::size_t> scan_orders(const ExperimentConfig& c) {
  require(c.r_min >= 1 && c.r_min <= c.r_max, ErrorKind::InvalidArgument,
          "order range must satisfy 1 <= r_min <= r_max");
  std::vector<std::size_t> orders;
  for (std::size_t r = c.r_min; r <= c.r_max; ++r) orders.push_back(r);
  return orders;
}

json cmd_order_scan(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const FitConfig fc = linear_config(c, 1, 0.1);
  const auto orders = scan_orders(c);
  const OrderScanReport report = ctx.timed("scan", [&] {
    if (!c.input.empty()) {
      return order_scan(TimeSeries::scalar(scalar_input(c, c.input)), orders, fc);
    }
    return order_scan(ar_spec(c), orders, fc, c.trials);
  });

  json per_r = json::array();
  Matrix summary(static_cast<Eigen::Index>(report.per_r.size()), 4);
  for (std::size_t i = 0; i < report.per_r.size(); ++i) {
    const auto& e = report.per_r[i];
    per_r.push_back({{"order", e.order},
                     {"normalized_loss", e.normalized_loss},
                     {"min_eig_magnitude", e.min_eig_magnitude},
                     {"min_eig_iter1", e.min_eig_iter1}});
    summary.row(static_cast<Eigen::Index>(i)) << static_cast<double>(e.order), e.normalized_loss,
        e.min_eig_magnitude, e.min_eig_iter1;
  }
  Matrix trials(static_cast<Eigen::Index>(report.trials.size()), 6);
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const auto& t = report.trials[i];
    trials.row(static_cast<Eigen::Index>(i)) << static_cast<double>(t.order), static_cast<double>(t.trial),
        t.normalized_loss, t.min_eig_magnitude, t.min_eig_iter1, static_cast<double>(t.iterations);
  }
  write_csv(ctx.file("order_scan_summary.csv"), summary,
            {"order", "normalized_loss", "min_eig_magnitude", "min_eig_iter1"});
  write_csv(ctx.file("order_scan_trials.csv"), trials,
            {"order", "trial", "normalized_loss", "min_eig_magnitude", "min_eig_iter1", "iterations"});
  return {{"num_trials", report.num_trials},
          {"aggregation", "lower median"},
          {"per_r", per_r},
          {"fit_config", echo_linear(fc)}};
}

json cmd_convergence_study(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const SyntheticARSpec spec = ar_spec(c);
  const FitConfig fc = linear_config(c, static_cast<std::size_t>(spec.theta.size()), 0.1);
  const ConvergenceStudyReport report =
      ctx.timed("study", [&] { return convergence_study(spec, fc, c.trials); });

  std::vector<std::array<double, 3>> conv;
  std::vector<std::array<double, 4>> theta_err;
  Matrix state_err(static_cast<Eigen::Index>(report.trials.size()), 4);
  std::vector<double> final_e, ex_raw, ex_final;
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const auto& t = report.trials[i];
    for (std::size_t k = 0; k < t.e_norm_theta.size(); ++k) {
      conv.push_back({static_cast<double>(t.trial), static_cast<double>(k + 1), t.e_norm_theta[k]});
    }
    for (Eigen::Index k = 0; k < t.e_theta_first.size(); ++k) {
      theta_err.push_back({static_cast<double>(t.trial), 1.0, static_cast<double>(k + 1), t.e_theta_first[k]});
      theta_err.push_back({static_cast<double>(t.trial), static_cast<double>(t.e_norm_theta.size()),
                           static_cast<double>(k + 1), t.e_theta_final[k]});
    }
    state_err.row(static_cast<Eigen::Index>(i)) << static_cast<double>(t.trial), t.e_x_raw, t.e_x_first, t.e_x_final;
    final_e.push_back(t.e_norm_theta.back());
    ex_raw.push_back(t.e_x_raw);
    ex_final.push_back(t.e_x_final);
  }
  auto to_matrix = [](const auto& rows) {
    const Eigen::Index cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
    Matrix m(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    return m;
  };
  write_csv(ctx.file("convergence.csv"), to_matrix(conv), {"trial", "iteration", "e_norm_theta"});
  write_csv(ctx.file("theta_errors.csv"), to_matrix(theta_err), {"trial", "iteration", "index", "e_theta"});
  write_csv(ctx.file("state_errors.csv"), state_err, {"trial", "e_x_raw", "e_x_first", "e_x_final"});
  return {{"num_trials", report.trials.size()},
          {"threshold", report.threshold},
          {"near_truth", report.near_truth},
          {"denoised", report.denoised},
          {"median_e_norm_theta", lower_median(final_e)},
          {"median_e_x_raw", lower_median(ex_raw)},
          {"median_e_x", lower_median(ex_final)},
          {"theta_true", to_json(spec.theta)},
          {"fit_config", echo_linear(fc)}};
}

json cmd_artefact_study(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const ArtefactStudySpec spec = artefact_spec(c);
  const NarFitConfig fc = nar_config(c);
  const ArtefactStudyReport report =
      ctx.timed("study", [&] { return artefact_study(spec, fc, c.trials); });
  Matrix table(static_cast<Eigen::Index>(report.trials.size()), 7);
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const auto& t = report.trials[i];
    table.row(static_cast<Eigen::Index>(i)) << static_cast<double>(t.trial), t.rmse_raw, t.rmse_denoised,
        t.mse_first, t.mse_final, t.window_improved ? 1.0 : 0.0, t.prediction_improved ? 1.0 : 0.0;
  }
  write_csv(ctx.file("artefact_study.csv"), table,
            {"trial", "window_rmse_raw", "window_rmse_denoised", "test_mse_first", "test_mse",
             "window_improved", "prediction_improved"});
  return {{"num_trials", report.trials.size()},
          {"window_improved", report.window_improved},
          {"prediction_improved", report.prediction_improved},
          {"both_improved", report.both_improved},
          {"theta_true", to_json(spec.theta)},
          {"fit_config", echo_nar(fc)}};
}

json cmd_predict(RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  if (c.model.empty()) fail(ErrorKind::InvalidArgument, "predict needs --model <report.json>");
  if (c.input.empty()) fail(ErrorKind::InvalidArgument, "predict needs --input <csv>");
  std::ifstream in(c.model);
  if (!in) fail(ErrorKind::IoError, "cannot open model report " + c.model.string());
  json report;
  try {
    report = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("model report: ") + e.what());
  }
  const json& model = report.at("results").at("model");
  const Vector y = scalar_input(c, c.input);

  Vector predictions;
  std::size_t order = 0;
  const std::string type = model.at("type").get<std::string>();
  if (type == "ar") {
    const ARParams params(vector_from_json(model.at("theta")));
    order = params.order();
    const DelayEmbedding emb = delay_embed(y, order);
    predictions = emb.gamma * params.theta;
  } else if (type == "nar") {
    NARModel m;
    m.order = model.at("order").get<std::size_t>();
    m.depth = model.at("depth").get<std::size_t>();
    m.a_sig = matrix_from_json(model.at("a_sig"));
    m.c_sig = vector_from_json(model.at("c_sig")).transpose();
    order = m.order;
    predictions = nar_predict_one_step(m, y.head(y.size() - 1));
  } else {
    fail(ErrorKind::ParseError, "unknown model type '" + type + "'");
  }
  if (y.size() <= static_cast<Eigen::Index>(order)) fail(ErrorKind::HorizonTooShort, "input shorter than order + 1");

  const Eigen::Index offset = y.size() - predictions.size();
  Matrix table(predictions.size(), 3);
  for (Eigen::Index j = 0; j < predictions.size(); ++j) {
    table.row(j) << static_cast<double>(offset + j + 1), y[offset + j], predictions[j];
  }
  write_csv(ctx.file("predictions.csv"), table, {"t", "actual", "predicted"});
  const double mse = (predictions - y.tail(predictions.size())).squaredNorm() /
                     static_cast<double>(predictions.size());
  return {{"model_type", type}, {"order", order}, {"num_predictions", predictions.size()}, {"mse", mse}};
}

}  // namespace

std::string run_experiment(const ExperimentConfig& config) {
  static const std::map<std::string, std::function<json(RunContext&)>> commands{
      {"simulate", cmd_simulate},
      {"fit-ar", cmd_fit_ar},
      {"fit-var", cmd_fit_var},
      {"fit-nar", cmd_fit_nar},
      {"order-scan", cmd_order_scan},
      {"convergence-study", cmd_convergence_study},
      {"artefact-study", cmd_artefact_study},
      {"predict", cmd_predict},
  };
  const auto it = commands.find(config.command);
  if (it == commands.end()) fail(ErrorKind::InvalidArgument, "unknown command '" + config.command + "'");

  RunContext ctx{config, config.out_dir, json::array(), {}};
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create " + ctx.out_dir.string() + ": " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  json results = it->second(ctx);
  ctx.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = {{"schema_version", kReportSchemaVersion},
                 {"command", config.command},
                 {"source", source_echo(config)},
                 {"results", std::move(results)}};
  ctx.files.push_back("report.json");
  report["files"] = ctx.files;
  const std::string text = report.dump(2);

  {
    std::ofstream out(ctx.out_dir / "report.json", std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write report.json");
    out << text << '\n';
  }
  {
    std::ofstream out(ctx.out_dir / "timings.json", std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write timings.json");
    out << json(ctx.timings).dump(2) << '\n';
  }
  return text;
}

}  // namespace arden
