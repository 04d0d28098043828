#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arden/error.hpp"
#include "arden/estimator_linear.hpp"
#include "arden/estimator_nar.hpp"
#include "arden/io.hpp"
#include "arden/model.hpp"
#include "arden/runner.hpp"
#include "arden/selection.hpp"
#include "arden/signature.hpp"

namespace py = pybind11;
using namespace arden;

namespace {

py::dict loss_dict(const LossBreakdown& l) {
  py::dict d;
  d["dynamics"] = l.dynamics_term;
  d["measurement"] = l.measurement_term;
  d["total"] = l.total;
  d["normalized"] = l.normalized;
  d["penalized"] = l.penalized;
  return d;
}

py::list loss_list(const std::vector<LossBreakdown>& history) {
  py::list out;
  for (const auto& l : history) out.append(loss_dict(l));
  return out;
}

FitConfig make_config(std::size_t order, double rho, double lambda, std::size_t iterations,
                      double tol, bool measure_from_start) {
  FitConfig c;
  c.order = order;
  c.rho = rho;
  c.lambda = lambda;
  c.max_iterations = iterations;
  c.convergence_tol = tol;
  c.measure_from_start = measure_from_start;
  return c;
}

}  // namespace

PYBIND11_MODULE(_arden, m) {
  m.doc() = "Alternating least-squares estimation of AR, VAR(1) and signature-NAR models";

  py::register_exception<Error>(m, "ArdenError", PyExc_RuntimeError);

  // model

  m.def("companion_eigenvalues",
        [](const Vector& theta) {
          return companion_eigenvalues(std::span<const double>(theta.data(), theta.size()));
        },
        py::arg("theta"));
  m.def("coefficients_from_roots",
        [](const std::vector<Complex>& roots) { return coefficients_from_roots(roots).theta; },
        py::arg("roots"));
  m.def("simulate_ar",
        [](const Vector& theta, const Vector& x1, std::size_t steps, double transition_std,
           double measurement_std, std::uint64_t seed) {
          const Simulation sim = simulate(build_companion(ARParams(theta)), x1, steps,
                                          NoiseSpec{transition_std, measurement_std, seed});
          return py::make_tuple(sim.states, Vector(sim.measurements.column(0)));
        },
        py::arg("theta"), py::arg("x1"), py::arg("steps"), py::arg("transition_std"),
        py::arg("measurement_std"), py::arg("seed"),
        "Companion-form AR simulation; returns (states N x r, measurements N).");
  m.def("delay_embed",
        [](const Vector& y, std::size_t order) {
          const DelayEmbedding e = delay_embed(y, order);
          return py::make_tuple(e.gamma, e.y_plus);
        },
        py::arg("y"), py::arg("order"));

  // linear estimator

  m.def("evaluate_loss",
        [](const Vector& theta, const Vector& y_hat, const Vector& y, double rho, bool from_start) {
          return loss_dict(evaluate_loss(ARParams(theta), y_hat, y, rho, from_start));
        },
        py::arg("theta"), py::arg("y_hat"), py::arg("y"), py::arg("rho"),
        py::arg("measure_from_start") = true);
  m.def("param_step",
        [](const Vector& y_hat, std::size_t order, double lambda) {
          return param_step(y_hat, order, lambda).theta;
        },
        py::arg("y_hat"), py::arg("order"), py::arg("lambda_") = 0.0);
  m.def("state_step",
        [](const Vector& theta, const Vector& y, double rho, double lambda, bool from_start) {
          return state_step(ARParams(theta), y, rho, lambda, from_start);
        },
        py::arg("theta"), py::arg("y"), py::arg("rho"), py::arg("lambda_") = 0.0,
        py::arg("measure_from_start") = true);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("theta", &FitResult::theta)
      .def_readonly("transition", &FitResult::transition)
      .def_property_readonly("y_hat", [](const FitResult& r) { return r.y_hat.values(); })
      .def_readonly("y_hat_first", &FitResult::y_hat_first)
      .def_property_readonly("loss_history", [](const FitResult& r) { return loss_list(r.loss_history); })
      .def_readonly("coefficient_history", &FitResult::coefficient_history)
      .def_readonly("iterations_run", &FitResult::iterations_run)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("eigenvalues", &FitResult::eigenvalues)
      .def_readonly("min_eig_magnitude", &FitResult::min_eig_magnitude);

  m.def("fit_ar",
        [](const Vector& y, std::size_t order, double rho, double lambda, std::size_t iterations,
           double tol, bool from_start) {
          return fit_ar(TimeSeries::scalar(y), make_config(order, rho, lambda, iterations, tol, from_start));
        },
        py::arg("y"), py::arg("order"), py::arg("rho") = 0.1, py::arg("lambda_") = 0.0,
        py::arg("iterations") = 100, py::arg("tol") = 1e-10, py::arg("measure_from_start") = true);
  m.def("fit_var1",
        [](const Matrix& y, double rho, double lambda, std::size_t iterations, double tol) {
          return fit_var1(TimeSeries(y), make_config(1, rho, lambda, iterations, tol, true));
        },
        py::arg("y"), py::arg("rho") = 1.0, py::arg("lambda_") = 0.0, py::arg("iterations") = 100,
        py::arg("tol") = 1e-10);

  m.def("order_scan",
        [](const Vector& y, const std::vector<std::size_t>& orders, double rho, double lambda,
           std::size_t iterations) {
          const OrderScanReport report =
              order_scan(TimeSeries::scalar(y), orders, make_config(1, rho, lambda, iterations, 1e-10, true));
          py::list out;
          for (const auto& e : report.per_r) {
            py::dict d;
            d["order"] = e.order;
            d["normalized_loss"] = e.normalized_loss;
            d["min_eig_magnitude"] = e.min_eig_magnitude;
            d["min_eig_iter1"] = e.min_eig_iter1;
            out.append(d);
          }
          return out;
        },
        py::arg("y"), py::arg("orders"), py::arg("rho") = 0.1, py::arg("lambda_") = 0.0,
        py::arg("iterations") = 100);

  // signatures and the nonlinear model

  m.def("signature_dimension", &signature_dimension, py::arg("alphabet"), py::arg("depth"));
  m.def("signature",
        [](const Matrix& points, std::size_t depth) {
          return signature(GeometricPath(points), depth).coefficients;
        },
        py::arg("points"), py::arg("depth"),
        "Truncated signature of the piecewise-linear path through the rows of `points`.");

  py::class_<NARModel>(m, "NarModel")
      .def_readonly("order", &NARModel::order)
      .def_readonly("depth", &NARModel::depth)
      .def_readonly("a_sig", &NARModel::a_sig)
      .def_readonly("c_sig", &NARModel::c_sig);

  py::class_<NarFitResult>(m, "NarFitResult")
      .def_readonly("model", &NarFitResult::model)
      .def_readonly("first_model", &NarFitResult::first_model)
      .def_property_readonly("y_hat", [](const NarFitResult& r) { return Vector(r.y_hat.column(0)); })
      .def_readonly("y_hat_first", &NarFitResult::y_hat_first)
      .def_readonly("s_hat", &NarFitResult::s_hat)
      .def_property_readonly("loss_history", [](const NarFitResult& r) { return loss_list(r.loss_history); })
      .def_readonly("iterations_run", &NarFitResult::iterations_run)
      .def_readonly("converged", &NarFitResult::converged);

  m.def("fit_nar",
        [](const Vector& y, std::size_t order, std::size_t depth, double rho, double lambda,
           std::size_t iterations) {
          NarFitConfig c;
          c.order = order;
          c.depth = depth;
          c.rho = rho;
          c.lambda = lambda;
          c.max_iterations = iterations;
          return fit_nar(TimeSeries::scalar(y), c);
        },
        py::arg("y"), py::arg("order") = 4, py::arg("depth") = 2, py::arg("rho") = 0.1,
        py::arg("lambda_") = 0.001, py::arg("iterations") = 20);
  m.def("nar_predict_one_step", &nar_predict_one_step, py::arg("model"), py::arg("context"));
  m.def("nar_one_step_mse", &nar_one_step_mse, py::arg("model"), py::arg("series"));

  // io

  m.def("parse_csv",
        [](const std::string& text, bool has_header) { return parse_csv(text, has_header).values(); },
        py::arg("text"), py::arg("has_header") = false);
  m.def("first_difference",
        [](const Matrix& y) { return first_difference(TimeSeries(y)).values(); }, py::arg("y"));
  m.def("inject_artefact",
        [](const Matrix& y, std::size_t channel, std::size_t t_start, std::size_t t_end, double std,
           std::uint64_t seed) {
          return inject_artefact(TimeSeries(y), channel, t_start, t_end, std, seed).values();
        },
        py::arg("y"), py::arg("channel"), py::arg("t_start"), py::arg("t_end"), py::arg("std"),
        py::arg("seed"));
  m.def("run_experiment",
        [](const std::string& command, const std::map<std::string, std::string>& options) {
          ExperimentConfig config;
          config.command = command;
          for (const auto& [key, value] : options) config.set(key, value);
          py::gil_scoped_release release;
          return run_experiment(config);
        },
        py::arg("command"), py::arg("options") = std::map<std::string, std::string>{},
        "Runs one CLI command; `options` maps config keys to their textual values. Returns report.json text.");
}
