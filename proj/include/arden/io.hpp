#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arden/model.hpp"

namespace arden {

TimeSeries parse_csv(std::string_view text, bool has_header);
TimeSeries load_csv(const std::filesystem::path& path, bool has_header);

/// Writes one row per line at 17 significant digits, so values round-trip exactly.
void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header = {});
void write_csv(const std::filesystem::path& path, const TimeSeries& series);

/// Row t of the result is y_{t+1} - y_t.
TimeSeries first_difference(const TimeSeries& y);

/// Replaces steps t_start..t_end (1-based, inclusive) of one channel with
/// i.i.d. N(0, std^2) draws from the given seed.
TimeSeries inject_artefact(const TimeSeries& y, std::size_t channel, std::size_t t_start,
                           std::size_t t_end, double std, std::uint64_t seed);

/// Parameters of one run. Unset optionals take per-command defaults.
struct ExperimentConfig {
  std::string command;
  std::string synthetic;  // generator name when no input file is given
  std::filesystem::path input;
  std::filesystem::path test_input;
  std::filesystem::path model;  // report.json of an earlier fit, for `predict`
  std::filesystem::path out_dir = ".";
  bool has_header = false;
  std::size_t channel = 0;
  bool difference = false;
  std::uint64_t seed = 0;
  std::optional<std::size_t> order;
  std::size_t depth = 2;
  std::optional<double> rho;
  std::optional<double> lambda;
  std::optional<std::size_t> iterations;
  double tol = 1e-10;
  bool measure_from_start = true;
  std::size_t trials = 100;
  std::size_t r_min = 1;
  std::size_t r_max = 10;
  std::optional<std::size_t> steps;
  std::optional<double> transition_std;
  std::optional<double> measurement_std;
  bool inject = false;
  std::size_t artefact_start = 150;
  std::size_t artefact_end = 250;
  std::optional<double> artefact_std;
  double artefact_scale = 3.0;
  std::size_t train_steps = 400;

  /// Sets one field from its textual form; keys accept '-' or '_'.
  void set(std::string_view key, std::string_view value);

  /// Reads `key = value` lines; '#' starts a comment.
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

}  // namespace arden
