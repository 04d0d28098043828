#pragma once

#include <string>

#include "arden/io.hpp"

namespace arden {

inline constexpr int kReportSchemaVersion = 1;

/// Executes one command, writes its tables and report.json into out_dir and
/// returns the report text. Wall-clock timings go to timings.json so that
/// report.json depends only on the configuration.
std::string run_experiment(const ExperimentConfig& config);

}  // namespace arden
