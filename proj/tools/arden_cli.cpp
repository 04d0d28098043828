// Command-line front end: one subcommand per experiment recipe.
//
//   arden <command> [--config FILE] [--key value ...]
//
// Values from the config file are applied first, then flags.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "arden/error.hpp"
#include "arden/runner.hpp"

namespace {

enum ExitCode : int { kOk = 0, kOther = 1, kUsage = 2, kNumerical = 3, kIo = 4 };

struct Flag {
  const char* name;
  const char* help;
  bool is_switch = false;
};

const std::vector<Flag> kFlags{
    {"seed", "base seed; trial i uses seed + i"},
    {"rho", "measurement weight"},
    {"lambda", "ridge penalty"},
    {"order", "model order r"},
    {"depth", "signature depth d"},
    {"iterations", "maximum alternating iterations"},
    {"trials", "Monte Carlo trial count"},
    {"input", "input CSV, one column per channel"},
    {"test-input", "held-out CSV for one-step prediction"},
    {"model", "report.json holding a fitted model"},
    {"out-dir", "directory for report.json and tables"},
    {"synthetic", "generator: unit-circle-ar5, eeg-rhythm-ar5, coupled-var1"},
    {"channel", "0-based input column"},
    {"tol", "convergence tolerance of the linear fits"},
    {"r-min", "smallest order of the scan"},
    {"r-max", "largest order of the scan"},
    {"steps", "series length of the generator"},
    {"transition-std", "transition noise std of the generator"},
    {"measurement-std", "measurement noise std of the generator"},
    {"artefact-start", "first artefact step, 1-based"},
    {"artefact-end", "last artefact step, 1-based inclusive"},
    {"artefact-std", "artefact noise std"},
    {"artefact-scale", "artefact std relative to the training std"},
    {"train-steps", "training length"},
    {"measure-from-start", "measure residuals from t = 1 (true/false)"},
    {"header", "input CSV has a header row", true},
    {"difference", "take first differences of the input", true},
    {"inject", "inject an artefact into the training input", true},
};

const std::vector<std::pair<const char*, const char*>> kCommands{
    {"simulate", "simulate a synthetic generator"},
    {"fit-ar", "fit a scalar AR(r) model"},
    {"fit-var", "fit a multichannel VAR(1) model"},
    {"fit-nar", "fit the signature nonlinear AR model"},
    {"order-scan", "loss and eigenvalue medians over a range of orders"},
    {"convergence-study", "parameter and state errors against a known generator"},
    {"artefact-study", "artefact robustness of the signature model"},
    {"predict", "one-step predictions from a saved model"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating AR / signature-NAR estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "arden 0.1.0");

  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;

  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    for (const Flag& f : kFlags) {
      const std::string opt = std::string("--") + f.name;
      if (f.is_switch) {
        sub->add_flag(opt, switches[f.name], f.help);
      } else {
        sub->add_option(opt, values[f.name], f.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    arden::ExperimentConfig config =
        config_path.empty() ? arden::ExperimentConfig{} : arden::ExperimentConfig::from_file(config_path);
    config.command = app.get_subcommands().front()->get_name();
    for (const Flag& f : kFlags) {
      const std::string opt = std::string("--") + f.name;
      if (app.get_subcommands().front()->count(opt) == 0) continue;
      config.set(f.name, f.is_switch ? "true" : values[f.name]);
    }
    arden::run_experiment(config);
    std::cout << (config.out_dir / "report.json").string() << '\n';
    return kOk;
  } catch (const arden::Error& e) {
    std::cerr << "arden: " << e.what() << '\n';
    if (e.is_numerical()) return kNumerical;
    switch (e.kind()) {
      case arden::ErrorKind::ParseError:
      case arden::ErrorKind::RaggedRows:
      case arden::ErrorKind::InvalidArgument:
        return kUsage;
      case arden::ErrorKind::IoError:
        return kIo;
      default:
        return kOther;
    }
  } catch (const std::exception& e) {
    std::cerr << "arden: " << e.what() << '\n';
    return kOther;
  }
}
