// Command-line front end: simulate, sweep, optimize, fourier, decompose.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdres/quadrature.hpp"

namespace tdres::cli {

/// Everything a run needs. Unset optionals are filled from the oscillator
/// (dt = T_d / 200, horizon = 12 / gamma or 20 T_o when lossless).
struct RunConfig {
  std::string subcommand;
  nlohmann::json oscillator = {{"q", 10.0}, {"omega0", 1.0}};
  nlohmann::json input;  // waveform descriptor; null selects the subcommand default
  std::string kernel = "normalized";
  std::optional<double> dt;
  std::optional<double> horizon;
  QuadratureConfig quadrature;

  std::string out;
  std::string plot;
  std::string envelope;
  std::optional<int> k_max;

  // sweep
  std::string method = "both";
  std::optional<double> from;
  std::optional<double> to;
  int points = 101;
  std::string prefix = "sweep";

  // optimize
  std::vector<nlohmann::json> candidates;
  double target_norm = 1.0;
  std::string waveform_csv;

  // fourier
  std::vector<int> harmonics{1, 2, 3, 4, 5};
  double bank_q = 50.0;

  // decompose
  double a = 1.0;
  double A = 1.0;
  double y0 = 0.0;
  std::vector<double> laplace_s;

  nlohmann::json to_json() const;
  /// Schema errors name the offending field, e.g. "config.oscillator: ...".
  static RunConfig from_json(const nlohmann::json& j);
};

bool operator==(const RunConfig& a, const RunConfig& b);

RunConfig load_config(const std::filesystem::path& path);

/// Exit status: 0 success, 2 usage or validation error, 1 module error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdres::cli
