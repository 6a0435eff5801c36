#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "weierdim/csv.hpp"
#include "weierdim/grid.hpp"
#include "weierdim/sequence.hpp"

namespace weierdim {

inline constexpr char kVersion[] = "0.1.0";

enum class Command { Theory, Synth, Eval, Osc, BoxDim, Cantor, Verify };

struct SynthesisRequest {
  double H = 1.5;
  double B = 1.5;
};

struct ExperimentConfig {
  Command command = Command::Theory;
  // Exactly one of these is set.
  std::optional<SequenceSpec> spec;
  std::optional<SynthesisRequest> synthesis;
  std::string base = "sawtooth";

  // Truncation: a depth or an accuracy target.
  std::optional<int> depth;
  std::optional<double> accuracy;
  // Tail ratio bound; unset means 0.1, raised to the least admissible value
  // when the coefficients decay more slowly.
  std::optional<double> eta;

  std::pair<int, int> window{1, 30};
  // "auto", "generation", or explicit scales.
  std::string ladder = "auto";
  std::vector<double> ladder_values;
  Domain domain;

  double x = 0.0;
  double t = 0.0;
  double r = 1e-3;
  int trials = 500;
  int first_generation = 0;  // 0 selects the least generation that branches
  std::uint64_t seed = 42;

  std::optional<std::string> output;    // spec / levels / result JSON
  std::optional<std::string> csv;       // numeric table
  std::optional<std::string> manifest;  // run manifest
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  nlohmann::json config;
  std::string version = kVersion;
  std::vector<CheckResult> checks;
  nlohmann::json fitted = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::optional<CsvTable> table;  // the command's numeric table, if it has one

  bool all_pass() const;
  nlohmann::json to_json() const;
};

std::string command_name(Command c);
Command parse_command(const std::string& name);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Validates the config, runs the selected pipeline and writes the requested
// files. Library errors propagate as weierdim::Error.
RunManifest run(const ExperimentConfig& config);

}  // namespace weierdim
