// weierdim: command-line front end for the weierdim library.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "weierdim/csv.hpp"
#include "weierdim/error.hpp"
#include "weierdim/experiment.hpp"
#include "weierdim/parallel.hpp"
#include "weierdim/spec_io.hpp"

namespace {

using weierdim::Command;
using weierdim::ExperimentConfig;

enum Exit { kOk = 0, kConfig = 2, kInfeasible = 3, kCheckFailed = 4, kIo = 5, kValidity = 6 };

std::pair<double, double> parse_range(const std::string& s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw weierdim::config_error("cli", what + " must look like lo:hi");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw weierdim::config_error("cli", what + " must look like lo:hi");
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw weierdim::config_error("cli", "ladder entries must be numbers: \"" + item + "\"");
    }
  }
  return out;
}

struct Options {
  std::string spec_path;
  std::optional<double> H, B;
  std::optional<std::string> base;
  std::optional<int> depth;
  std::optional<double> accuracy;
  std::optional<double> eta;
  std::string window = "1:30";
  std::string format = "json";
  std::string ladder = "auto";
  std::string domain = "0:1";
  double x = 0.0, t = 0.0, r = 1e-3;
  int trials = 500;
  int first_generation = 0;
  std::uint64_t seed = 42;
  std::optional<std::string> output, csv, manifest;
};

void add_source(CLI::App* sub, Options& o) {
  sub->add_option("--spec", o.spec_path, "sequence spec JSON file");
  sub->add_option("--H", o.H, "Hausdorff dimension for a synthesized family");
  sub->add_option("--B", o.B, "upper box dimension for a synthesized family");
  sub->add_option("--g", o.base, "base function: sawtooth, sine or skew:<apex>");
  sub->add_option("--manifest", o.manifest, "write the run manifest here");
}

void add_truncation(CLI::App* sub, Options& o) {
  sub->add_option("--depth", o.depth, "number of terms");
  sub->add_option("--accuracy", o.accuracy, "target tail bound");
  sub->add_option("--eta", o.eta, "bound on a_{n+1}/a_n for the tail (default 0.1, raised when needed)");
}

ExperimentConfig build_config(Command cmd, const Options& o) {
  ExperimentConfig c;
  c.command = cmd;
  if (!o.spec_path.empty()) {
    const auto doc = weierdim::read_json_file(o.spec_path);
    c.spec = weierdim::spec_from_json(doc);
    if (const auto hint = weierdim::base_hint(doc)) c.base = *hint;
  }
  if (o.H || o.B) {
    if (!(o.H && o.B)) throw weierdim::config_error("cli", "--H and --B go together");
    c.synthesis = weierdim::SynthesisRequest{*o.H, *o.B};
  }
  if (o.base) c.base = *o.base;
  c.depth = o.depth;
  c.accuracy = o.accuracy;
  c.eta = o.eta;
  const auto [w0, w1] = parse_range(o.window, "--window");
  c.window = {static_cast<int>(w0), static_cast<int>(w1)};
  const auto [d0, d1] = parse_range(o.domain, "--domain");
  c.domain = {d0, d1};
  if (o.ladder == "auto" || o.ladder == "generation") {
    c.ladder = o.ladder;
  } else {
    c.ladder = "list";
    c.ladder_values = parse_list(o.ladder);
  }
  c.x = o.x;
  c.t = o.t;
  c.r = o.r;
  c.trials = o.trials;
  c.first_generation = o.first_generation;
  c.seed = o.seed;
  c.output = o.output;
  c.csv = o.csv;
  c.manifest = o.manifest;
  return c;
}

int exit_code(weierdim::ErrorKind k) {
  switch (k) {
    case weierdim::ErrorKind::Config: return kConfig;
    case weierdim::ErrorKind::Infeasible: return kInfeasible;
    case weierdim::ErrorKind::Validity: return kValidity;
    case weierdim::ErrorKind::Io: return kIo;
  }
  return kConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension formulas, synthesis and desk-scale checks for Weierstrass-type functions"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (default: WEIERDIM_THREADS or all cores)");
  Options o;

  auto* theory = app.add_subcommand("theory", "dimension formulas on a window of indices");
  add_source(theory, o);
  theory->add_option("--window", o.window, "index window n0:n1");
  theory->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  theory->add_option("--csv", o.csv, "also write the ratio series as CSV");

  auto* synth = app.add_subcommand("synth", "sequence spec with prescribed dimensions");
  synth->add_option("--H", o.H, "Hausdorff dimension")->required();
  synth->add_option("--B", o.B, "upper box dimension")->required();
  synth->add_option("--g", o.base, "base function tag stored in the spec");
  synth->add_option("-o,--output", o.output, "write the spec JSON here");

  auto* evalc = app.add_subcommand("eval", "evaluate a truncated series");
  add_source(evalc, o);
  add_truncation(evalc, o);
  evalc->add_option("--x", o.x, "evaluation point");

  auto* osc = app.add_subcommand("osc", "oscillation of f on [t, t + r]");
  add_source(osc, o);
  add_truncation(osc, o);
  osc->add_option("--t", o.t, "window start");
  osc->add_option("--r", o.r, "window length");
  osc->add_option("--csv", o.csv, "write the sample as CSV");

  auto* box = app.add_subcommand("boxdim", "box counting on the graph of a truncated series");
  add_source(box, o);
  add_truncation(box, o);
  box->add_option("--domain", o.domain, "x range lo:hi");
  box->add_option("--ladder", o.ladder, "auto, generation, or comma-separated scales");
  box->add_option("--csv", o.csv, "write the count table as CSV");

  auto* cantor = app.add_subcommand("cantor", "generation intervals and their measure");
  add_source(cantor, o);
  cantor->add_option("--depth", o.depth, "deepest generation")->required();
  cantor->add_option("--first-generation", o.first_generation, "first generation below I (0 = automatic)");
  cantor->add_option("--emit", o.output, "write the levels as JSON");

  auto* verify = app.add_subcommand("verify", "sampled checks of the oscillation and branching bounds");
  add_source(verify, o);
  add_truncation(verify, o);
  verify->add_option("--trials", o.trials, "sampled pairs per check");
  verify->add_option("--seed", o.seed, "sampler seed");
  verify->add_option("--first-generation", o.first_generation, "first generation below I (0 = automatic)");
  verify->add_option("--report", o.manifest, "write the run manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  weierdim::set_thread_count(threads);

  try {
    const Command cmd = weierdim::parse_command(app.get_subcommands().front()->get_name());
    const auto config = build_config(cmd, o);
    const auto manifest = weierdim::run(config);
    if (cmd == Command::Theory && o.format == "csv") {
      std::cout << weierdim::to_csv(*manifest.table);
    } else if (cmd == Command::Synth && o.output) {
      std::cout << manifest.result["family"].get<std::string>() << "\n";
    } else if (cmd == Command::Synth) {
      std::cout << manifest.result["spec"].dump(2) << "\n";
    } else {
      nlohmann::json out = manifest.result;
      if (!manifest.checks.empty()) out["checks"] = manifest.to_json()["checks"];
      if (!manifest.fitted.empty()) out["fitted"] = manifest.fitted;
      std::cout << out.dump(2) << "\n";
    }
    for (const auto& c : manifest.checks)
      if (!c.pass) std::cerr << "check failed: " << c.name << " (" << c.detail << ")\n";
    return manifest.all_pass() ? kOk : kCheckFailed;
  } catch (const weierdim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: cli: " << e.what() << "\n";
    return kConfig;
  }
}
