#include "weierdim/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "weierdim/cantor.hpp"
#include "weierdim/csv.hpp"
#include "weierdim/error.hpp"
#include "weierdim/series.hpp"
#include "weierdim/spec_io.hpp"
#include "weierdim/theory.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "cli";
using nlohmann::json;

class Stopwatch {
 public:
  explicit Stopwatch(RunManifest& m, std::string name)
      : m_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    m_.timings.emplace_back(name_, dt.count());
  }

 private:
  RunManifest& m_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(8);
  os << v;
  return os.str();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

BaseKind base_kind(const std::string& tag) {
  if (tag == "sawtooth") return BaseKind::Sawtooth;
  if (tag == "sine") return BaseKind::Sine;
  return BaseKind::Custom;
}

SequenceSpec resolve_spec(const ExperimentConfig& c) {
  if (c.spec) return *c.spec;
  return synthesize(c.synthesis->H, c.synthesis->B, base_kind(c.base)).spec;
}

TruncatedSeries make_series(const ExperimentConfig& c, const SequenceSpec& spec, const BaseFunction& g) {
  if (c.depth) return truncate_depth(spec, g, *c.depth, c.eta);
  if (c.accuracy) return truncate_accuracy(spec, g, *c.accuracy, c.eta);
  throw config_error(kModule, "this command needs --depth or --accuracy");
}

json series_json(const TruncatedSeries& s) {
  json terms = json::array();
  for (const auto& t : s.terms) terms.push_back({{"a", t.a}, {"b", t.b}, {"theta", t.theta}});
  return {{"depth", s.depth}, {"eta", s.eta}, {"tail_bound", s.tail_bound_value}, {"d_N", s.d()}, {"terms", terms}};
}

json ratio_json(const RatioSeries& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back({{"n", e.n}, {"value", e.value}});
  return {{"entries", entries}, {"window_inf", s.window_inf}, {"window_sup", s.window_sup},
          {"final_value", s.final_value}};
}

std::vector<double> ladder_for(const ExperimentConfig& c, const TruncatedSeries& s, Domain d) {
  if (c.ladder == "auto") return auto_ladder(s, d);
  if (c.ladder == "generation") return generation_ladder(s, d);
  if (c.ladder_values.empty()) throw config_error(kModule, "ladder must be auto, generation or a list of scales");
  return c.ladder_values;
}

void add(RunManifest& m, std::string name, bool pass, std::string detail) {
  m.checks.push_back({std::move(name), pass, std::move(detail)});
}

void run_theory(const ExperimentConfig& c, RunManifest& m) {
  const SequenceSpec spec = resolve_spec(c);
  Stopwatch sw(m, "theory");
  const auto rep = dimension_report(spec, c.window.first, c.window.second);
  json cf = nullptr;
  if (rep.closed_form) cf = {{"hausdorff", rep.closed_form->first}, {"upperbox", rep.closed_form->second}};
  m.result = {{"window", {rep.n0, rep.n1}},
              {"hausdorff_dim_estimate", rep.hausdorff_dim_estimate},
              {"lowerbox_dim_estimate", rep.lowerbox_dim_estimate},
              {"upperbox_dim_estimate", rep.upperbox_dim_estimate},
              {"gamma_bar", rep.gamma_bar},
              {"closed_form", cf},
              {"hausdorff_ratio", ratio_json(rep.hausdorff_ratio)},
              {"upperbox_ratio", ratio_json(rep.upperbox_ratio)},
              {"log_d", rep.log_d},
              {"degenerate", rep.degenerate},
              {"degenerate_indices", rep.degenerate_indices}};
  add(m, "estimates_ordered",
      1.0 <= rep.hausdorff_dim_estimate && rep.hausdorff_dim_estimate <= rep.upperbox_dim_estimate &&
          rep.upperbox_dim_estimate <= 2.0,
      "1 <= H <= B <= 2");
  m.table = dimension_table(rep);
  if (c.csv) export_csv(*m.table, *c.csv);
}

void run_synth(const ExperimentConfig& c, RunManifest& m) {
  if (!c.synthesis) throw config_error(kModule, "synth needs --H and --B");
  const auto syn = synthesize(c.synthesis->H, c.synthesis->B, base_kind(c.base));
  m.result = {{"family", syn.family}, {"spec", spec_to_json(syn.spec, c.base)}};
  if (c.output) write_text_file(*c.output, spec_to_json(syn.spec, c.base).dump(2) + "\n");
}

void run_eval(const ExperimentConfig& c, RunManifest& m) {
  const SequenceSpec spec = resolve_spec(c);
  const BaseFunction g = base_from_tag(c.base);
  const auto s = make_series(c, spec, g);
  const auto e = eval(s, c.x);
  m.result = {{"x", c.x}, {"value", e.value}, {"error_bound", e.error_bound}, {"series", series_json(s)}};
}

void run_osc(const ExperimentConfig& c, RunManifest& m) {
  const SequenceSpec spec = resolve_spec(c);
  const BaseFunction g = base_from_tag(c.base);
  const auto s = make_series(c, spec, g);
  Stopwatch sw(m, "oscillation");
  const auto o = oscillation(s, c.t, c.r);
  m.result = {{"t", o.t}, {"r", o.r}, {"V", o.V}, {"sup", o.sup}, {"inf", o.inf},
              {"samples_used", o.samples_used}, {"bias_bound", o.bias_bound}};
  m.table = CsvTable{{"t", "r", "V", "samples_used", "bias_bound"},
                     {{o.t, o.r, o.V, static_cast<double>(o.samples_used), o.bias_bound}}};
  if (c.csv) export_csv(*m.table, *c.csv);
}

json fit_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"r_min", f.r_min},
          {"r_max", f.r_max}, {"per_octave_slopes", f.per_octave_slopes}, {"degenerate", f.degenerate}};
}

json table_json(const BoxCountTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({{"r", r.r}, {"N", r.N}});
  return {{"rows", rows}, {"domain", {t.domain.lo, t.domain.hi}}, {"validity_window", {t.r_min, t.r_max}},
          {"padded", t.padded}};
}

void run_boxdim(const ExperimentConfig& c, RunManifest& m) {
  const SequenceSpec spec = resolve_spec(c);
  const BaseFunction g = base_from_tag(c.base);
  const auto s = make_series(c, spec, g);
  Stopwatch sw(m, "boxdim");
  const auto table = box_count_table(s, ladder_for(c, s, c.domain), c.domain);
  const auto fit = fit_dimension(table);
  json out = {{"domain", {{"table", table_json(table)}, {"fit", fit_json(fit)}}}};
  // The same count restricted to the monotone interval of g.
  const Domain on_I{g.interval_lo(), g.interval_hi()};
  try {
    const auto table_I = box_count_table(s, ladder_for(c, s, on_I), on_I);
    out["monotone_interval"] = {{"table", table_json(table_I)}, {"fit", fit_json(fit_dimension(table_I))}};
  } catch (const Error& e) {
    out["monotone_interval"] = {{"skipped", e.what()}};
  }
  m.result = out;
  m.fitted["box_slope"] = fit.slope;
  const double tol = std::max(fit.residual, 1e-9);
  add(m, "slope_within_graph_band", !fit.degenerate && fit.slope >= 1.0 - tol && fit.slope <= 2.0 + tol,
      "fitted slope " + fmt(fit.slope) + " in [1, 2] up to the fit residual");
  m.table = box_table(table);
  if (c.csv) export_csv(*m.table, *c.csv);
}

json levels_json(const CantorScaffold& sc) {
  json levels = json::array();
  for (const auto& l : sc.levels) {
    json ivs = json::array();
    for (std::size_t i = 0; i < l.intervals.size(); ++i) {
      const auto& iv = l.intervals[i];
      ivs.push_back({{"j", iv.j}, {"left", iv.left}, {"right", iv.right}, {"parent", iv.parent},
                     {"weight", l.weights[i]}, {"weight_denominator", l.weight_denominators[i].str()}});
    }
    levels.push_back({{"generation", l.generation}, {"b", l.b}, {"intervals", ivs}});
  }
  return {{"first_generation", sc.first_generation}, {"I", {sc.I_lo, sc.I_hi}}, {"levels", levels}};
}

void branching_checks(const BranchingReport& br, RunManifest& m) {
  m.fitted["q_hat"] = br.q_hat;
  add(m, "branching_floor", br.floor_ok, "children > |I| b_{n+1}/b_n - 2 at every parent");
  add(m, "branching_count", br.card_ok, "card J_n > q^n b_n with q = " + fmt(br.q_hat));
  add(m, "measure_bound", br.measure_ok, "mu(I_{n,j}) < 1/(q^n b_n)");
  add(m, "weight_conservation", br.conservation_ok, "weights sum to 1 exactly at every level");
  add(m, "length_decrease", br.lengths_decrease, "total length of each level decreases");
}

void run_cantor(const ExperimentConfig& c, RunManifest& m) {
  const SequenceSpec spec = resolve_spec(c);
  const BaseFunction g = base_from_tag(c.base);
  if (!c.depth) throw config_error(kModule, "cantor needs --depth");
  Stopwatch sw(m, "cantor");
  const auto sc = build_levels(spec, g, *c.depth, c.first_generation);
  const auto br = branching_check(sc);
  json counts = json::array();
  for (const auto& l : sc.levels) counts.push_back({{"generation", l.generation}, {"intervals", l.intervals.size()}});
  m.result = {{"first_generation", sc.first_generation}, {"levels", counts}, {"total_length", br.total_length},
              {"violations", br.violations}};
  branching_checks(br, m);
  if (c.output) write_text_file(*c.output, levels_json(sc).dump(1) + "\n");
}

void run_verify(const ExperimentConfig& c, RunManifest& m) {
  const SequenceSpec spec = resolve_spec(c);
  const BaseFunction g = base_from_tag(c.base);
  const auto s = make_series(c, spec, g);
  Stopwatch sw(m, "verify");
  if (const auto err = certify_base(g); !err.empty()) add(m, "base_certificate", false, err);
  else add(m, "base_certificate", true, "periodicity, Lipschitz bound and slope floor on sampled points");

  const auto sc = build_levels(spec, g, s.depth, c.first_generation);
  const auto br = branching_check(sc);
  branching_checks(br, m);

  if (s.depth >= 2 && s.eta < 0.5) {
    const auto diag = diagnostics(spec, 1, s.depth, s.eta);
    if (diag.eta_ok) {
      const auto ld = log_d_prefix(spec, s.depth);
      bool ok = true;
      for (int n = 1; n < s.depth; ++n)
        ok = ok && ld[n] - spec.log_b(n + 1) < std::log(2.0 * s.eta) + ld[n - 1] - spec.log_b(n);
      add(m, "ratio_decay", ok, "d_{n+1}/b_{n+1} < 2 eta d_n/b_n on the truncation window");
    }
  }

  const auto lr = lemma_checks(s, sc, c.trials, c.seed);
  m.fitted["c0_hat"] = lr.c0_hat;
  m.fitted["c0_cap"] = lr.c0_cap;
  m.fitted["c1_hat"] = finite_or_null(lr.c1_hat);
  m.fitted["c2_hat"] = finite_or_null(lr.c2_hat);
  m.fitted["c1_pred"] = lr.c1_pred;
  m.fitted["c2_pred"] = lr.c2_pred;
  add(m, "upper_oscillation", lr.upper_ok(), "c0_hat = " + fmt(lr.c0_hat) + " <= " + fmt(lr.c0_cap));
  add(m, "lower_oscillation", lr.lower_ok() && lr.consistent(),
      "c1_hat = " + fmt(lr.c1_hat) + " > 0, c1_hat >= delta/4 and c2_hat = " + fmt(lr.c2_hat) +
          " <= 4 * 2 sup|g|/(1 - eta); pinned by " + lr.worst_lower_sample);
  m.result = {{"series", series_json(s)},
              {"first_generation", sc.first_generation},
              {"outside_pairs", {{"trials", lr.outside_trials}, {"violations", lr.outside_violations}}}};
}

}  // namespace

bool RunManifest::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json RunManifest::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) checks_json.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json t = json::object();
  for (const auto& [k, v] : timings) t[k] = v;
  return {{"version", version}, {"config", config}, {"checks", checks_json}, {"fitted", fitted},
          {"result", result}, {"timings_seconds", t}, {"all_pass", all_pass()}};
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Theory: return "theory";
    case Command::Synth: return "synth";
    case Command::Eval: return "eval";
    case Command::Osc: return "osc";
    case Command::BoxDim: return "boxdim";
    case Command::Cantor: return "cantor";
    case Command::Verify: return "verify";
  }
  return "";
}

Command parse_command(const std::string& name) {
  for (auto c : {Command::Theory, Command::Synth, Command::Eval, Command::Osc, Command::BoxDim, Command::Cantor,
                 Command::Verify})
    if (command_name(c) == name) return c;
  throw config_error(kModule, "unknown command \"" + name + "\"");
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"command", command_name(c.command)}, {"base", c.base}, {"seed", c.seed}};
  if (c.spec) j["spec"] = spec_to_json(*c.spec);
  if (c.synthesis) j["synthesis"] = {{"H", c.synthesis->H}, {"B", c.synthesis->B}};
  if (c.depth) j["depth"] = *c.depth;
  if (c.accuracy) j["accuracy"] = *c.accuracy;
  j["eta"] = c.eta ? json(*c.eta) : json("auto");
  switch (c.command) {
    case Command::Theory: j["window"] = {c.window.first, c.window.second}; break;
    case Command::Eval: j["x"] = c.x; break;
    case Command::Osc: j["t"] = c.t; j["r"] = c.r; break;
    case Command::BoxDim:
      j["domain"] = {c.domain.lo, c.domain.hi};
      j["ladder"] = c.ladder == "list" ? json(c.ladder_values) : json(c.ladder);
      break;
    case Command::Cantor: j["first_generation"] = c.first_generation; break;
    case Command::Verify: j["trials"] = c.trials; j["first_generation"] = c.first_generation; break;
    case Command::Synth: break;
  }
  return j;
}

RunManifest run(const ExperimentConfig& c) {
  if (c.command != Command::Synth && c.spec.has_value() == c.synthesis.has_value())
    throw config_error(kModule, "give exactly one of a spec file or an (H, B) synthesis request");
  if (c.depth && c.accuracy) throw config_error(kModule, "give either a depth or an accuracy target, not both");
  if (c.eta && !(*c.eta > 0.0 && *c.eta < 1.0)) throw config_error(kModule, "eta must lie in (0, 1)");
  if (!(c.domain.hi > c.domain.lo)) throw config_error(kModule, "domain must have positive length");
  RunManifest m;
  m.config = config_to_json(c);
  switch (c.command) {
    case Command::Theory: run_theory(c, m); break;
    case Command::Synth: run_synth(c, m); break;
    case Command::Eval: run_eval(c, m); break;
    case Command::Osc: run_osc(c, m); break;
    case Command::BoxDim: run_boxdim(c, m); break;
    case Command::Cantor: run_cantor(c, m); break;
    case Command::Verify: run_verify(c, m); break;
  }
  if (c.manifest) write_text_file(*c.manifest, m.to_json().dump(2) + "\n");
  return m;
}

}  // namespace weierdim
