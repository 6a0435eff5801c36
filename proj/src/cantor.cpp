#include "weierdim/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "weierdim/error.hpp"
#include "weierdim/parallel.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "cantor";
constexpr std::size_t kMaxIntervalsPerLevel = 20000000;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Slack for closed-interval membership in units of j, covering the rounding
// of (endpoint * b_n) in native precision.
double index_slack(double scaled) {
  return std::max(1e-12, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(scaled));
}

CantorScaffold build_from(const SequenceSpec& spec, const BaseFunction& g, int depth, int first) {
  CantorScaffold sc;
  sc.first_generation = first;
  sc.I_lo = g.interval_lo();
  sc.I_hi = g.interval_hi();
  const double u = sc.I_lo, v = sc.I_hi;

  CantorLevel root;
  root.generation = 0;
  root.b = 1.0;
  root.intervals.push_back({0, u, v, 0});
  root.weights.push_back(1.0);
  root.weight_denominators.push_back(1);
  sc.levels.push_back(std::move(root));

  for (int n = first; n <= depth; ++n) {
    CantorLevel& parent = sc.levels.back();
    CantorLevel level;
    level.generation = n;
    level.b = native_frequency(spec, n);
    const double b = level.b;
    const double theta = spec.theta(n);
    parent.children.assign(parent.intervals.size(), 0);
    for (std::size_t p = 0; p < parent.intervals.size(); ++p) {
      const auto& P = parent.intervals[p];
      const double lo_scaled = P.left * b - u + theta;
      const double hi_scaled = P.right * b - v + theta;
      const auto j_lo = static_cast<std::int64_t>(std::ceil(lo_scaled - index_slack(P.left * b)));
      const auto j_hi = static_cast<std::int64_t>(std::floor(hi_scaled + index_slack(P.right * b)));
      const std::int64_t count = std::max<std::int64_t>(0, j_hi - j_lo + 1);
      if (count < 2)
        throw config_error(kModule, "generation " + std::to_string(n) + ": the interval [" + fmt(P.left) + ", " +
                                        fmt(P.right) + "] contains " + std::to_string(count) +
                                        " interval(s) of the next generation, at least 2 are required");
      if (level.intervals.size() + static_cast<std::size_t>(count) > kMaxIntervalsPerLevel)
        throw infeasible_error(kModule, "generation " + std::to_string(n) + " has more than 2e7 intervals");
      parent.children[p] = count;
      const BigInt den = parent.weight_denominators[p] * count;
      const double w = parent.weights[p] / static_cast<double>(count);
      for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const double jd = static_cast<double>(j);
        level.intervals.push_back({j, (u - theta + jd) / b, (v - theta + jd) / b, p});
        level.weights.push_back(w);
        level.weight_denominators.push_back(den);
      }
    }
    sc.levels.push_back(std::move(level));
  }
  return sc;
}

}  // namespace

const CantorLevel& CantorScaffold::generation(int n) const {
  if (n == 0) return levels.front();
  const int idx = n - first_generation + 1;
  if (n < first_generation || idx >= static_cast<int>(levels.size()))
    throw config_error(kModule, "generation " + std::to_string(n) + " is not built (generations " +
                                    std::to_string(first_generation) + ".." + std::to_string(deepest_generation()) +
                                    ")");
  return levels[idx];
}

CantorScaffold build_levels(const SequenceSpec& spec, const BaseFunction& g, int depth, int first_generation) {
  if (depth < 1) throw config_error(kModule, "depth must be >= 1");
  if (first_generation < 0 || first_generation > depth)
    throw config_error(kModule, "first generation must lie in [1, depth] (0 selects it automatically)");
  if (!spec.has_term(depth)) throw config_error(kModule, "depth exceeds the sequence range");
  if (spec.log_b(depth) > std::log(kMaxCantorFrequency) + 1e-12)
    throw infeasible_error(kModule, "b_" + std::to_string(depth) + " exceeds 2^40; interval endpoints at depth " +
                                        std::to_string(depth) + " are not representable");
  if (first_generation > 0) return build_from(spec, g, depth, first_generation);
  std::string last;
  for (int first = 1; first <= depth; ++first) {
    try {
      return build_from(spec, g, depth, first);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Config) throw;
      last = e.what();
    }
  }
  throw config_error(kModule, "no starting generation gives at least two children everywhere; last failure: " + last);
}

double measure_of_interval(const CantorScaffold& scaffold, int generation, std::int64_t j) {
  const auto& level = scaffold.generation(generation);
  const auto it = std::lower_bound(level.intervals.begin(), level.intervals.end(), j,
                                   [](const CantorInterval& iv, std::int64_t key) { return iv.j < key; });
  if (it == level.intervals.end() || it->j != j)
    throw config_error(kModule, "no interval j = " + std::to_string(j) + " at generation " + std::to_string(generation));
  return level.weights[static_cast<std::size_t>(it - level.intervals.begin())];
}

bool exact_conservation(const CantorScaffold& scaffold) {
  using boost::multiprecision::cpp_rational;
  for (const auto& level : scaffold.levels) {
    cpp_rational sum = 0;
    for (const auto& den : level.weight_denominators) sum += cpp_rational(BigInt(1), den);
    if (sum != 1) return false;
  }
  return true;
}

BranchingReport branching_check(const CantorScaffold& scaffold) {
  BranchingReport rep;
  const double I = scaffold.I_length();
  double q = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < scaffold.levels.size(); ++l) {
    const auto& level = scaffold.levels[l];
    const double ratio = scaffold.levels[l + 1].b / level.b;
    for (std::size_t p = 0; p < level.intervals.size(); ++p) {
      const auto N = static_cast<double>(level.children[p]);
      q = std::min(q, N / ratio);
      if (!(N > I * ratio - 2.0)) {
        rep.floor_ok = false;
        rep.violations.push_back("branching floor fails at generation " + std::to_string(level.generation) +
                                 ", j = " + std::to_string(level.intervals[p].j));
      }
    }
  }
  rep.q_hat = std::isfinite(q) ? q * (1.0 - 1e-9) : 0.0;
  const double log_q = std::log(rep.q_hat);

  for (std::size_t l = 0; l < scaffold.levels.size(); ++l) {
    const auto& level = scaffold.levels[l];
    const double card = static_cast<double>(level.intervals.size());
    rep.total_length.push_back(card * I / level.b);
    if (l > 0 && !(rep.total_length[l] < rep.total_length[l - 1])) {
      rep.lengths_decrease = false;
      rep.violations.push_back("total length does not decrease at generation " + std::to_string(level.generation));
    }
    if (l == 0) continue;
    const int n = level.generation;
    const double log_bound = n * log_q + std::log(level.b);  // log(q^n b_n)
    if (!(std::log(card) > log_bound)) {
      rep.card_ok = false;
      rep.violations.push_back("card J_" + std::to_string(n) + " = " + fmt(card) + " is not above q^n b_n");
    }
    const double w_max = *std::max_element(level.weights.begin(), level.weights.end());
    if (!(std::log(w_max) < -log_bound)) {
      rep.measure_ok = false;
      rep.violations.push_back("mu(I_{" + std::to_string(n) + ",j}) = " + fmt(w_max) + " is not below 1/(q^n b_n)");
    }
  }
  rep.conservation_ok = exact_conservation(scaffold);
  if (!rep.conservation_ok) rep.violations.push_back("level weights do not sum to 1");
  return rep;
}

const LevelHits* HitCounts::at_generation(int n) const {
  for (const auto& l : levels)
    if (l.generation == n) return &l;
  return nullptr;
}

HitCounts hit_counts(const TruncatedSeries& series, const CantorScaffold& scaffold, double t, double r,
                     const Density& density) {
  if (!(r > 0.0)) throw config_error(kModule, "hit_counts needs r > 0");
  // Coarse scales are only geometry; below 1/b_N the truncation is smooth.
  const auto [r_min, r_max] = validity_window(series);
  if (r < r_min * (1.0 - 1e-12))
    throw validity_error(kModule, "scale " + fmt(r) + " below the validity window end 1/b_N = " + fmt(r_min));
  (void)r_max;

  HitCounts hc;
  hc.t = t;
  hc.r = r;
  hc.f_t = partial_sum(series, t);
  const double xl = t - r / 2, xr = t + r / 2;
  const double yl = hc.f_t - r / 2, yr = hc.f_t + r / 2;
  for (const auto& level : scaffold.levels) {
    LevelHits lh;
    lh.generation = level.generation;
    auto it = std::lower_bound(level.intervals.begin(), level.intervals.end(), xl,
                               [](const CantorInterval& iv, double x) { return iv.right < x; });
    for (; it != level.intervals.end() && it->left <= xr; ++it) {
      const double a = std::max(it->left, xl), b = std::min(it->right, xr);
      if (a > b) continue;
      double lo, hi;
      if (b > a) {
        const auto s = oscillation(series, a, b - a, density);
        const double bias = s.bias_bound - 2.0 * series.tail_bound_value;
        lo = s.inf - bias;
        hi = s.sup + bias;
      } else {
        lo = hi = partial_sum(series, a);
      }
      if (hi >= yl && lo <= yr) {
        const auto idx = static_cast<std::size_t>(it - level.intervals.begin());
        lh.hits.push_back(idx);
        lh.mass += level.weights[idx];
      }
    }
    lh.count = static_cast<std::int64_t>(lh.hits.size());
    hc.levels.push_back(std::move(lh));
  }
  const auto& spec = series.spec;
  if (r < std::exp(-spec.log_b(1))) {
    try {
      hc.scales = scale_decomposition(spec, r);
    } catch (const Error&) {
      hc.scales.reset();
    }
  }
  return hc;
}

namespace {

double exponent_target(const SequenceSpec& spec) {
  if (const auto cf = closed_form_dims(spec)) return cf->first;
  const int n1 = std::min(spec.max_index() - 1, 30);
  if (n1 < 3) return std::numeric_limits<double>::quiet_NaN();
  return dimension_report(spec, 1, n1).hausdorff_dim_estimate;
}

}  // namespace

LocalExponentTrace local_exponent(const TruncatedSeries& series, const CantorScaffold& scaffold, double t,
                                  const std::vector<double>& ladder, const Density& density) {
  LocalExponentTrace tr;
  tr.t = t;
  tr.target = exponent_target(series.spec);
  const int D = scaffold.deepest_generation();
  const double log_resolution =
      D >= 2 ? log_d(series.spec, D - 1).log() - series.spec.log_b(D) : -std::numeric_limits<double>::infinity();
  for (double r : ladder) {
    if (!(r > 0.0 && r < 1.0)) throw config_error(kModule, "local exponent scales must lie in (0, 1)");
    const HitCounts hc = hit_counts(series, scaffold, t, r, density);
    ExponentRow row;
    row.r = r;
    row.nu_upper = std::numeric_limits<double>::infinity();
    for (const auto& lh : hc.levels) {
      if (lh.mass < row.nu_upper) {
        row.nu_upper = lh.mass;
        row.bound_generation = lh.generation;
      }
    }
    if (!(row.nu_upper > 0.0))
      throw config_error(kModule, "no interval meets Q_r(t) at r = " + fmt(r) + "; t = " + fmt(t) +
                                      " is not a point of the Cantor scaffold");
    row.exponent = std::log(row.nu_upper) / std::log(r);
    row.resolved = log_resolution <= std::log(r) + 1e-12;
    tr.rows.push_back(row);
  }
  return tr;
}

std::vector<double> cantor_points(const CantorScaffold& scaffold) {
  std::vector<double> pts;
  for (const auto& iv : scaffold.levels.back().intervals) pts.push_back(iv.left);
  return pts;
}

LemmaReport lemma_checks(const TruncatedSeries& series, const CantorScaffold& scaffold, int trials,
                         std::uint64_t seed) {
  if (trials < 100) throw config_error(kModule, "lemma checks need at least 100 trials");
  const int N = series.depth;
  if (N < 1) throw config_error(kModule, "lemma checks need a truncation of depth >= 1");
  const auto& g = series.g;
  const auto& spec = series.spec;
  const auto logd = log_d_prefix(spec, N);
  auto d = [&](int n) { return std::exp(logd[n - 1]); };

  LemmaReport rep;
  rep.trials = trials;
  rep.c1_pred = g.slope_floor();
  rep.c2_pred = 2.0 * g.sup_abs() / (1.0 - series.eta);
  rep.c0_cap = 4.0 * std::max(g.lipschitz(), rep.c2_pred);
  rep.q_hat = branching_check(scaffold).q_hat;

  std::vector<std::size_t> usable;
  for (std::size_t l = 1; l < scaffold.levels.size(); ++l)
    if (scaffold.levels[l].generation <= N) usable.push_back(l);
  if (usable.empty()) throw config_error(kModule, "no built generation lies within the truncation depth");

  // Draw every sample up front from one generator so results do not depend on threads.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_n(1, N);
  std::uniform_int_distribution<std::size_t> pick_level(0, usable.size() - 1);
  const double log_dx_min = -std::log(series.finest_frequency()) - std::log(1e3);

  struct Pair {
    int n;
    double x, y;
  };
  std::vector<Pair> upper(trials), lower(trials), outside(trials);
  for (auto& p : upper) {
    p.n = pick_n(rng);
    p.x = unit(rng);
    p.y = p.x + std::exp(log_dx_min * unit(rng));
  }
  for (auto& p : lower) {
    const auto& level = scaffold.levels[usable[pick_level(rng)]];
    std::uniform_int_distribution<std::size_t> pick_iv(0, level.intervals.size() - 1);
    const auto& iv = level.intervals[pick_iv(rng)];
    p.n = level.generation;
    p.x = iv.left + (iv.right - iv.left) * unit(rng);
    p.y = iv.left + (iv.right - iv.left) * unit(rng);
  }
  // A maximum of g: there f_n is flat to first order and the pair straddles it.
  double peak = 0.0, g_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    const double p = (i + 0.5) / 4096.0;
    if (g.at_phase(p) > g_max) {
      g_max = g.at_phase(p);
      peak = p;
    }
  }
  const double half_width = std::min(0.05, 0.5 * std::min(peak, 1.0 - peak));
  for (auto& p : outside) {
    p.n = scaffold.levels[usable[pick_level(rng)]].generation;
    const double b = series.terms[p.n - 1].b;
    const double j = std::floor(unit(rng) * std::max(1.0, std::floor(b)));
    const double centre = (peak - series.terms[p.n - 1].theta + j) / b;
    const double s = half_width * (0.1 + 0.9 * unit(rng)) / b;
    p.x = centre - s;
    p.y = centre + s;
  }

  std::vector<double> c0(trials), c1(trials), c2(trials);
  std::vector<int> violated(trials);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
    {
      const auto& p = upper[i];
      const double D = std::abs(partial_sum(series, p.x) - partial_sum(series, p.y));
      c0[i] = D / (d(p.n) * std::abs(p.x - p.y) + series.a_after(p.n));
    }
    {
      const auto& p = lower[i];
      const double dx = std::abs(p.x - p.y);
      const double D = std::abs(partial_sum(series, p.x) - partial_sum(series, p.y));
      const double a_next = series.a_after(p.n);
      c1[i] = dx > 0.0 ? (D + rep.c2_pred * a_next) / (d(p.n) * dx) : std::numeric_limits<double>::infinity();
      const double deficit = rep.c1_pred * d(p.n) * dx - D;
      if (deficit <= 0.0)
        c2[i] = 0.0;
      else
        c2[i] = a_next > 0.0 ? deficit / a_next : std::numeric_limits<double>::infinity();
    }
    violated[i] = 0;
  });

  const auto worst = static_cast<std::size_t>(std::min_element(c1.begin(), c1.end()) - c1.begin());
  rep.c0_hat = *std::max_element(c0.begin(), c0.end());
  rep.c1_hat = c1[worst];
  rep.c2_hat = *std::max_element(c2.begin(), c2.end());
  rep.worst_lower_sample = "n = " + std::to_string(lower[worst].n) + ", x = " + fmt(lower[worst].x) +
                           ", y = " + fmt(lower[worst].y);

  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
    const auto& p = outside[i];
    const double D = std::abs(partial_sum(series, p.x) - partial_sum(series, p.y));
    const double bound = rep.c1_hat * d(p.n) * std::abs(p.x - p.y) - rep.c2_pred * series.a_after(p.n);
    violated[i] = D < bound ? 1 : 0;
  });
  rep.outside_trials = trials;
  for (int v : violated) rep.outside_violations += v;
  return rep;
}

}  // namespace weierdim
