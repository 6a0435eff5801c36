#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "weierdim/series.hpp"
#include "weierdim/theory.hpp"

namespace weierdim {

using BigInt = boost::multiprecision::cpp_int;

struct CantorInterval {
  std::int64_t j = 0;
  double left = 0.0;
  double right = 0.0;
  std::size_t parent = 0;  // index into the previous level
};

struct CantorLevel {
  int generation = 0;  // 0 for I itself
  double b = 1.0;      // frequency of the generation (1 at level 0)
  std::vector<CantorInterval> intervals;  // sorted by j, hence by position
  std::vector<double> weights;
  std::vector<BigInt> weight_denominators;  // weight = 1 / denominator exactly
  std::vector<std::int64_t> children;       // children per interval (filled for all but the last level)
};

// Level 0 is I; level l >= 1 holds generation first_generation + l - 1.
struct CantorScaffold {
  int first_generation = 1;
  double I_lo = 0.0;
  double I_hi = 1.0;
  std::vector<CantorLevel> levels;

  double I_length() const { return I_hi - I_lo; }
  int deepest_generation() const { return levels.back().generation; }
  const CantorLevel& generation(int n) const;
};

inline constexpr double kMaxCantorFrequency = 1099511627776.0;  // 2^40

// Intervals I_{n,j} = (I - theta_n + j) / b_n nested in their parents, down to
// generation `depth`. first_generation = 0 picks the least starting generation
// for which every interval has at least two children.
CantorScaffold build_levels(const SequenceSpec& spec, const BaseFunction& g, int depth, int first_generation = 1);

double measure_of_interval(const CantorScaffold& scaffold, int generation, std::int64_t j);

// Sum of weights at every level equals 1 in exact rational arithmetic.
bool exact_conservation(const CantorScaffold& scaffold);

struct BranchingReport {
  double q_hat = 0.0;          // fitted branching constant
  bool floor_ok = true;        // N_{n,j} > |I| b_{n+1}/b_n - 2 at every parent
  bool card_ok = true;         // card J_n > q^n b_n
  bool measure_ok = true;      // mu(I_{n,j}) < 1 / (q^n b_n)
  bool lengths_decrease = true;
  bool conservation_ok = true;
  std::vector<double> total_length;  // card J_n |I| / b_n per level
  std::vector<std::string> violations;
  bool ok() const { return floor_ok && card_ok && measure_ok && lengths_decrease && conservation_ok; }
};

// q_hat is the least ratio N_{n,j} / (b_{n+1}/b_n) over all parents (shrunk
// by 1e-9), from which both card J_n > q^n b_n and the measure bound follow.
BranchingReport branching_check(const CantorScaffold& scaffold);

struct LevelHits {
  int generation = 0;
  std::int64_t count = 0;
  std::vector<std::size_t> hits;  // indices into the level
  double mass = 0.0;              // mu-mass of the hit intervals
};

struct HitCounts {
  double t = 0.0;
  double r = 0.0;
  double f_t = 0.0;
  std::vector<LevelHits> levels;
  std::optional<ScaleDecomposition> scales;
  const LevelHits* at_generation(int n) const;
};

// Intervals whose graph piece meets the square of side r centred at (t, f(t)).
// Ranges of f are sampled and widened by the sampling bias, so the count may
// over-count but never misses a hit.
HitCounts hit_counts(const TruncatedSeries& series, const CantorScaffold& scaffold, double t, double r,
                     const Density& density = {});

struct ExponentRow {
  double r = 0.0;
  double nu_upper = 0.0;  // upper bound on nu(Q_r(t))
  int bound_generation = 0;
  double exponent = 0.0;  // log nu_upper / log r
  bool resolved = false;
};

struct LocalExponentTrace {
  double t = 0.0;
  std::vector<ExponentRow> rows;
  double target = 0.0;  // 1 + liminf log d_n / log(b_{n+1} d_n / d_{n+1})
};

// nu(Q_r(t)) is bounded by the least mu-mass of the hit intervals over all
// built generations. A row is resolved when the deepest generation D satisfies
// d_{D-1} / b_D <= r, so the hit count at D reflects the graph's vertical
// extent inside the square.
LocalExponentTrace local_exponent(const TruncatedSeries& series, const CantorScaffold& scaffold, double t,
                                  const std::vector<double>& ladder, const Density& density = {});

// Left endpoints of deepest-level intervals stand in for points of the Cantor set.
std::vector<double> cantor_points(const CantorScaffold& scaffold);

struct LemmaReport {
  int trials = 0;
  // Upper oscillation |f(x) - f(y)| <= c0 (d_n |x - y| + a_{n+1}) on random pairs in [0, 1].
  double c0_hat = 0.0;
  double c0_cap = 0.0;  // 4 max(L, 2 sup|g| / (1 - eta))
  // Lower oscillation |f(x) - f(y)| >= c1 d_n |x - y| - c2 a_{n+1} inside I_{n,j}.
  double c1_hat = 0.0;  // largest feasible c1 at c2 = c2_pred
  double c2_hat = 0.0;  // smallest feasible c2 >= 0 at c1 = delta
  double c1_pred = 0.0;  // delta
  double c2_pred = 0.0;  // 2 sup|g| / (1 - eta)
  double q_hat = 0.0;
  // Pairs placed symmetrically about a maximum of g, outside every I_{n,j}.
  int outside_trials = 0;
  int outside_violations = 0;
  std::string worst_lower_sample;  // the pair that pins c1_hat
  bool upper_ok() const { return c0_hat <= c0_cap; }
  bool lower_ok() const { return c1_hat > 0.0; }
  bool consistent() const { return c1_hat >= c1_pred / 4.0 && c2_hat <= 4.0 * c2_pred; }
};

LemmaReport lemma_checks(const TruncatedSeries& series, const CantorScaffold& scaffold, int trials,
                         std::uint64_t seed = 42);

}  // namespace weierdim
