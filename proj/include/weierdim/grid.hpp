#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "weierdim/series.hpp"

namespace weierdim {

struct Domain {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

enum class CountMethod { ColumnOscillation, CellEnumeration };

// Columns are the absolute grid cells [c r, (c+1) r) that meet the domain.
// Both methods sample the centres of `samples_per_column` equal sub-cells, so
// no CellEnumeration sample sits on a column boundary. ColumnOscillation adds
// the two column edges and measures V over the closed column.
struct ColumnCounts {
  double r = 0.0;
  std::int64_t first_column = 0;
  std::int64_t samples_per_column = 0;
  bool padded = false;  // domain is not a whole number of columns
  std::vector<std::int64_t> boxes;  // floor(V / r) + 1 (or distinct cells)
  std::vector<double> column_min;
  std::vector<double> column_max;
  double bias_bound = 0.0;  // sampled V per column underestimates by at most this
  std::int64_t total() const;
};

// Samples per column for scale r: enough to resolve the finest active
// wavelength and to keep consecutive samples less than r apart vertically.
std::int64_t column_density(const TruncatedSeries& series, double r, const Density& density = {});

// Column-oscillation count. r must lie in [1/b_N, x1 - x0].
ColumnCounts box_count_columns(const TruncatedSeries& series, double r, Domain domain,
                               const Density& density = {}, CountMethod method = CountMethod::ColumnOscillation);
std::int64_t box_count(const TruncatedSeries& series, double r, Domain domain, const Density& density = {});

// The sub-cell centre grid used by CellEnumeration, as (x, y) pairs sorted by x.
std::vector<std::pair<double, double>> sample_graph(const TruncatedSeries& series, double r, Domain domain,
                                                    std::int64_t samples_per_column);

// Number of distinct half-open cells [i r, (i+1) r) x [j r, (j+1) r) hit by the samples.
std::int64_t box_count_bruteforce(const std::vector<std::pair<double, double>>& samples, double r);
// Distinct cells per column index i, in increasing i.
std::vector<std::pair<std::int64_t, std::int64_t>> cells_per_column(
    const std::vector<std::pair<double, double>>& samples, double r);

struct BoxRow {
  double r = 0.0;
  std::int64_t N = 0;
};

struct BoxCountTable {
  std::vector<BoxRow> rows;  // sorted by decreasing r
  Domain domain;
  CountMethod method = CountMethod::ColumnOscillation;
  double r_min = 0.0;
  double r_max = 0.0;
  bool padded = false;
};

// Generation scales 1/b_n inside [1/b_N, min(1/b_1, x1 - x0)], the upper end
// itself, and factor-2 steps between consecutive anchors. Decreasing order.
std::vector<double> auto_ladder(const TruncatedSeries& series, Domain domain, double factor = 2.0);
// Generation scales only.
std::vector<double> generation_ladder(const TruncatedSeries& series, Domain domain);
// r_max, r_max / factor, ... down to r_min.
std::vector<double> geometric_ladder(double r_max, double r_min, double factor = 2.0);

BoxCountTable box_count_table(const TruncatedSeries& series, const std::vector<double>& ladder, Domain domain,
                              CountMethod method = CountMethod::ColumnOscillation, const Density& density = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  // Slope between consecutive rows (coarse to fine); entry i pairs rows i and i+1.
  std::vector<double> per_octave_slopes;
  bool degenerate = false;
};

// Least-squares slope of log N against -log r over the rows inside the
// table's validity window (at least four).
SlopeFit fit_dimension(const BoxCountTable& table);

}  // namespace weierdim
