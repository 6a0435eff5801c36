#include "weierdim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "weierdim/error.hpp"
#include "weierdim/parallel.hpp"
#include "weierdim/stats.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "grid";
constexpr double kMaxSamples = 1e9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// x / r rounded to the nearest integer when it is within 1e-9 of one.
double snapped_ratio(double x, double r) {
  const double q = x / r;
  const double n = std::round(q);
  return std::abs(q - n) <= 1e-9 * std::max(1.0, std::abs(q)) ? n : q;
}

std::int64_t next_pow2(double v) {
  std::int64_t p = 1;
  while (static_cast<double>(p) < v) p <<= 1;
  return p;
}

void check_scale(const TruncatedSeries& series, double r, Domain domain) {
  if (!(domain.hi > domain.lo)) throw config_error(kModule, "domain must have positive length");
  if (!(r > 0.0) || !std::isfinite(r)) throw config_error(kModule, "box size r must be positive");
  const double r_min = series.terms.empty() ? 0.0 : 1.0 / series.terms.back().b;
  const double r_max = domain.length();
  if (r < r_min * (1.0 - 1e-12) || r > r_max * (1.0 + 1e-12))
    throw validity_error(kModule, "box size " + fmt(r) + " outside the validity window [" + fmt(r_min) + ", " +
                                      fmt(r_max) + "] = [1/b_N, x1 - x0]");
}

}  // namespace

std::int64_t ColumnCounts::total() const {
  std::int64_t s = 0;
  for (auto b : boxes) s += b;
  return s;
}

std::int64_t column_density(const TruncatedSeries& series, double r, const Density& density) {
  double d_active = 0.0;
  for (const auto& t : series.terms)
    if (2.0 * t.a * series.g.sup_abs() > density.inactive_amplitude) d_active += t.a * t.b;
  const double wave = static_cast<double>(density.per_wavelength) * std::ceil(active_frequency(series, density) * r);
  const double vertical = std::ceil(2.0 * series.g.lipschitz() * d_active) + 1.0;
  return next_pow2(std::max({static_cast<double>(density.min_samples), wave, vertical}));
}

ColumnCounts box_count_columns(const TruncatedSeries& series, double r, Domain domain, const Density& density,
                               CountMethod method) {
  check_scale(series, r, domain);
  const double lo_ratio = snapped_ratio(domain.lo, r);
  const double hi_ratio = snapped_ratio(domain.hi, r);
  ColumnCounts cc;
  cc.r = r;
  cc.first_column = static_cast<std::int64_t>(std::floor(lo_ratio));
  const auto end_column = static_cast<std::int64_t>(std::ceil(hi_ratio));
  cc.padded = lo_ratio != std::floor(lo_ratio) || hi_ratio != std::ceil(hi_ratio);
  const std::int64_t columns = end_column - cc.first_column;
  const std::int64_t s = column_density(series, r, density);
  if (static_cast<double>(columns) * static_cast<double>(s) > kMaxSamples)
    throw infeasible_error(kModule, "box count at r = " + fmt(r) + " needs " +
                                        fmt(static_cast<double>(columns) * static_cast<double>(s)) +
                                        " samples (limit 1e9)");
  cc.samples_per_column = s;
  cc.boxes.assign(static_cast<std::size_t>(columns), 0);
  cc.column_min.assign(static_cast<std::size_t>(columns), 0.0);
  cc.column_max.assign(static_cast<std::size_t>(columns), 0.0);

  parallel_for(static_cast<std::size_t>(columns), [&](std::size_t k) {
    const double c = static_cast<double>(cc.first_column + static_cast<std::int64_t>(k));
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    std::vector<std::int64_t> cells;
    if (method == CountMethod::ColumnOscillation) {
      // Closed column: the sub-cell centres plus both edges, so V is exact on
      // linear pieces and never below the CellEnumeration sample range.
      for (std::int64_t i = -1; i <= s; ++i) {
        const double frac = i < 0 ? 0.0 : i == s ? 1.0 : (static_cast<double>(i) + 0.5) / static_cast<double>(s);
        const double y = partial_sum(series, r * (c + frac));
        mn = std::min(mn, y);
        mx = std::max(mx, y);
      }
    } else {
      cells.reserve(static_cast<std::size_t>(s));
      for (std::int64_t i = 0; i < s; ++i) {
        const double x = r * (c + (static_cast<double>(i) + 0.5) / static_cast<double>(s));
        const double y = partial_sum(series, x);
        mn = std::min(mn, y);
        mx = std::max(mx, y);
        cells.push_back(static_cast<std::int64_t>(std::floor(y / r)));
      }
    }
    cc.column_min[k] = mn;
    cc.column_max[k] = mx;
    if (method == CountMethod::ColumnOscillation) {
      cc.boxes[k] = static_cast<std::int64_t>(std::floor(snapped_ratio(mx - mn, r))) + 1;
    } else {
      std::sort(cells.begin(), cells.end());
      cc.boxes[k] = std::unique(cells.begin(), cells.end()) - cells.begin();
    }
  });
  cc.bias_bound = sampling_bias(series, density, r / static_cast<double>(s));
  return cc;
}

std::int64_t box_count(const TruncatedSeries& series, double r, Domain domain, const Density& density) {
  return box_count_columns(series, r, domain, density).total();
}

std::vector<std::pair<double, double>> sample_graph(const TruncatedSeries& series, double r, Domain domain,
                                                    std::int64_t samples_per_column) {
  check_scale(series, r, domain);
  if (samples_per_column < 1) throw config_error(kModule, "samples_per_column must be positive");
  const auto first = static_cast<std::int64_t>(std::floor(snapped_ratio(domain.lo, r)));
  const auto end = static_cast<std::int64_t>(std::ceil(snapped_ratio(domain.hi, r)));
  const double s = static_cast<double>(samples_per_column);
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>((end - first) * samples_per_column));
  parallel_for(static_cast<std::size_t>(end - first), [&](std::size_t k) {
    const double c = static_cast<double>(first + static_cast<std::int64_t>(k));
    for (std::int64_t i = 0; i < samples_per_column; ++i) {
      const double x = r * (c + (static_cast<double>(i) + 0.5) / s);
      out[k * static_cast<std::size_t>(samples_per_column) + static_cast<std::size_t>(i)] = {x, partial_sum(series, x)};
    }
  });
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> cells_per_column(
    const std::vector<std::pair<double, double>>& samples, double r) {
  if (!(r > 0.0)) throw config_error(kModule, "box size r must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  cells.reserve(samples.size());
  for (const auto& [x, y] : samples)
    cells.emplace_back(static_cast<std::int64_t>(std::floor(x / r)), static_cast<std::int64_t>(std::floor(y / r)));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<std::pair<std::int64_t, std::int64_t>> per_column;
  for (const auto& [i, j] : cells) {
    if (per_column.empty() || per_column.back().first != i)
      per_column.emplace_back(i, 1);
    else
      ++per_column.back().second;
  }
  return per_column;
}

std::int64_t box_count_bruteforce(const std::vector<std::pair<double, double>>& samples, double r) {
  std::int64_t n = 0;
  for (const auto& [col, count] : cells_per_column(samples, r)) n += count;
  return n;
}

std::vector<double> generation_ladder(const TruncatedSeries& series, Domain domain) {
  if (series.terms.empty()) throw validity_error(kModule, "an empty truncation has no generation scales");
  const double r_min = 1.0 / series.terms.back().b;
  const double r_max = std::min(1.0 / series.terms.front().b, domain.length());
  std::vector<double> out;
  for (const auto& t : series.terms) {
    const double r = 1.0 / t.b;
    if (r >= r_min * (1.0 - 1e-12) && r <= r_max * (1.0 + 1e-12)) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return a / b < 1.01; }), out.end());
  return out;
}

std::vector<double> auto_ladder(const TruncatedSeries& series, Domain domain, double factor) {
  if (!(factor > 1.0)) throw config_error(kModule, "ladder factor must exceed 1");
  auto anchors = generation_ladder(series, domain);
  const double r_max = std::min(1.0 / series.terms.front().b, domain.length());
  if (anchors.empty() || anchors.front() < r_max / 1.01) anchors.insert(anchors.begin(), r_max);
  std::vector<double> out;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    out.push_back(anchors[i]);
    if (i + 1 == anchors.size()) break;
    for (double r = anchors[i] / factor; r > anchors[i + 1] * std::sqrt(factor); r /= factor) out.push_back(r);
  }
  return out;
}

std::vector<double> geometric_ladder(double r_max, double r_min, double factor) {
  if (!(factor > 1.0) || !(r_max >= r_min) || !(r_min > 0.0))
    throw config_error(kModule, "geometric ladder needs 0 < r_min <= r_max and factor > 1");
  std::vector<double> out;
  for (double r = r_max; r >= r_min * (1.0 - 1e-12); r /= factor) out.push_back(r);
  return out;
}

BoxCountTable box_count_table(const TruncatedSeries& series, const std::vector<double>& ladder, Domain domain,
                              CountMethod method, const Density& density) {
  BoxCountTable table;
  table.domain = domain;
  table.method = method;
  table.r_min = series.terms.empty() ? 0.0 : 1.0 / series.terms.back().b;
  table.r_max = series.terms.empty() ? domain.length() : std::min(1.0 / series.terms.front().b, domain.length());
  std::vector<double> rs = ladder;
  std::sort(rs.begin(), rs.end(), std::greater<>());
  for (double r : rs) {
    const auto cc = box_count_columns(series, r, domain, density, method);
    table.padded = table.padded || cc.padded;
    table.rows.push_back({r, cc.total()});
  }
  return table;
}

SlopeFit fit_dimension(const BoxCountTable& table) {
  std::vector<BoxRow> rows;
  for (const auto& row : table.rows)
    if (row.r >= table.r_min * (1.0 - 1e-12) && row.r <= table.r_max * (1.0 + 1e-12) && row.N > 0)
      rows.push_back(row);
  std::sort(rows.begin(), rows.end(), [](const BoxRow& a, const BoxRow& b) { return a.r > b.r; });
  if (rows.size() < 4)
    throw config_error(kModule, "fit_dimension needs at least 4 rows inside the validity window, got " +
                                    std::to_string(rows.size()));
  SlopeFit fit;
  fit.r_max = rows.front().r;
  fit.r_min = rows.back().r;
  std::vector<double> x, y;
  for (const auto& row : rows) {
    x.push_back(-std::log(row.r));
    y.push_back(std::log(static_cast<double>(row.N)));
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) fit.per_octave_slopes.push_back((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
  if (std::all_of(rows.begin(), rows.end(), [&](const BoxRow& r) { return r.N == rows.front().N; })) {
    fit.degenerate = true;
    return fit;
  }
  const LineFit lf = least_squares(x, y);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.residual = lf.residual;
  return fit;
}

}  // namespace weierdim
