#include "weierdim/series.hpp"

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

constexpr char kModule[] = "weierfn";
constexpr double kDefaultEta = 0.1;
const double kLogMaxFrequency = std::log(kMaxNativeFrequency);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double resolve_eta(const SequenceSpec& spec, int N, std::optional<double> eta) {
  if (eta) return *eta;
  const auto e = admissible_eta(spec, N);
  if (!e)
    throw config_error(kModule, "coefficient ratios a_{n+1}/a_n reach 1 beyond n = " + std::to_string(N) +
                                    "; no eta in (0, 1) bounds the tail");
  return *e;
}

}  // namespace

double native_value(double log_value) {
  const double v = std::exp(log_value);
  const double nearest = std::round(v);
  if (nearest >= 1.0 && std::abs(v - nearest) <= 1e-9 * v) return nearest;
  return v;
}

double native_frequency(const SequenceSpec& spec, int n) { return native_value(spec.log_b(n)); }
double native_coefficient(const SequenceSpec& spec, int n) { return std::exp(spec.log_a(n)); }

double TruncatedSeries::d() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.a * t.b;
  return s;
}

double TruncatedSeries::lipschitz() const { return g.lipschitz() * d(); }

double TruncatedSeries::a_after(int n) const {
  if (n < 0) throw config_error(kModule, "a_after needs n >= 0");
  return n < depth ? terms[n].a : 0.0;
}

std::optional<double> admissible_eta(const SequenceSpec& spec, int N, int horizon) {
  double worst = kDefaultEta;
  const int end = std::min(spec.max_index(), N + horizon);
  for (int i = N + 1; i < end; ++i) {
    const double ratio = std::exp(spec.log_a(i + 1) - spec.log_a(i));
    if (!(ratio < 1.0)) return std::nullopt;
    worst = std::max(worst, ratio);
  }
  return worst;
}

TruncatedSeries truncate_depth(const SequenceSpec& spec, const BaseFunction& g, int depth,
                               std::optional<double> eta) {
  if (depth < 0) throw config_error(kModule, "depth must be >= 0");
  if (depth > spec.max_index())
    throw config_error(kModule, "depth " + std::to_string(depth) + " exceeds the sequence range [1, " +
                                    std::to_string(spec.max_index()) + "]");
  std::vector<Term> terms;
  terms.reserve(depth);
  for (int n = 1; n <= depth; ++n) {
    if (spec.log_b(n) > kLogMaxFrequency + 1e-12)
      throw infeasible_error(kModule, "b_" + std::to_string(n) + " = exp(" + fmt(spec.log_b(n)) +
                                          ") exceeds the native frequency cap 2^50; depth " +
                                          std::to_string(depth) + " is not evaluable");
    terms.push_back({native_coefficient(spec, n), native_frequency(spec, n), spec.theta(n)});
  }
  const double e = resolve_eta(spec, depth, eta);
  const double tail = tail_bound(spec, g, depth, e);
  return TruncatedSeries{spec, g, depth, std::move(terms), tail, e};
}

TruncatedSeries truncate_accuracy(const SequenceSpec& spec, const BaseFunction& g, double epsilon,
                                  std::optional<double> eta) {
  if (!(epsilon > 0.0)) throw config_error(kModule, "accuracy target must be positive");
  for (int N = 0;; ++N) {
    const double e = resolve_eta(spec, N, eta);
    const double tail = tail_bound(spec, g, N, e);
    if (tail <= epsilon) return truncate_depth(spec, g, N, e);
    if (!spec.has_term(N + 1) || spec.log_b(N + 1) > kLogMaxFrequency + 1e-12)
      throw infeasible_error(kModule, "accuracy " + fmt(epsilon) + " needs more than " + std::to_string(N) +
                                          " terms, but b_" + std::to_string(N + 1) +
                                          " exceeds the native frequency cap 2^50 (tail bound at depth " +
                                          std::to_string(N) + " is " + fmt(tail) + ")");
  }
}

namespace {

// floor() through an integer conversion; doubles of magnitude 2^52 and above
// are integers already.
inline double fast_floor(double v) {
  if (!(std::abs(v) < 4503599627370496.0)) return v;
  const double t = static_cast<double>(static_cast<long long>(v));
  return t > v ? t - 1.0 : t;
}

// Exact low part of the product b x (so that b x = b * x + lo). Hardware fma
// when available, otherwise Dekker's product with Veltkamp splitting.
inline double product_error(double b, double x, double hi) {
#ifdef __FMA__
  return std::fma(b, x, -hi);
#else
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  const double bc = kSplit * b, xc = kSplit * x;
  const double bh = bc - (bc - b), bl = b - bh;
  const double xh = xc - (xc - x), xl = x - xh;
  return ((bh * xh - hi) + bh * xl + bl * xh) + bl * xl;
#endif
}

}  // namespace

double reduced_phase(double b, double x, double theta) {
  // b x = hi + lo exactly; hi - floor(hi) is exact for |hi| < 2^52.
  const double hi = b * x;
  const double lo = product_error(b, x, hi);
  double p = hi - fast_floor(hi);
  p += lo + (theta - fast_floor(theta));
  p -= fast_floor(p);
  return p < 1.0 ? p : 0.0;
}

double partial_sum(const TruncatedSeries& series, double x) {
  double s = 0.0;
  if (series.g.kind() == BaseKind::Sawtooth) {
    for (const auto& t : series.terms) {
      const double p = reduced_phase(t.b, x, t.theta);
      s += t.a * std::min(p, 1.0 - p);
    }
    return s;
  }
  for (const auto& t : series.terms) s += t.a * series.g.at_phase(reduced_phase(t.b, x, t.theta));
  return s;
}

Evaluation eval(const TruncatedSeries& series, double x) { return {partial_sum(series, x), series.tail_bound_value}; }

double active_frequency(const TruncatedSeries& series, const Density& density) {
  double b = 0.0;
  for (const auto& t : series.terms)
    if (2.0 * t.a * series.g.sup_abs() > density.inactive_amplitude) b = std::max(b, t.b);
  return b;
}

double sampling_bias(const TruncatedSeries& series, const Density& density, double step) {
  double d_active = 0.0, inactive_swing = 0.0;
  for (const auto& t : series.terms) {
    const double swing = 2.0 * t.a * series.g.sup_abs();
    if (swing > density.inactive_amplitude)
      d_active += t.a * t.b;
    else
      inactive_swing += swing;
  }
  return series.g.lipschitz() * d_active * step + inactive_swing;
}

OscillationSample oscillation(const TruncatedSeries& series, double t, double r, const Density& density) {
  if (!(r > 0.0) || !std::isfinite(r)) throw config_error(kModule, "oscillation needs r > 0");
  const double wavelengths = std::ceil(active_frequency(series, density) * r);
  const double want = std::max(static_cast<double>(density.min_samples),
                               static_cast<double>(density.per_wavelength) * wavelengths);
  if (want > static_cast<double>(kMaxOscillationSamples))
    throw infeasible_error(kModule, "oscillation on a window of length " + fmt(r) + " needs " + fmt(want) +
                                        " samples (limit 1e8); request a coarser scale or a smaller depth");
  const long long n = static_cast<long long>(want);

  // Grid t + r i / n for i = 0..n, split into fixed chunks so the reduction
  // order does not depend on the worker count.
  constexpr long long kChunk = 1 << 16;
  const long long points = n + 1;
  const std::size_t chunks = static_cast<std::size_t>((points + kChunk - 1) / kChunk);
  std::vector<double> lo(chunks), hi(chunks);
  auto scan = [&](std::size_t c) {
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    const long long end = std::min(points, static_cast<long long>(c + 1) * kChunk);
    for (long long i = static_cast<long long>(c) * kChunk; i < end; ++i) {
      const double x = i == n ? t + r : t + r * (static_cast<double>(i) / static_cast<double>(n));
      const double y = partial_sum(series, x);
      mn = std::min(mn, y);
      mx = std::max(mx, y);
    }
    lo[c] = mn;
    hi[c] = mx;
  };
  if (chunks > 1)
    parallel_for(chunks, scan);
  else
    scan(0);

  OscillationSample s;
  s.t = t;
  s.r = r;
  s.inf = *std::min_element(lo.begin(), lo.end());
  s.sup = *std::max_element(hi.begin(), hi.end());
  s.V = s.sup - s.inf;
  s.samples_used = points;
  s.bias_bound = sampling_bias(series, density, r / static_cast<double>(n)) + 2.0 * series.tail_bound_value;
  return s;
}

std::pair<double, double> validity_window(const TruncatedSeries& series) {
  if (series.terms.empty()) throw validity_error(kModule, "an empty truncation has no validity window");
  return {1.0 / series.terms.back().b, 1.0 / series.terms.front().b};
}

HolderEstimate holder_estimate(const TruncatedSeries& series, const std::vector<double>& scales, int windows,
                               const Density& density, double x0, double x1) {
  if (scales.size() < 2) throw config_error(kModule, "holder_estimate needs at least two scales");
  if (windows < 1) throw config_error(kModule, "holder_estimate needs at least one window start");
  if (!(x1 > x0)) throw config_error(kModule, "holder_estimate needs a non-empty domain");
  const auto [r_min, r_max] = validity_window(series);
  for (double r : scales) {
    if (!(r >= r_min * (1.0 - 1e-12) && r <= r_max * (1.0 + 1e-12)))
      throw validity_error(kModule, "scale " + fmt(r) + " outside the validity window [" + fmt(r_min) + ", " +
                                        fmt(r_max) + "] = [1/b_N, 1/b_1]");
  }
  HolderEstimate est;
  std::vector<double> lx, ly;
  for (double r : scales) {
    std::vector<double> v(static_cast<std::size_t>(windows));
    parallel_for(v.size(), [&](std::size_t i) {
      const double t = x0 + (x1 - x0) * (static_cast<double>(i) + 0.5) / windows;
      v[i] = oscillation(series, t, r, density).V;
    });
    const double sup_v = *std::max_element(v.begin(), v.end());
    est.rows.push_back({r, sup_v});
    if (sup_v > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(sup_v));
    }
  }
  if (lx.size() < 2) throw config_error(kModule, "holder_estimate: oscillation vanishes at all scales");
  const LineFit fit = least_squares(lx, ly);
  est.alpha_hat = fit.slope;
  est.intercept = fit.intercept;
  est.fit_residual = fit.residual;
  return est;
}

}  // namespace weierdim
