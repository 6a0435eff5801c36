#pragma once

#include <optional>
#include <vector>

#include "weierdim/base_function.hpp"
#include "weierdim/sequence.hpp"

namespace weierdim {

// Frequencies above this bound are rejected for native evaluation.
inline constexpr double kMaxNativeFrequency = 1125899906842624.0;  // 2^50

// exp(log_value), snapped to the nearest integer when within relative 1e-9.
double native_value(double log_value);
// b_n as a double (snapped), a_n as a double.
double native_frequency(const SequenceSpec& spec, int n);
double native_coefficient(const SequenceSpec& spec, int n);

struct Term {
  double a = 0.0;
  double b = 0.0;
  double theta = 0.0;
};

// Partial sum of the first `depth` terms together with a bound on the
// distance to the full series.
struct TruncatedSeries {
  SequenceSpec spec;
  BaseFunction g;
  int depth = 0;
  std::vector<Term> terms;
  double tail_bound_value = 0.0;
  double eta = 0.1;

  // d_N = a_1 b_1 + ... + a_N b_N in native precision.
  double d() const;
  // Lipschitz constant L * d_N of the partial sum.
  double lipschitz() const;
  // a_{n+1} of the partial sum: zero once n >= depth.
  double a_after(int n) const;
  double finest_frequency() const { return terms.empty() ? 0.0 : terms.back().b; }
};

// Least eta in [0.1, 1) for which the coefficient ratios a_{i+1}/a_i stay
// below eta on N < i < N + horizon; nullopt when some ratio reaches 1.
std::optional<double> admissible_eta(const SequenceSpec& spec, int N, int horizon = 64);

// Truncation at a fixed depth N >= 0. Without an explicit eta the least
// admissible one (never below 0.1) is used.
TruncatedSeries truncate_depth(const SequenceSpec& spec, const BaseFunction& g, int depth,
                               std::optional<double> eta = std::nullopt);
// Least depth whose tail bound is at most epsilon.
TruncatedSeries truncate_accuracy(const SequenceSpec& spec, const BaseFunction& g, double epsilon,
                                  std::optional<double> eta = std::nullopt);

// b x + theta reduced into [0, 1) with a compensated product.
double reduced_phase(double b, double x, double theta);

struct Evaluation {
  double value = 0.0;
  double error_bound = 0.0;
};

Evaluation eval(const TruncatedSeries& series, double x);
// Value of the partial sum only.
double partial_sum(const TruncatedSeries& series, double x);

// Sampling rule for oscillation scans. Terms whose full swing 2 a_n sup|g| is
// at most inactive_amplitude do not drive the sample density; their swing is
// added to the bias bound instead.
struct Density {
  long long min_samples = 64;
  long long per_wavelength = 8;
  double inactive_amplitude = 0.0;
};

struct OscillationSample {
  double t = 0.0;
  double r = 0.0;
  double V = 0.0;
  double sup = 0.0;
  double inf = 0.0;
  long long samples_used = 0;
  // Sampled V underestimates the oscillation of f on [t, t + r] by at most this.
  double bias_bound = 0.0;
};

inline constexpr long long kMaxOscillationSamples = 100000000;

// Finest frequency among the terms that drive the sampling density.
double active_frequency(const TruncatedSeries& series, const Density& density);
// Sampling bias of a grid with the given step: L d_active step plus the swing
// of inactive terms. Does not include the truncation tail.
double sampling_bias(const TruncatedSeries& series, const Density& density, double step);

OscillationSample oscillation(const TruncatedSeries& series, double t, double r,
                              const Density& density = {});

struct HolderRow {
  double r = 0.0;
  double sup_V = 0.0;
};

struct HolderEstimate {
  double alpha_hat = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;
  std::vector<HolderRow> rows;
};

// Slope of log sup_t V_[t, t+r] against log r, with the sup over `windows`
// stratified starts in [x0, x1). Every r must lie in [1/b_N, 1/b_1].
HolderEstimate holder_estimate(const TruncatedSeries& series, const std::vector<double>& scales,
                               int windows = 256, const Density& density = {}, double x0 = 0.0,
                               double x1 = 1.0);

// [1/b_N, 1/b_1] of a truncation.
std::pair<double, double> validity_window(const TruncatedSeries& series);

}  // namespace weierdim
