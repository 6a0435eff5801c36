#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weierdim/base_function.hpp"
#include "weierdim/sequence.hpp"

namespace weierdim {

struct RatioEntry {
  int n = 0;
  double value = 0.0;
};

// One ratio sequence over a finite window. Limits are not computable from
// finitely many terms, so the report keeps the whole series together with its
// window extremes and the value at the last index.
struct RatioSeries {
  std::vector<RatioEntry> entries;
  double window_inf = 0.0;
  double window_sup = 0.0;
  double final_value = 0.0;
};

struct DimensionReport {
  int n0 = 1;
  int n1 = 1;
  std::vector<double> log_d;       // log d_n for n = n0 .. n1
  RatioSeries hausdorff_ratio;     // log+ d_n / log(b_{n+1} d_n / d_{n+1})
  RatioSeries upperbox_ratio;      // log+ d_n / log b_n
  double hausdorff_dim_estimate = 1.0;  // also the lower box dimension
  double lowerbox_dim_estimate = 1.0;
  double upperbox_dim_estimate = 1.0;
  double gamma_bar = 0.0;
  std::optional<std::pair<double, double>> closed_form;
  // Indices where a ratio has a non-positive denominator; excluded from the series.
  std::vector<int> degenerate_indices;
  bool degenerate = false;
};

// Ratio series of both dimension formulas on [n0, n1]; needs terms up to n1 + 1.
DimensionReport dimension_report(const SequenceSpec& spec, int n0, int n1);

// Hausdorff (= lower box) and upper box dimension of sum b_n^-alpha g(b_n x + theta_n)
// when log b_{n+1} / log b_n has limsup beta. beta may be +infinity.
std::pair<double, double> alpha_beta_dims(double alpha, double beta);

// Exact dimensions when the family admits a closed form.
std::optional<std::pair<double, double>> closed_form_dims(const SequenceSpec& spec);

struct Synthesis {
  SequenceSpec spec;
  BaseKind base;
  std::string family;  // human-readable description of the chosen construction
};

// Explicit family with Hausdorff dimension H and upper box dimension B.
Synthesis synthesize(double H, double B, BaseKind base = BaseKind::Sawtooth);

// beta with b_n = b_1^(beta^(n-1)), a_n = b_n^-alpha giving Hausdorff dimension H.
double besicovitch_ursell_beta(double alpha, double H);

// A count that may exceed the double range; exact holds the integer when it is
// below 2^53.
struct Count {
  double log_value = 0.0;
  std::optional<double> exact;
  double value() const { return exact ? *exact : std::exp(log_value); }
};

struct ScaleDecomposition {
  double r = 0.0;
  int k = 0;          // 1/b_{k+1} <= r < 1/b_k
  Count m;            // m/b_{k+1} <= r < (m+1)/b_{k+1}
  Count m_k;          // largest admissible m at this k
  std::optional<int> l;  // a_{l+1} <= r < a_l when the coefficients bracket r
  double X_k_at_m = 0.0;
  double Y_k_at_m = 0.0;
  double M_k = 0.0;
  Count argmin_m;
};

double X_k(const SequenceSpec& spec, int k, double log_m);
double Y_k(const SequenceSpec& spec, int k, double log_m);
// m_k from the ratio b_{k+1}/b_k, deciding integrality with relative tolerance 1e-9.
Count m_cap(const SequenceSpec& spec, int k);

// M_k = min over admissible m of max(X_k, Y_k), from the crossover at d_{k+1}/d_k.
std::pair<double, Count> mk_closed_form(const SequenceSpec& spec, int k);

// Requires 1/b_{n} <= r < 1/b_1 for some generated index n.
ScaleDecomposition scale_decomposition(const SequenceSpec& spec, double r);
// Same, with r given by its natural log (for scales below the double range).
ScaleDecomposition scale_decomposition_log(const SequenceSpec& spec, double log_r);

struct MkSearch {
  double M_k = 0.0;
  double argmin = 0.0;
  bool exhaustive = false;
};

// Integer minimisation of max(X_k(m), Y_k(m)) over 1 <= m <= m_k: exhaustive when
// m_k <= m_cap, otherwise ternary search on the unimodal profile followed by
// an exhaustive scan around the bracket.
MkSearch mk_bruteforce(const SequenceSpec& spec, int k, double m_cap_limit = 1e6);

}  // namespace weierdim
