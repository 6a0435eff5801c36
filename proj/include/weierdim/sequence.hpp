#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "weierdim/base_function.hpp"
#include "weierdim/log_real.hpp"

namespace weierdim {

// b_n = base^(beta^n), a_n = b_n^(-alpha).
struct GeometricExponent {
  double base = 2.0;
  double beta = 2.0;
  double alpha = 0.5;
  bool operator==(const GeometricExponent&) const = default;
};

// b_n = n^n, a_n = n^-(linear * n + sqrt_coeff * sqrt(n)).
struct PowerTower {
  double linear = 0.5;
  double sqrt_coeff = 0.0;
  bool operator==(const PowerTower&) const = default;
};

// b_n = 2^(n^n),
// a_n = 2^-(power * n^n + root * n^n / sqrt(n) + shifted * n^(n-1)).
struct SuperTower {
  double power = 0.0;
  double root = 0.0;
  double shifted = 0.0;
  bool operator==(const SuperTower&) const = default;
};

// Finite table of natural logs, indexed from n = 1. theta defaults to zero.
struct ExplicitTable {
  std::vector<double> log_a;
  std::vector<double> log_b;
  std::vector<double> theta;
  bool operator==(const ExplicitTable&) const = default;
};

enum class PhaseRule { Zero, Constant, ExplicitList };

struct Phase {
  PhaseRule rule = PhaseRule::Zero;
  double constant = 0.0;
  std::vector<double> values;  // theta_1, theta_2, ... for ExplicitList
  bool operator==(const Phase&) const = default;
};

using SequenceKind = std::variant<GeometricExponent, PowerTower, SuperTower, ExplicitTable>;

// Symbolic generator of the coefficient, frequency and phase sequences.
class SequenceSpec {
 public:
  SequenceSpec(SequenceKind kind, Phase phase = {});

  const SequenceKind& kind() const { return kind_; }
  const Phase& phase() const { return phase_; }

  // Number of terms for tables; nullopt for infinite families.
  std::optional<int> length() const;
  // Largest index whose logs are finite doubles.
  int max_index() const;
  bool has_term(int n) const { return n >= 1 && n <= max_index(); }

  double log_a(int n) const;
  double log_b(int n) const;
  double theta(int n) const;

  bool operator==(const SequenceSpec&) const = default;

 private:
  void check_index(int n) const;

  SequenceKind kind_;
  Phase phase_;
};

// Presets used throughout the tests and the CLI.
// a_n = 2^-n, b_n = 2^(2^n) as a table of `terms` rows.
SequenceSpec wingren_family(int terms = 40);
// a_n = 2^-(n^2) * scale, b_n = 2^(n^2 - 2n): sum a_n b_n converges.
SequenceSpec lipschitz_family(int terms = 12, double scale = 1.0);

// log d_n with d_n = a_1 b_1 + ... + a_n b_n.
LogReal log_d(const SequenceSpec& spec, int n);
// log d_1, ..., log d_n in one pass (entry i holds log d_{i+1}).
std::vector<double> log_d_prefix(const SequenceSpec& spec, int n);

struct SequenceDiagnostics {
  int n0 = 1;
  int n1 = 1;
  double eta = 0.1;
  // Entries for n = n0 .. n1-1: log(a_{n+1}/a_n), log(b_{n+1}/b_n), log b_{n+1}/log b_n.
  std::vector<double> coeff_ratios;
  std::vector<double> freq_ratios;
  std::vector<double> log_ratio_freq;
  // Entries for n = n0 .. n1.
  std::vector<double> n_over_logb;
  // Entries for n = n0 .. n1-1: log of inf_{n <= i < n1} a_i/a_{i+1} (resp. b_{i+1}/b_i).
  std::vector<double> A_floor;
  std::vector<double> B_floor;
  bool eta_ok = false;
  // First n in the window from which both inequalities hold up to n1; nullopt if none.
  std::optional<int> first_eta_index;
};

// Checks a_{n+1}/a_n < eta and b_n/b_{n+1} < eta for n0 <= n < n1.
SequenceDiagnostics diagnostics(const SequenceSpec& spec, int n0, int n1, double eta);

// Upper bound sup|g| * a_{N+1} / (1 - eta) on sup |f - sum_{n <= N} f_n|. The
// coefficient ratio a_{i+1}/a_i <= eta is verified for N < i < N + horizon
// (or to the end of a table); zero once a table is exhausted.
double tail_bound(const SequenceSpec& spec, const BaseFunction& g, int N, double eta,
                  int horizon = 64);

}  // namespace weierdim
