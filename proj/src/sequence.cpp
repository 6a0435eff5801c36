#include "weierdim/sequence.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "weierdim/error.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "seqcore";
constexpr double kLn2 = std::numbers::ln2;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void validate(const SequenceKind& kind) {
  std::visit(
      overloaded{
          [](const GeometricExponent& g) {
            if (!(std::isfinite(g.base) && g.base > 1.0))
              throw config_error(kModule, "geometric_exponent: base must exceed 1");
            if (!(std::isfinite(g.beta) && g.beta > 1.0))
              throw config_error(kModule, "geometric_exponent: beta must exceed 1");
            if (!(std::isfinite(g.alpha) && g.alpha > 0.0))
              throw config_error(kModule, "geometric_exponent: alpha must be positive");
          },
          [](const PowerTower& p) {
            if (!finite_nonneg(p.linear) || !finite_nonneg(p.sqrt_coeff) ||
                p.linear + p.sqrt_coeff == 0.0)
              throw config_error(kModule,
                                 "power_tower: coefficients must be nonnegative, not both zero");
          },
          [](const SuperTower& s) {
            if (!finite_nonneg(s.power) || !finite_nonneg(s.root) || !finite_nonneg(s.shifted) ||
                s.power + s.root + s.shifted == 0.0)
              throw config_error(kModule,
                                 "super_tower: coefficients must be nonnegative, not all zero");
          },
          [](const ExplicitTable& t) {
            if (t.log_a.empty()) throw config_error(kModule, "explicit_table: table is empty");
            if (t.log_a.size() != t.log_b.size())
              throw config_error(kModule, "explicit_table: log_a and log_b differ in length");
            if (!t.theta.empty() && t.theta.size() != t.log_a.size())
              throw config_error(kModule, "explicit_table: theta length differs from log_a");
            for (std::size_t i = 0; i < t.log_a.size(); ++i) {
              if (!std::isfinite(t.log_a[i]) || !std::isfinite(t.log_b[i]) ||
                  (!t.theta.empty() && !std::isfinite(t.theta[i])))
                throw config_error(kModule, "explicit_table: non-finite entry at n = " +
                                                std::to_string(i + 1));
            }
          },
      },
      kind);
}

// n^n and n^(n-1) as logs, so the tower stays finite as long as possible.
double pow_nn(int n) { return std::exp(n * std::log(static_cast<double>(n))); }

}  // namespace

SequenceSpec::SequenceSpec(SequenceKind kind, Phase phase)
    : kind_(std::move(kind)), phase_(std::move(phase)) {
  validate(kind_);
  if (phase_.rule == PhaseRule::Constant && !std::isfinite(phase_.constant))
    throw config_error(kModule, "phase constant must be finite");
  for (double v : phase_.values)
    if (!std::isfinite(v)) throw config_error(kModule, "phase list entries must be finite");
}

std::optional<int> SequenceSpec::length() const {
  if (const auto* t = std::get_if<ExplicitTable>(&kind_)) return static_cast<int>(t->log_a.size());
  return std::nullopt;
}

int SequenceSpec::max_index() const {
  return std::visit(
      overloaded{
          [](const GeometricExponent& g) {
            // beta^n * log(base) must stay below the double range.
            const double limit = std::log(std::numeric_limits<double>::max() / 4.0);
            const double n = (limit - std::log(std::log(g.base) * (1.0 + g.alpha))) / std::log(g.beta);
            return static_cast<int>(std::min(n, 1.0e6));
          },
          [](const PowerTower&) { return 1000000; },
          // 143^143 < 1e308 < 144^144.
          [](const SuperTower&) { return 142; },
          [](const ExplicitTable& t) { return static_cast<int>(t.log_a.size()); },
      },
      kind_);
}

void SequenceSpec::check_index(int n) const {
  if (n < 1 || n > max_index())
    throw config_error(kModule, "index n = " + std::to_string(n) + " outside the sequence range [1, " +
                                    std::to_string(max_index()) + "]");
}

double SequenceSpec::log_b(int n) const {
  check_index(n);
  return std::visit(
      overloaded{
          [n](const GeometricExponent& g) { return std::pow(g.beta, n) * std::log(g.base); },
          [n](const PowerTower&) { return n * std::log(static_cast<double>(n)); },
          [n](const SuperTower&) { return pow_nn(n) * kLn2; },
          [n](const ExplicitTable& t) { return t.log_b[n - 1]; },
      },
      kind_);
}

double SequenceSpec::log_a(int n) const {
  check_index(n);
  return std::visit(
      overloaded{
          [this, n](const GeometricExponent& g) { return -g.alpha * log_b(n); },
          [n](const PowerTower& p) {
            const double x = static_cast<double>(n);
            return -(p.linear * x + p.sqrt_coeff * std::sqrt(x)) * std::log(x);
          },
          [n](const SuperTower& s) {
            const double x = static_cast<double>(n);
            const double nn = pow_nn(n);
            return -(s.power * nn + s.root * nn / std::sqrt(x) + s.shifted * nn / x) * kLn2;
          },
          [n](const ExplicitTable& t) { return t.log_a[n - 1]; },
      },
      kind_);
}

double SequenceSpec::theta(int n) const {
  check_index(n);
  switch (phase_.rule) {
    case PhaseRule::Constant:
      return phase_.constant;
    case PhaseRule::ExplicitList:
      return n <= static_cast<int>(phase_.values.size()) ? phase_.values[n - 1] : 0.0;
    case PhaseRule::Zero:
      break;
  }
  if (const auto* t = std::get_if<ExplicitTable>(&kind_); t && !t->theta.empty())
    return t->theta[n - 1];
  return 0.0;
}

SequenceSpec wingren_family(int terms) {
  ExplicitTable t;
  for (int n = 1; n <= terms; ++n) {
    t.log_a.push_back(-n * kLn2);
    t.log_b.push_back(std::ldexp(1.0, n) * kLn2);
  }
  return SequenceSpec(std::move(t));
}

SequenceSpec lipschitz_family(int terms, double scale) {
  ExplicitTable t;
  for (int n = 1; n <= terms; ++n) {
    t.log_a.push_back(-static_cast<double>(n) * n * kLn2 + std::log(scale));
    t.log_b.push_back(static_cast<double>(n) * (n - 2) * kLn2);
  }
  return SequenceSpec(std::move(t));
}

std::vector<double> log_d_prefix(const SequenceSpec& spec, int n) {
  if (n < 1) throw config_error(kModule, "log_d needs n >= 1");
  if (!spec.has_term(n))
    throw config_error(kModule, "index n = " + std::to_string(n) + " outside the sequence range");
  std::vector<double> out;
  out.reserve(n);
  // Extended-precision running log-sum-exp.
  long double acc = -std::numeric_limits<long double>::infinity();
  for (int i = 1; i <= n; ++i) {
    const long double term = static_cast<long double>(spec.log_a(i)) + spec.log_b(i);
    if (std::isinf(acc)) {
      acc = term;
    } else {
      const long double hi = std::max(acc, term);
      const long double lo = std::min(acc, term);
      acc = hi + std::log1p(std::exp(lo - hi));
    }
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

LogReal log_d(const SequenceSpec& spec, int n) { return LogReal::from_log(log_d_prefix(spec, n).back()); }

SequenceDiagnostics diagnostics(const SequenceSpec& spec, int n0, int n1, double eta) {
  if (!(1 <= n0 && n0 < n1)) throw config_error(kModule, "diagnostics window needs 1 <= n0 < n1");
  if (!(eta > 0.0 && eta < 1.0)) throw config_error(kModule, "eta must lie in (0, 1)");
  if (!spec.has_term(n1))
    throw config_error(kModule, "diagnostics window end n1 = " + std::to_string(n1) +
                                    " outside the sequence range");
  SequenceDiagnostics d;
  d.n0 = n0;
  d.n1 = n1;
  d.eta = eta;
  const double log_eta = std::log(eta);
  std::vector<bool> ok;
  for (int n = n0; n < n1; ++n) {
    const double ca = spec.log_a(n + 1) - spec.log_a(n);
    const double cb = spec.log_b(n + 1) - spec.log_b(n);
    d.coeff_ratios.push_back(ca);
    d.freq_ratios.push_back(cb);
    const double lb = spec.log_b(n);
    d.log_ratio_freq.push_back(lb != 0.0 ? spec.log_b(n + 1) / lb
                                         : std::numeric_limits<double>::infinity());
    ok.push_back(ca < log_eta && -cb < log_eta);
  }
  for (int n = n0; n <= n1; ++n) {
    const double lb = spec.log_b(n);
    d.n_over_logb.push_back(lb != 0.0 ? n / lb : std::numeric_limits<double>::infinity());
  }
  const std::size_t len = d.coeff_ratios.size();
  d.A_floor.assign(len, 0.0);
  d.B_floor.assign(len, 0.0);
  double a_inf = std::numeric_limits<double>::infinity();
  double b_inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = len; i-- > 0;) {
    a_inf = std::min(a_inf, -d.coeff_ratios[i]);
    b_inf = std::min(b_inf, d.freq_ratios[i]);
    d.A_floor[i] = a_inf;
    d.B_floor[i] = b_inf;
  }
  d.eta_ok = true;
  for (bool b : ok) d.eta_ok = d.eta_ok && b;
  for (std::size_t i = len; i-- > 0;) {
    if (!ok[i]) break;
    d.first_eta_index = n0 + static_cast<int>(i);
  }
  return d;
}

double tail_bound(const SequenceSpec& spec, const BaseFunction& g, int N, double eta, int horizon) {
  if (!(eta > 0.0 && eta < 1.0)) throw config_error(kModule, "tail_bound needs eta in (0, 1)");
  if (N < 0) throw config_error(kModule, "tail_bound needs N >= 0");
  const int last = spec.max_index();
  if (N >= last) {
    if (spec.length()) return 0.0;  // exhausted table: empty tail
    throw config_error(kModule, "tail_bound: N beyond the representable range of the family");
  }
  const int end = std::min(last, N + horizon);
  // Non-strict: a geometric tail with ratio exactly eta still sums to a_{N+1}/(1-eta).
  const double log_eta = std::log(eta) + 1e-12;
  for (int i = N + 1; i < end; ++i) {
    if (spec.log_a(i + 1) - spec.log_a(i) > log_eta)
      throw config_error(kModule, "tail_bound: a_{n+1}/a_n <= eta fails at n = " +
                                      std::to_string(i) + " for eta = " + std::to_string(eta));
  }
  return g.sup_abs() * std::exp(spec.log_a(N + 1)) / (1.0 - eta);
}

}  // namespace weierdim
