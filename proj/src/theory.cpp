#include "weierdim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "weierdim/error.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "theory";
constexpr double kExactLimit = 9007199254740992.0;  // 2^53
constexpr double kIntegralTol = 1e-9;

RatioSeries summarize(std::vector<RatioEntry> entries) {
  RatioSeries s;
  s.entries = std::move(entries);
  if (s.entries.empty()) return s;
  s.window_inf = s.window_sup = s.entries.front().value;
  for (const auto& e : s.entries) {
    s.window_inf = std::min(s.window_inf, e.value);
    s.window_sup = std::max(s.window_sup, e.value);
  }
  s.final_value = s.entries.back().value;
  return s;
}

bool near(double x, double y) { return std::abs(x - y) <= 1e-12; }

// Count from a log value, snapping to the integer floor when representable.
Count floor_count(double log_x) {
  Count c;
  if (log_x < std::log(kExactLimit)) {
    const double x = std::exp(log_x);
    double f = std::floor(x);
    if (x - f > 1.0 - kIntegralTol * std::max(1.0, x)) f += 1.0;  // exp() landed just below an integer
    f = std::max(f, 0.0);
    c.exact = f;
    c.log_value = f > 0.0 ? std::log(f) : LogReal::kZeroLog;
  } else {
    c.log_value = log_x;  // log floor(x) = log x + O(1/x)
  }
  return c;
}

Count exact_count(double v) { return Count{std::log(v), v}; }

}  // namespace

DimensionReport dimension_report(const SequenceSpec& spec, int n0, int n1) {
  if (n0 < 1 || n1 - n0 + 1 < 3) throw config_error(kModule, "dimension_report needs a window of length >= 3 starting at n >= 1");
  if (!spec.has_term(n1 + 1))
    throw config_error(kModule, "dimension_report needs terms up to n1 + 1 = " + std::to_string(n1 + 1));
  const auto logd = log_d_prefix(spec, n1 + 1);

  DimensionReport rep;
  rep.n0 = n0;
  rep.n1 = n1;
  std::vector<RatioEntry> h, b;
  for (int n = n0; n <= n1; ++n) {
    const double ld = logd[n - 1];
    const double ld_next = logd[n];
    rep.log_d.push_back(ld);
    const double log_plus = std::max(ld, 0.0);
    const double den_h = spec.log_b(n + 1) + ld - ld_next;
    const double den_b = spec.log_b(n);
    bool bad = false;
    if (den_h > 0.0) {
      h.push_back({n, log_plus / den_h});
    } else {
      bad = true;
      rep.degenerate = true;
    }
    if (den_b > 0.0) {
      b.push_back({n, log_plus / den_b});
    } else {
      bad = true;
      if (n == n1) rep.degenerate = true;
    }
    if (bad) rep.degenerate_indices.push_back(n);
  }
  rep.hausdorff_ratio = summarize(std::move(h));
  rep.upperbox_ratio = summarize(std::move(b));

  // Estimates are the last-index values, clamped into the admissible region
  // 1 <= H <= B <= 2; the raw values stay in the series.
  const double ub = 1.0 + std::clamp(rep.upperbox_ratio.final_value, 0.0, 1.0);
  const double hd = std::min(1.0 + std::clamp(rep.hausdorff_ratio.final_value, 0.0, 1.0), ub);
  rep.upperbox_dim_estimate = ub;
  rep.hausdorff_dim_estimate = hd;
  rep.lowerbox_dim_estimate = hd;
  rep.gamma_bar = ub - 1.0;
  rep.closed_form = closed_form_dims(spec);
  return rep;
}

std::pair<double, double> alpha_beta_dims(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw config_error(kModule, "alpha must lie in (0, 1]");
  if (!(beta >= 1.0)) throw config_error(kModule, "beta must be >= 1 (or infinity)");
  if (std::isinf(beta)) return {1.0, 2.0 - alpha};
  return {1.0 + (1.0 - alpha) / (1.0 - alpha + alpha * beta), 2.0 - alpha};
}

std::optional<std::pair<double, double>> closed_form_dims(const SequenceSpec& spec) {
  const auto& kind = spec.kind();
  if (const auto* g = std::get_if<GeometricExponent>(&kind)) {
    if (g->alpha >= 1.0) return std::pair{1.0, 1.0};
    return alpha_beta_dims(g->alpha, g->beta);
  }
  if (const auto* p = std::get_if<PowerTower>(&kind)) {
    // log b_{n+1}/log b_n -> 1 and log d_n / log b_n -> 1 - linear.
    if (p->linear >= 1.0) return std::pair{1.0, 1.0};
    return std::pair{2.0 - p->linear, 2.0 - p->linear};
  }
  if (const auto* s = std::get_if<SuperTower>(&kind)) {
    if (s->power > 0.0) {
      if (s->power >= 1.0) return std::pair{1.0, 1.0};
      return std::pair{1.0, 2.0 - s->power};
    }
    if (s->root > 0.0) return std::pair{1.0, 2.0};
    return std::pair{1.0 + 1.0 / (1.0 + std::numbers::e * s->shifted), 2.0};
  }
  return std::nullopt;
}

Synthesis synthesize(double H, double B, BaseKind base) {
  if (!(H >= 1.0 && H <= 2.0 && B >= 1.0 && B <= 2.0))
    throw config_error(kModule, "synthesize needs H and B in [1, 2]");
  if (H > B) throw config_error(kModule, "synthesize needs H <= B");
  std::ostringstream desc;
  if (near(H, B) && B < 2.0 && !near(B, 2.0)) {
    desc << "a_n = n^-(" << 2.0 - B << " n), b_n = n^n";
    return {SequenceSpec(PowerTower{2.0 - B, 0.0}), base, desc.str()};
  }
  if (near(H, 2.0) && near(B, 2.0)) {
    return {SequenceSpec(PowerTower{0.0, 1.0}), base, "a_n = n^-sqrt(n), b_n = n^n"};
  }
  if (near(H, 1.0) && near(B, 2.0)) {
    return {SequenceSpec(SuperTower{0.0, 1.0, 0.0}), base, "a_n = 2^-(n^n/sqrt(n)), b_n = 2^(n^n)"};
  }
  if (near(H, 1.0)) {
    desc << "a_n = 2^-(" << 2.0 - B << " n^n), b_n = 2^(n^n)";
    return {SequenceSpec(SuperTower{2.0 - B, 0.0, 0.0}), base, desc.str()};
  }
  if (near(B, 2.0)) {
    const double kappa = (2.0 - H) / (std::numbers::e * (H - 1.0));
    desc << "a_n = 2^-(" << kappa << " n^(n-1)), b_n = 2^(n^n)";
    return {SequenceSpec(SuperTower{0.0, 0.0, kappa}), base, desc.str()};
  }
  const double beta = (2.0 - H) * (B - 1.0) / ((H - 1.0) * (2.0 - B));
  desc << "a_n = 2^-(" << 2.0 - B << " beta^n), b_n = 2^(beta^n), beta = " << beta;
  return {SequenceSpec(GeometricExponent{2.0, beta, 2.0 - B}), base, desc.str()};
}

double besicovitch_ursell_beta(double alpha, double H) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error(kModule, "alpha must lie in (0, 1)");
  if (!(H > 1.0 && H < 2.0 - alpha)) throw config_error(kModule, "H must lie in (1, 2 - alpha)");
  const double beta = (1.0 - alpha) * (2.0 - H) / (alpha * (H - 1.0));
  if (!(beta > 1.0)) throw config_error(kModule, "beta must exceed 1 for b_{n+1}/b_n -> infinity");
  return beta;
}

double X_k(const SequenceSpec& spec, int k, double log_m) {
  return log_d(spec, k).log() / (spec.log_b(k + 1) - log_m);
}

double Y_k(const SequenceSpec& spec, int k, double log_m) {
  return (log_d(spec, k + 1).log() - log_m) / (spec.log_b(k + 1) - log_m);
}

Count m_cap(const SequenceSpec& spec, int k) {
  const double log_ratio = spec.log_b(k + 1) - spec.log_b(k);
  if (log_ratio < std::log(kExactLimit)) {
    const double ratio = std::exp(log_ratio);
    const double nearest = std::round(ratio);
    const double mk = std::abs(ratio - nearest) <= kIntegralTol * ratio ? nearest - 1.0 : std::floor(ratio);
    return exact_count(std::max(mk, 1.0));
  }
  return Count{log_ratio, std::nullopt};
}

namespace {

// X and Y with the logs of d_k, d_{k+1}, b_{k+1} hoisted.
struct Profile {
  double log_dk;
  double log_dk1;
  double log_bk1;
  double x(double log_m) const { return log_dk / (log_bk1 - log_m); }
  double y(double log_m) const { return (log_dk1 - log_m) / (log_bk1 - log_m); }
  double h(double log_m) const { return std::max(x(log_m), y(log_m)); }
};

Profile profile(const SequenceSpec& spec, int k) {
  const auto logd = log_d_prefix(spec, k + 1);
  return Profile{logd[k - 1], logd[k], spec.log_b(k + 1)};
}

}  // namespace

std::pair<double, Count> mk_closed_form(const SequenceSpec& spec, int k) {
  const Profile p = profile(spec, k);
  const Count cap = m_cap(spec, k);
  const Count q = floor_count(p.log_dk1 - p.log_dk);  // [d_{k+1}/d_k] >= 1
  if (q.exact && cap.exact) {
    const double q_eff = std::clamp(*q.exact, 1.0, *cap.exact);
    double best = p.y(std::log(q_eff));
    double arg = q_eff;
    if (*q.exact + 1.0 <= *cap.exact) {
      const double cand = p.x(std::log(*q.exact + 1.0));
      if (cand < best) {
        best = cand;
        arg = *q.exact + 1.0;
      }
    }
    return {best, exact_count(arg)};
  }
  // Log-domain regime: log [x] ~ log(x) and log([x] + 1) ~ log(x).
  // X and Y meet at m = d_{k+1}/d_k, so both candidates collapse onto Y there.
  const double log_q = std::min(q.log_value, cap.log_value);
  return {p.y(log_q), Count{log_q, std::nullopt}};
}

ScaleDecomposition scale_decomposition_log(const SequenceSpec& spec, double log_r) {
  const double target = -log_r;  // log(1/r)
  if (!(target > spec.log_b(1)))
    throw validity_error(kModule, "scale r must satisfy r < 1/b_1");
  int k = 1;
  while (true) {
    if (!spec.has_term(k + 1))
      throw validity_error(kModule, "scale r is below 1/b_n for every generated index");
    if (target <= spec.log_b(k + 1)) break;
    ++k;
  }
  if (!spec.has_term(k + 1))
    throw validity_error(kModule, "scale decomposition needs term k + 1 = " + std::to_string(k + 1));

  ScaleDecomposition sd;
  sd.r = std::exp(log_r);
  sd.k = k;
  sd.m_k = m_cap(spec, k);
  sd.m = floor_count(log_r + spec.log_b(k + 1));
  if (sd.m.exact) {
    double m = std::max(*sd.m.exact, 1.0);
    if (sd.m_k.exact) m = std::min(m, *sd.m_k.exact);
    sd.m = exact_count(m);
  } else {
    sd.m.log_value = std::min(std::max(sd.m.log_value, 0.0), sd.m_k.log_value);
  }

  for (int n = 1; spec.has_term(n + 1); ++n) {
    if (spec.log_a(n + 1) <= log_r && log_r < spec.log_a(n)) {
      sd.l = n;
      break;
    }
  }

  const Profile p = profile(spec, k);
  sd.X_k_at_m = p.x(sd.m.log_value);
  sd.Y_k_at_m = p.y(sd.m.log_value);
  const auto [mk, arg] = mk_closed_form(spec, k);
  sd.M_k = mk;
  sd.argmin_m = arg;
  return sd;
}

ScaleDecomposition scale_decomposition(const SequenceSpec& spec, double r) {
  if (!(r > 0.0)) throw validity_error(kModule, "scale r must be positive");
  return scale_decomposition_log(spec, std::log(r));
}

MkSearch mk_bruteforce(const SequenceSpec& spec, int k, double m_cap_limit) {
  const Profile p = profile(spec, k);
  const Count cap = m_cap(spec, k);
  MkSearch out;
  if (cap.exact && *cap.exact <= m_cap_limit) {
    out.exhaustive = true;
    out.M_k = p.h(0.0);
    out.argmin = 1.0;
    for (double m = 2.0; m <= *cap.exact; m += 1.0) {
      const double v = p.h(std::log(m));
      if (v < out.M_k) {
        out.M_k = v;
        out.argmin = m;
      }
    }
    return out;
  }
  if (cap.exact) {
    // h is strictly decreasing then strictly increasing in m.
    double lo = 1.0, hi = *cap.exact;
    while (hi - lo > 64.0) {
      const double m1 = std::floor(lo + (hi - lo) / 3.0);
      const double m2 = std::floor(hi - (hi - lo) / 3.0);
      if (p.h(std::log(m1)) < p.h(std::log(m2)))
        hi = m2;
      else
        lo = m1;
    }
    out.M_k = p.h(std::log(lo));
    out.argmin = lo;
    for (double m = lo + 1.0; m <= hi; m += 1.0) {
      const double v = p.h(std::log(m));
      if (v < out.M_k) {
        out.M_k = v;
        out.argmin = m;
      }
    }
    return out;
  }
  // Beyond 2^53 the integers are not representable; search log m continuously.
  double lo = 0.0, hi = cap.log_value;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (p.h(m1) < p.h(m2))
      hi = m2;
    else
      lo = m1;
  }
  out.M_k = p.h(0.5 * (lo + hi));
  out.argmin = std::exp(0.5 * (lo + hi));
  return out;
}

}  // namespace weierdim
