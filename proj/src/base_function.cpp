#include "weierdim/base_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "weierdim/error.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "weierfn";

double unit_phase(double x) {
  double p = x - std::floor(x);
  return p >= 1.0 ? 0.0 : p;
}

}  // namespace

BaseFunction::BaseFunction(BaseKind kind, std::string name, Evaluator on_unit_phase,
                           double lipschitz, double sup_abs, double interval_lo,
                           double interval_hi, double slope_floor)
    : kind_(kind),
      name_(std::move(name)),
      eval_(std::move(on_unit_phase)),
      lipschitz_(lipschitz),
      sup_abs_(sup_abs),
      lo_(interval_lo),
      hi_(interval_hi),
      delta_(slope_floor) {
  if (!(0.0 <= lo_ && lo_ < hi_ && hi_ <= 1.0))
    throw config_error(kModule, "monotone interval must be a non-trivial subinterval of [0, 1]");
  if (!(delta_ > 0.0) || !(lipschitz_ >= delta_))
    throw config_error(kModule, "slope floor must be positive and not exceed the Lipschitz constant");
}

double BaseFunction::operator()(double x) const { return eval_(unit_phase(x)); }

BaseFunction make_sawtooth() {
  // Slope is exactly 1 on [0, 1/2]; the strict inequality needs delta < 1.
  return BaseFunction(
      BaseKind::Sawtooth, "sawtooth", [](double p) { return std::min(p, 1.0 - p); }, 1.0, 0.5,
      0.0, 0.5, 1.0 - 1e-9);
}

BaseFunction make_sine() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return BaseFunction(
      BaseKind::Sine, "sine", [](double p) { return std::sin(two_pi * p); }, two_pi, 1.0, 0.05,
      0.20, two_pi * std::cos(2.0 * std::numbers::pi * 0.2));
}

BaseFunction make_custom_base(const std::vector<std::pair<double, double>>& knots) {
  if (knots.size() < 3) throw config_error(kModule, "custom table needs at least 3 knots");
  if (knots.front().first != 0.0 || knots.back().first != 1.0)
    throw config_error(kModule, "custom table knots must span exactly [0, 1]");
  if (std::abs(knots.front().second - knots.back().second) > 1e-12)
    throw config_error(kModule, "custom table is not periodic: g(0) != g(1)");

  std::vector<double> slopes;
  double lipschitz = 0.0;
  double sup_abs = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double dx = knots[i + 1].first - knots[i].first;
    if (!(dx > 0.0) || !std::isfinite(knots[i].second))
      throw config_error(kModule, "custom table knots must be finite and strictly increasing in x");
    slopes.push_back((knots[i + 1].second - knots[i].second) / dx);
    lipschitz = std::max(lipschitz, std::abs(slopes.back()));
    sup_abs = std::max(sup_abs, std::abs(knots[i].second));
  }
  if (!std::isfinite(lipschitz)) throw config_error(kModule, "custom table is not Lipschitz");

  // Longest run of consecutive increasing segments.
  std::size_t best_begin = 0, best_end = 0;
  for (std::size_t i = 0; i < slopes.size();) {
    if (slopes[i] <= 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < slopes.size() && slopes[j] > 0.0) ++j;
    if (knots[j].first - knots[i].first > knots[best_end].first - knots[best_begin].first) {
      best_begin = i;
      best_end = j;
    }
    i = j;
  }
  if (best_end == best_begin) throw config_error(kModule, "custom table has no increasing piece");
  const double delta =
      *std::min_element(slopes.begin() + best_begin, slopes.begin() + best_end) * (1.0 - 1e-9);

  auto table = knots;
  auto eval = [table](double p) {
    auto it = std::upper_bound(table.begin(), table.end(), p,
                               [](double v, const auto& k) { return v < k.first; });
    if (it == table.end()) return table.back().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.second + (hi.second - lo.second) * (p - lo.first) / (hi.first - lo.first);
  };
  return BaseFunction(BaseKind::Custom, "custom", std::move(eval), lipschitz, sup_abs,
                      knots[best_begin].first, knots[best_end].first, delta);
}

BaseFunction make_skewed_triangle(double apex) {
  if (!(apex > 0.0 && apex < 1.0)) throw config_error(kModule, "triangle apex must lie in (0, 1)");
  const auto table = make_custom_base({{0.0, 0.0}, {apex, 1.0}, {1.0, 0.0}});
  std::ostringstream name;
  name << "skew:" << apex;
  return BaseFunction(
      BaseKind::Custom, name.str(),
      [apex](double p) { return p <= apex ? p / apex : (1.0 - p) / (1.0 - apex); },
      table.lipschitz(), table.sup_abs(), table.interval_lo(), table.interval_hi(),
      table.slope_floor());
}

BaseFunction make_base(BaseKind kind) {
  switch (kind) {
    case BaseKind::Sawtooth:
      return make_sawtooth();
    case BaseKind::Sine:
      return make_sine();
    case BaseKind::Custom:
      break;
  }
  throw config_error(kModule, "custom base functions need a knot table");
}

BaseFunction base_from_tag(const std::string& tag) {
  if (tag == "sawtooth") return make_sawtooth();
  if (tag == "sine") return make_sine();
  if (tag.rfind("skew:", 0) == 0) {
    std::size_t used = 0;
    double apex = 0.0;
    try {
      apex = std::stod(tag.substr(5), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tag.size() - 5)
      throw config_error(kModule, "malformed base function tag '" + tag + "'");
    return make_skewed_triangle(apex);
  }
  throw config_error(kModule, "unknown base function '" + tag + "' (sawtooth, sine, skew:<apex>)");
}

std::string certify_base(const BaseFunction& g, int samples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wide(-50.0, 50.0);
  std::ostringstream err;
  for (int i = 0; i < samples; ++i) {
    const double x = wide(rng);
    if (std::abs(g(x + 1.0) - g(x)) > 1e-12) {
      err << "periodicity fails at x = " << x;
      return err.str();
    }
    const double y = x + (unit(rng) - 0.5) * 0.2;
    if (std::abs(g(x) - g(y)) > g.lipschitz() * std::abs(x - y) * (1.0 + 1e-12) + 1e-15) {
      err << "Lipschitz bound fails at (" << x << ", " << y << ")";
      return err.str();
    }
    const double u = g.interval_lo() + unit(rng) * g.interval_length();
    const double v = g.interval_lo() + unit(rng) * g.interval_length();
    if (u != v && !(std::abs(g(u) - g(v)) > g.slope_floor() * std::abs(u - v))) {
      err << "slope floor fails at (" << u << ", " << v << ")";
      return err.str();
    }
    if (u < v && !(g(u) < g(v))) {
      err << "g is not increasing on the monotone interval at (" << u << ", " << v << ")";
      return err.str();
    }
  }
  return {};
}

}  // namespace weierdim
