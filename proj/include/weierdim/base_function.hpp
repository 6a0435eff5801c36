#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace weierdim {

enum class BaseKind { Sawtooth, Sine, Custom };

// Period-1 Lipschitz function g together with the constants the dimension
// theory needs: its Lipschitz constant, sup|g|, and a closed interval
// [u, v] in [0, 1] on which g increases with slope strictly above delta.
class BaseFunction {
 public:
  using Evaluator = std::function<double(double)>;

  BaseFunction(BaseKind kind, std::string name, Evaluator on_unit_phase, double lipschitz,
               double sup_abs, double interval_lo, double interval_hi, double slope_floor);

  BaseKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double lipschitz() const { return lipschitz_; }
  double sup_abs() const { return sup_abs_; }
  double interval_lo() const { return lo_; }
  double interval_hi() const { return hi_; }
  double interval_length() const { return hi_ - lo_; }
  double slope_floor() const { return delta_; }

  // g(x) for any real x.
  double operator()(double x) const;
  // g on a phase already reduced into [0, 1).
  double at_phase(double phase) const { return eval_(phase); }

 private:
  BaseKind kind_;
  std::string name_;
  Evaluator eval_;
  double lipschitz_;
  double sup_abs_;
  double lo_;
  double hi_;
  double delta_;
};

// Lambda(x) = dist(x, Z); I = [0, 1/2], delta = 1 - 1e-9.
BaseFunction make_sawtooth();
// sin(2 pi x); I = [0.05, 0.20], delta = 2 pi cos(0.4 pi).
BaseFunction make_sine();
// Periodic piecewise-linear g through the knots (x_i, y_i). Knots must start at
// x = 0, end at x = 1, be strictly increasing in x and satisfy y_0 == y_last.
// The monotone interval is the longest run of increasing segments.
BaseFunction make_custom_base(const std::vector<std::pair<double, double>>& knots);
// Triangle wave rising on [0, apex] and falling on [apex, 1], range [0, 1].
BaseFunction make_skewed_triangle(double apex);

BaseFunction make_base(BaseKind kind);
// "sawtooth", "sine" or "skew:<apex>".
BaseFunction base_from_tag(const std::string& tag);

// Sampled certification of periodicity, the Lipschitz bound and the slope
// floor on the monotone interval. Returns an empty string on success.
std::string certify_base(const BaseFunction& g, int samples = 1000);

}  // namespace weierdim
