#pragma once

#include <vector>

namespace weierdim {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square of the fit residuals
};

// Ordinary least squares y ~ slope * x + intercept. Needs two distinct x values.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace weierdim
