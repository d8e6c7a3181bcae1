#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "bolab/error.hpp"

namespace bolab {

struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  bool degenerate = false;
};

/// Least squares y = exponent * x + intercept. A constant y (or x) gives
/// exponent 0 with the degenerate flag set.
inline FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit: x and y lengths differ");
  if (x.size() < 2) throw PreconditionError("fit needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  FitResult f;
  const double scale = std::max(1.0, std::abs(my));
  if (sxx == 0.0 || syy <= 1e-28 * n * scale * scale) {
    f.intercept = my;
    f.degenerate = true;
    return f;
  }
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  f.r2 = sxy * sxy / (sxx * syy);
  return f;
}

/// Fit of log y against log x.
inline FitResult fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw PreconditionError("log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return linear_fit(lx, ly);
}

/// values ~ <t>^exponent: regression of log values on log sqrt(1 + t^2).
inline FitResult fit_power_law(std::span<const double> times,
                               std::span<const double> values) {
  if (times.size() < 8) throw PreconditionError("power-law fit needs >= 8 points");
  std::vector<double> bt(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    bt[i] = std::sqrt(1.0 + times[i] * times[i]);
  return fit_loglog(bt, values);
}

}  // namespace bolab
