#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dd {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.slope * x[i] - fit.intercept;
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

inline std::vector<double> geometric_grid(double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2)
    throw std::invalid_argument("geometric_grid: need 0 < t_min < t_max and points >= 2");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  const double ratio = std::log(t_max / t_min) / (points - 1);
  for (int i = 0; i < points; ++i) grid.push_back(t_min * std::exp(ratio * i));
  return grid;
}

/// Leading power of f(t) ~ c t^p near t = 0, assuming the next correction is
/// relatively O(t^2). Two log-ratio slopes at scales (t0, r t0) and
/// (r t0, r^2 t0) are Richardson-extrapolated against the t^2 error model.
inline double richardson_order(const std::function<double(double)>& f, double t0,
                               double ratio = 0.7) {
  if (!(t0 > 0.0) || !(ratio > 0.0) || !(ratio < 1.0))
    throw std::invalid_argument("richardson_order: bad scales");
  const double f0 = f(t0);
  const double f1 = f(ratio * t0);
  const double f2 = f(ratio * ratio * t0);
  if (!(f0 > 0.0) || !(f1 > 0.0) || !(f2 > 0.0))
    throw std::invalid_argument("richardson_order: f must be positive at the probe points");
  const double inv_log = 1.0 / std::log(1.0 / ratio);
  const double p_coarse = std::log(f0 / f1) * inv_log;  // error ~ c t0^2
  const double p_fine = std::log(f1 / f2) * inv_log;    // error ~ c (r t0)^2
  const double r2 = ratio * ratio;
  return (p_fine - r2 * p_coarse) / (1.0 - r2);
}

}  // namespace dd
