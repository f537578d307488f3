#pragma once

// Small numerical utilities shared by the modules: uniform grids, composite
// trapezoid, adaptive Simpson and least-squares line fits.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "chebmoll/error.hpp"

namespace chebmoll {

/// n evenly spaced points from a to b inclusive; the endpoints are exact.
inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "linspace needs at least two points");
  std::vector<double> xs(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = a + step * static_cast<double>(i);
  xs.back() = b;
  return xs;
}

/// Composite trapezoid over samples ys at abscissae xs (any spacing).
inline double trapezoid(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::mismatched_grid, "trapezoid size mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) acc += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  return acc;
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature to an absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 50) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;  ///< Pearson r of (x, y)
};

/// Ordinary least squares y ~ slope * x + intercept.
inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "line fit needs two or more paired points");
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

/// Slope of log(err) against log(N).
inline LineFit fit_loglog(std::span<const double> orders, std::span<const double> errors) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    lx.push_back(std::log(orders[i]));
    ly.push_back(std::log(errors[i]));
  }
  return fit_line(lx, ly);
}

/// Slope of log(err) against N (exponential decay shows up as a straight line).
inline LineFit fit_loglinear(std::span<const double> orders, std::span<const double> errors) {
  std::vector<double> ly;
  for (double e : errors) ly.push_back(std::log(e));
  return fit_line(orders, ly);
}

}  // namespace chebmoll
