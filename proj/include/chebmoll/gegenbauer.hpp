#pragma once

// Naive Gegenbauer reprojection of the smooth cells of a spectral partial
// sum. Used as the comparison baseline for the mollifier.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chebmoll/cheb_core.hpp"
#include "chebmoll/edge_detect.hpp"
#include "chebmoll/error.hpp"
#include "chebmoll/mollify.hpp"

namespace chebmoll {

/// C_n^lambda(x), C_0 = 1, C_1 = 2 lambda x,
/// n C_n = 2 (n + lambda - 1) x C_{n-1} - (n + 2 lambda - 2) C_{n-2}.
inline double gegenbauer_eval(int n, double lambda, double x) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative Gegenbauer degree");
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "Gegenbauer lambda must be positive");
  if (!(std::abs(x) <= 1.0)) {
    throw Error(ErrorCode::out_of_domain, "Gegenbauer argument " + std::to_string(x) + " outside [-1, 1]");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lambda * x;
  for (int k = 2; k <= n; ++k) {
    const double next = (2.0 * (k + lambda - 1.0) * x * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct GegenbauerConfig {
  double beta = 0.25;
  /// Extra quadrature nodes beyond 2N.
  int quadrature_extra = 32;
};

/// m = lambda = max(1, floor(beta * eps * N)) with eps the half width of the cell.
inline int gegenbauer_order(double cell_width, int order, const GegenbauerConfig& cfg) {
  return std::max(1, static_cast<int>(std::floor(cfg.beta * 0.5 * cell_width * order)));
}

struct CellReprojection {
  double lo = 0.0;
  double hi = 0.0;
  double lambda = 1.0;
  std::vector<double> coeffs;  ///< g_0 .. g_m

  double operator()(double x) const {
    const double xi = std::clamp(2.0 * (x - lo) / (hi - lo) - 1.0, -1.0, 1.0);
    double acc = 0.0;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
      acc += coeffs[l] * gegenbauer_eval(static_cast<int>(l), lambda, xi);
    }
    return acc;
  }
};

/// Projects S_N[u] restricted to [lo, hi] onto C_0^lambda .. C_m^lambda.
/// Inner products with weight (1 - xi^2)^(lambda - 1/2) are computed on a
/// Chebyshev-Gauss-Lobatto grid of order 2N + extra, whose own weight
/// 1/sqrt(1 - xi^2) turns the integrand into a polynomial for integer lambda.
inline CellReprojection reproject_cell(const SpectralExpansion& e, double lo, double hi,
                                       const GegenbauerConfig& cfg = {}) {
  if (!(hi > lo)) throw Error(ErrorCode::degenerate_cell, "cell width must be positive");
  const Domain& dom = e.domain();
  if (lo < dom.lo || hi > dom.hi) throw Error(ErrorCode::out_of_domain, "cell outside the domain");
  const int m = gegenbauer_order(hi - lo, e.order(), cfg);
  CellReprojection cell{lo, hi, static_cast<double>(m), std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0)};

  const CollocationGrid quad(2 * e.order() + cfg.quadrature_extra);
  std::vector<double> g(quad.size());
  std::vector<double> w(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double xi = quad.node(i);
    const double x = xi == -1.0 ? lo : (xi == 1.0 ? hi : lo + 0.5 * (xi + 1.0) * (hi - lo));
    g[i] = e(x);
    w[i] = quad.weight(i) * std::pow(1.0 - xi * xi, cell.lambda);
  }
  for (int l = 0; l <= m; ++l) {
    double num = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double c = gegenbauer_eval(l, cell.lambda, quad.node(i));
      num += w[i] * c * g[i];
      norm += w[i] * c * c;
    }
    cell.coeffs[static_cast<std::size_t>(l)] = num / norm;
  }
  return cell;
}

/// Reprojects every cell between consecutive breakpoints {lo, edges, hi}.
inline std::vector<CellReprojection> reproject_cells(const SpectralExpansion& e, const EdgeSet& edges,
                                                     const GegenbauerConfig& cfg = {}) {
  std::vector<double> breaks{e.domain().lo};
  for (const auto& edge : edges.edges()) breaks.push_back(edge.location);
  breaks.push_back(e.domain().hi);
  std::vector<CellReprojection> cells;
  for (std::size_t j = 1; j < breaks.size(); ++j) cells.push_back(reproject_cell(e, breaks[j - 1], breaks[j], cfg));
  return cells;
}

/// Evaluates the cell expansions on the fine grid. Cells must tile the
/// domain; a point on a shared boundary takes the left cell.
inline GibbsFreeFunction reconstruct(std::span<const CellReprojection> cells, const FineGrid& grid) {
  if (cells.empty()) throw Error(ErrorCode::tiling_gap, "no cells to reconstruct from");
  constexpr double tol = 1e-12;
  if (std::abs(cells.front().lo - grid.domain.lo) > tol || std::abs(cells.back().hi - grid.domain.hi) > tol) {
    throw Error(ErrorCode::tiling_gap, "cells do not cover the domain ends");
  }
  for (std::size_t j = 1; j < cells.size(); ++j) {
    if (std::abs(cells[j].lo - cells[j - 1].hi) > tol) {
      throw Error(ErrorCode::tiling_gap, "cells leave a gap or overlap near x = " + std::to_string(cells[j].lo));
    }
  }
  GibbsFreeFunction out{grid, std::vector<double>(grid.size(), 0.0), {}};
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.xs[i];
    while (j + 1 < cells.size() && x > cells[j].hi) ++j;
    out.values[i] = cells[j](x);
  }
  return out;
}

}  // namespace chebmoll
