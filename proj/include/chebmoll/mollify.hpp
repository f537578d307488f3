#pragma once

// Adaptive one-sided mollification of a spectral partial sum on a uniform
// fine grid. The kernel width and degree depend on the distance to the
// nearest discontinuity, and the kernel is cut to zero beyond it.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chebmoll/cheb_core.hpp"
#include "chebmoll/edge_detect.hpp"
#include "chebmoll/error.hpp"
#include "chebmoll/numerics.hpp"

namespace chebmoll {

/// Evenly spaced evaluation grid spanning the domain, endpoints included.
struct FineGrid {
  Domain domain{};
  std::vector<double> xs;

  static FineGrid uniform(Domain domain = {}, std::size_t m = 500) {
    if (m < 2) throw Error(ErrorCode::invalid_argument, "fine grid needs M >= 2");
    return FineGrid{domain, linspace(domain.lo, domain.hi, m)};
  }

  std::size_t size() const { return xs.size(); }
  double spacing() const { return domain.width() / static_cast<double>(xs.size() - 1); }
};

/// Values on a fine grid. `substituted` lists points whose value was copied
/// from a neighbour because the kernel degenerated there (x on an edge).
struct GibbsFreeFunction {
  FineGrid grid;
  std::vector<double> values;
  std::vector<std::size_t> substituted;
};

template <class F>
GibbsFreeFunction sample_fine(const FineGrid& grid, F&& f) {
  GibbsFreeFunction out{grid, std::vector<double>(grid.size()), {}};
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(grid.xs[i]);
  return out;
}

/// Edges plus the domain they live in. Cells are the intervals between
/// consecutive breakpoints {lo, c_1, ..., c_J, hi}.
class SmoothnessMap {
 public:
  explicit SmoothnessMap(EdgeSet edges, Domain domain = {}, double d_max = 1.0)
      : edges_(std::move(edges)), domain_(domain), d_max_(d_max) {
    if (!(d_max > 0.0)) throw Error(ErrorCode::invalid_argument, "d_max must be positive");
    for (const auto& e : edges_.edges()) {
      if (!(e.location > domain.lo && e.location < domain.hi)) {
        throw Error(ErrorCode::out_of_domain, "edges must lie strictly inside the domain");
      }
    }
    breaks_.push_back(domain.lo);
    for (const auto& e : edges_.edges()) breaks_.push_back(e.location);
    breaks_.push_back(domain.hi);
  }

  const EdgeSet& edges() const { return edges_; }
  const Domain& domain() const { return domain_; }
  double d_max() const { return d_max_; }

  /// Distance to the nearest edge, capped at d_max. Domain boundaries are
  /// not edges. Returns 0 on an edge.
  double radius(double x) const {
    check(x);
    double d = d_max_;
    for (const auto& e : edges_.edges()) d = std::min(d, std::abs(x - e.location));
    return d;
  }

  /// Enclosing cell; a point on an edge belongs to the cell on its left.
  std::pair<double, double> cell(double x) const {
    check(x);
    for (std::size_t j = 1; j < breaks_.size(); ++j) {
      if (x <= breaks_[j]) return {breaks_[j - 1], breaks_[j]};
    }
    return {breaks_[breaks_.size() - 2], breaks_.back()};
  }

 private:
  void check(double x) const {
    if (!domain_.contains(x)) {
      throw Error(ErrorCode::out_of_domain, "point " + std::to_string(x) + " outside the domain");
    }
  }

  EdgeSet edges_;
  Domain domain_;
  double d_max_;
  std::vector<double> breaks_;
};

inline double smoothness_radius(double x, const SmoothnessMap& sm) { return sm.radius(x); }

enum class Dilation {
  decaying,  ///< delta = sqrt(theta d / N)
  literal,   ///< delta = sqrt(theta d N)
};

enum class BoundaryMode {
  truncate_renormalize,  ///< kernel clipped at edges and domain ends, then renormalised
  mirror,                ///< data reflected across domain ends, kernel clipped at edges only
};

inline const char* to_string(BoundaryMode mode) {
  return mode == BoundaryMode::mirror ? "mirror" : "truncate_renormalize";
}

inline BoundaryMode boundary_mode_from_string(const std::string& name) {
  if (name == "truncate_renormalize" || name == "truncate") return BoundaryMode::truncate_renormalize;
  if (name == "mirror") return BoundaryMode::mirror;
  throw Error(ErrorCode::config, "unknown boundary mode '" + name + "'");
}

struct MollifierOptions {
  double theta = 0.25;
  Dilation dilation = Dilation::decaying;
  BoundaryMode boundary = BoundaryMode::truncate_renormalize;
  /// Composite Simpson nodes per kernel for a(x) and the convolution of a
  /// callable (rounded up to an odd count).
  std::size_t quadrature_points = 4001;
  /// The kernel is treated as zero beyond radius_factor * delta * sqrt(p + 1).
  double radius_factor = 12.0;
};

/// Physicists' Hermite H_n(z), H_{k+1} = 2z H_k - 2k H_{k-1}.
inline double hermite_eval(int n, double z) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative Hermite degree");
  if (n > 400) throw Error(ErrorCode::degree_overflow, "Hermite degree above 400");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * z * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Unnormalised profile exp(-z^2/2) sum_{j<=p} (-1)^j / (4^j j!) H_{2j}(z/sqrt2).
///
/// Evaluated with orthonormal Hermite functions H_n / sqrt(2^n n!) so neither
/// the polynomials nor the factorials overflow for large p.
inline double mollifier_profile(double z, int p) {
  if (p < 0) throw Error(ErrorCode::invalid_argument, "negative mollifier degree");
  const double s = z / std::numbers::sqrt2;
  double h_prev = 0.0;
  double h_cur = 1.0;  // scaled H_0
  double sum = 0.0;
  for (int n = 0; n <= 2 * p; ++n) {
    if (n % 2 == 0) {
      const int j = n / 2;
      const double log_c = 0.5 * std::lgamma(2.0 * j + 1.0) - j * std::numbers::ln2 -
                           std::lgamma(j + 1.0);
      sum += (j % 2 == 0 ? 1.0 : -1.0) * std::exp(log_c) * h_cur;
    }
    const double h_next = std::sqrt(2.0 / (n + 1)) * s * h_cur - std::sqrt(n / (n + 1.0)) * h_prev;
    h_prev = h_cur;
    h_cur = h_next;
  }
  return std::exp(-0.5 * z * z) * sum;
}

struct MollifierKernel {
  double x = 0.0;
  double delta = 0.0;
  int p = 0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double a = 1.0;  ///< integral of the unnormalised kernel over the support
  /// Effective quadrature range: the support intersected with the radius
  /// outside which the profile is below double precision.
  double q_lo = 0.0;
  double q_hi = 0.0;
};

inline double kernel_eval(const MollifierKernel& k, double y) {
  if (y < k.s_lo || y > k.s_hi) return 0.0;
  return mollifier_profile((k.x - y) / k.delta, k.p) / (k.a * k.delta);
}

/// Unnormalised kernel Phi((x - y)/delta)/delta.
inline double kernel_profile(const MollifierKernel& k, double y) {
  if (y < k.s_lo || y > k.s_hi) return 0.0;
  return mollifier_profile((k.x - y) / k.delta, k.p) / k.delta;
}

inline double dilation(double d, int order, const MollifierOptions& opts) {
  return opts.dilation == Dilation::decaying ? std::sqrt(opts.theta * d / order)
                                             : std::sqrt(opts.theta * d * order);
}

inline int mollifier_degree(double d, int order, double theta) {
  return std::max(0, static_cast<int>(std::floor(theta * theta * d * order)));
}

namespace detail {

inline std::size_t simpson_count(std::size_t n) { return std::max<std::size_t>(3, n | 1); }

// Composite Simpson weights for an odd number n of equally spaced nodes.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  w.front() = w.back() = h / 3.0;
  return w;
}

}  // namespace detail

inline MollifierKernel build_kernel(double x, const SmoothnessMap& sm, int order,
                                    const MollifierOptions& opts = {}) {
  if (order < 4) throw Error(ErrorCode::invalid_order, "mollifier needs N >= 4");
  if (!(opts.theta > 0.0 && opts.theta <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "theta must lie in (0, 1]");
  }
  if (opts.quadrature_points < 2) {
    throw Error(ErrorCode::invalid_argument, "kernel quadrature needs two or more points");
  }
  const double d = sm.radius(x);
  if (!(d > 0.0)) {
    throw Error(ErrorCode::degenerate_kernel, "x = " + std::to_string(x) + " sits on an edge");
  }
  MollifierKernel k;
  k.x = x;
  k.delta = dilation(d, order, opts);
  k.p = mollifier_degree(d, order, opts.theta);
  const double reach = opts.radius_factor * k.delta * std::sqrt(k.p + 1.0);
  auto [lo, hi] = sm.cell(x);
  const Domain& dom = sm.domain();
  if (opts.boundary == BoundaryMode::mirror) {
    if (lo == dom.lo) lo = x - reach;
    if (hi == dom.hi) hi = x + reach;
  }
  k.s_lo = lo;
  k.s_hi = hi;
  k.q_lo = std::max(lo, x - reach);
  k.q_hi = std::min(hi, x + reach);
  k.a = 1.0;
  if (k.q_hi > k.q_lo) {
    const auto ys = linspace(k.q_lo, k.q_hi, detail::simpson_count(opts.quadrature_points));
    const auto w = detail::simpson_weights(ys.size(), ys[1] - ys[0]);
    double mass = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) mass += w[i] * kernel_profile(k, ys[i]);
    k.a = mass;
  }
  if (!(k.a > 0.0) || !std::isfinite(k.a)) {
    throw Error(ErrorCode::degenerate_kernel, "kernel mass is not positive");
  }
  return k;
}

namespace detail {

// Value used by the mirror extension outside the domain: the reflection of
// the data within delta_b of the boundary, zero farther out.
template <class F>
double mirrored(F& f, double y, const Domain& dom, double delta_lo, double delta_hi) {
  if (y < dom.lo) {
    if (dom.lo - y > delta_lo) return 0.0;
    const double r = 2.0 * dom.lo - y;
    return r <= dom.hi ? f(r) : 0.0;
  }
  if (y > dom.hi) {
    if (y - dom.hi > delta_hi) return 0.0;
    const double r = 2.0 * dom.hi - y;
    return r >= dom.lo ? f(r) : 0.0;
  }
  return f(y);
}

inline std::pair<double, double> boundary_dilations(const SmoothnessMap& sm, int order,
                                                    const MollifierOptions& opts) {
  const Domain& dom = sm.domain();
  return {dilation(sm.radius(dom.lo), order, opts), dilation(sm.radius(dom.hi), order, opts)};
}

}  // namespace detail

/// Mollified value at x of a callable f (typically the partial sum S_N[u]).
/// The convolution uses the same Simpson nodes as the normalisation, so
/// constants are reproduced to rounding.
template <class F>
  requires std::invocable<F&, double>
double mollify_at(double x, F&& f, const SmoothnessMap& sm, int order,
                  const MollifierOptions& opts = {}) {
  const auto k = build_kernel(x, sm, order, opts);
  if (!(k.q_hi > k.q_lo)) return f(x);
  const auto ys = linspace(k.q_lo, k.q_hi, detail::simpson_count(opts.quadrature_points));
  const auto w = detail::simpson_weights(ys.size(), ys[1] - ys[0]);
  const auto [delta_lo, delta_hi] = detail::boundary_dilations(sm, order, opts);
  double acc = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double kv = kernel_eval(k, ys[i]);
    if (kv == 0.0) continue;
    acc += w[i] * kv * detail::mirrored(f, ys[i], sm.domain(), delta_lo, delta_hi);
  }
  return acc;
}

namespace detail {

// Replaces values at degenerate points by the nearest non-degenerate
// neighbour, preferring the left one.
inline void substitute_degenerate(GibbsFreeFunction& out, const std::vector<char>& bad) {
  const std::size_t m = out.values.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!bad[i]) continue;
    out.substituted.push_back(i);
    for (std::size_t off = 1; off < m; ++off) {
      if (i >= off && !bad[i - off]) {
        out.values[i] = out.values[i - off];
        break;
      }
      if (i + off < m && !bad[i + off]) {
        out.values[i] = out.values[i + off];
        break;
      }
    }
  }
}

}  // namespace detail

/// Mollifies a callable at every fine-grid point.
template <class F>
  requires std::invocable<F&, double>
GibbsFreeFunction mollify_function(F&& f, const FineGrid& grid, const SmoothnessMap& sm, int order,
                                   const MollifierOptions& opts = {}) {
  if (!(grid.domain == sm.domain())) {
    throw Error(ErrorCode::mismatched_grid, "fine grid and smoothness map use different domains");
  }
  GibbsFreeFunction out{grid, std::vector<double>(grid.size(), 0.0), {}};
  std::vector<char> bad(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      out.values[i] = mollify_at(grid.xs[i], f, sm, order, opts);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::degenerate_kernel) throw;
      bad[i] = 1;
    }
  }
  detail::substitute_degenerate(out, bad);
  return out;
}

/// Mollifies samples of S_N[u] given on the fine grid itself: trapezoid over
/// the fine-grid points inside the kernel support, normalised by the discrete
/// kernel mass on the same points.
inline GibbsFreeFunction mollify_function(const GibbsFreeFunction& samples, const SmoothnessMap& sm,
                                          int order, const MollifierOptions& opts = {}) {
  const FineGrid& grid = samples.grid;
  if (!(grid.domain == sm.domain())) {
    throw Error(ErrorCode::mismatched_grid, "fine grid and smoothness map use different domains");
  }
  if (samples.values.size() != grid.size()) {
    throw Error(ErrorCode::mismatched_grid, "one sample per fine-grid point required");
  }
  const double h = grid.spacing();
  const Domain& dom = grid.domain;
  const auto [delta_lo, delta_hi] = detail::boundary_dilations(sm, order, opts);
  // Grid extended by reflected ghost points, used only in mirror mode.
  std::vector<double> ys;
  std::vector<double> fs;
  const std::size_t m = grid.size();
  auto value_at = [&](std::size_t j) { return samples.values[j]; };
  if (opts.boundary == BoundaryMode::mirror) {
    for (std::size_t j = m - 1; j >= 1; --j) {
      const double y = 2.0 * dom.lo - grid.xs[j];
      ys.push_back(y);
      fs.push_back(dom.lo - y <= delta_lo ? value_at(j) : 0.0);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    ys.push_back(grid.xs[j]);
    fs.push_back(value_at(j));
  }
  if (opts.boundary == BoundaryMode::mirror) {
    for (std::size_t j = m - 1; j-- > 0;) {
      const double y = 2.0 * dom.hi - grid.xs[j];
      ys.push_back(y);
      fs.push_back(y - dom.hi <= delta_hi ? value_at(j) : 0.0);
    }
  }

  GibbsFreeFunction out{grid, std::vector<double>(m, 0.0), {}};
  std::vector<char> bad(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    MollifierKernel k;
    try {
      k = build_kernel(grid.xs[i], sm, order, opts);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::degenerate_kernel) throw;
      bad[i] = 1;
      continue;
    }
    const auto first = std::lower_bound(ys.begin(), ys.end(), k.q_lo);
    const auto last = std::upper_bound(ys.begin(), ys.end(), k.q_hi);
    double num = 0.0;
    double mass = 0.0;
    for (auto it = first; it != last; ++it) {
      const auto j = static_cast<std::size_t>(it - ys.begin());
      const double w = (it == first || it + 1 == last) ? 0.5 * h : h;
      const double kv = kernel_profile(k, ys[j]);
      num += w * kv * fs[j];
      mass += w * kv;
    }
    out.values[i] = mass > 0.0 ? num / mass : samples.values[i];
  }
  detail::substitute_degenerate(out, bad);
  return out;
}

}  // namespace chebmoll
