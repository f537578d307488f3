#pragma once

// Discontinuity detection from Chebyshev coefficients: concentration-factor
// jump approximations, their minmod combination, peak picking and the
// derivative-sign filter for spurious peaks near the domain boundary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chebmoll/cheb_core.hpp"
#include "chebmoll/error.hpp"
#include "chebmoll/numerics.hpp"

namespace chebmoll {

enum class ConcentrationKind { trig, poly, exp };

inline const char* to_string(ConcentrationKind kind) {
  switch (kind) {
    case ConcentrationKind::trig: return "trig";
    case ConcentrationKind::poly: return "poly";
    case ConcentrationKind::exp: return "exp";
  }
  return "unknown";
}

inline ConcentrationKind concentration_kind_from_string(const std::string& name) {
  if (name == "trig") return ConcentrationKind::trig;
  if (name == "poly") return ConcentrationKind::poly;
  if (name == "exp") return ConcentrationKind::exp;
  throw Error(ErrorCode::config, "unknown concentration kind '" + name + "'");
}

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
inline double sine_integral(double x) {
  auto sinc = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  return adaptive_simpson(sinc, 0.0, x, 1e-13);
}

/// Parameters of one concentration factor mu(eta), eta = k/N. All factors
/// are normalised so that int_0^1 mu(eta)/eta d eta = pi.
struct ConcentrationConfig {
  ConcentrationKind kind = ConcentrationKind::trig;
  double beta = std::numbers::pi;  ///< trig
  int p = 1;                       ///< poly
  double alpha = 6.0;              ///< exp
  double eps = 0.0;                ///< exp: lower limit of the gamma integral (1/N)
  double gamma = 0.0;              ///< exp: pi / int_eps^{1-eps} exp(1/(alpha t (t-1))) dt
  double trig_norm = 0.0;          ///< trig: Si(beta)
};

inline double exp_factor_kernel(double alpha, double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(1.0 / (alpha * t * (t - 1.0)));
}

/// Builds a fully resolved config for order N (eps = 1/N, gamma and the
/// trig normalisation computed by adaptive Simpson).
inline ConcentrationConfig make_concentration(ConcentrationKind kind, int order,
                                              double beta = std::numbers::pi, int p = 1,
                                              double alpha = 6.0) {
  if (order < 1) throw Error(ErrorCode::invalid_order, "concentration factor needs N >= 1");
  ConcentrationConfig cfg;
  cfg.kind = kind;
  cfg.beta = beta;
  cfg.p = p;
  cfg.alpha = alpha;
  cfg.eps = 1.0 / order;
  if (kind == ConcentrationKind::exp) {
    const double integral = adaptive_simpson(
        [alpha](double t) { return exp_factor_kernel(alpha, t); }, cfg.eps, 1.0 - cfg.eps, 1e-12);
    cfg.gamma = std::numbers::pi / integral;
  }
  if (kind == ConcentrationKind::trig) cfg.trig_norm = sine_integral(beta);
  return cfg;
}

/// mu_trig = pi sin(beta eta) / Si(beta); mu_poly = p pi eta^p;
/// mu_exp = gamma eta exp(1/(alpha eta (eta - 1))), zero at eta = 1.
inline double concentration_factor(const ConcentrationConfig& cfg, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "concentration factor needs 0 < eta <= 1");
  }
  switch (cfg.kind) {
    case ConcentrationKind::trig: {
      const double norm = cfg.trig_norm > 0.0 ? cfg.trig_norm : sine_integral(cfg.beta);
      return std::numbers::pi * std::sin(cfg.beta * eta) / norm;
    }
    case ConcentrationKind::poly:
      return cfg.p * std::numbers::pi * std::pow(eta, cfg.p);
    case ConcentrationKind::exp:
      return cfg.gamma * eta * exp_factor_kernel(cfg.alpha, eta);
  }
  return 0.0;
}

/// Approximation of the jump function [f](x) = f(x+) - f(x-) on a grid.
struct JumpApproximation {
  std::vector<double> xs;
  std::vector<double> values;
};

/// sqrt(1 - x^2) sum_{k=1}^N mu(k/N) u_k T'_k(x) / k.
///
/// Written as (pi sqrt(1-x^2)/N) sum mu~(k/N) u_k T'_k(x) this is the usual
/// Chebyshev concentration sum with mu~(eta) = mu(eta) / (pi eta); the
/// division keeps a unit jump at height ~1 for the normalised factors above.
/// T'_k / k = U_{k-1}, so the sum runs as a second-kind recurrence.
inline JumpApproximation jump_function(const SpectralExpansion& e, const ConcentrationConfig& cfg,
                                       std::span<const double> xs) {
  const int order = e.order();
  if (order < 4) throw Error(ErrorCode::invalid_order, "jump function needs N >= 4");
  std::vector<double> weights(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 1; k <= order; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    weights[uk] = concentration_factor(cfg, static_cast<double>(k) / order) * e.coeff(uk);
  }
  JumpApproximation out{std::vector<double>(xs.begin(), xs.end()),
                        std::vector<double>(xs.size(), 0.0)};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double xi = clamp_reference(e.domain().to_reference(xs[i]));
    double u_prev = 0.0;  // U_{-1}
    double u_cur = 1.0;   // U_0
    double acc = 0.0;
    for (int k = 1; k <= order; ++k) {
      acc += weights[static_cast<std::size_t>(k)] * u_cur;
      const double u_next = 2.0 * xi * u_cur - u_prev;
      u_prev = u_cur;
      u_cur = u_next;
    }
    out.values[i] = std::sqrt(std::max(0.0, 1.0 - xi * xi)) * acc;
  }
  return out;
}

/// min if all positive, max if all negative, 0 otherwise.
inline double minmod(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const bool all_pos = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
  const bool all_neg = std::all_of(values.begin(), values.end(), [](double v) { return v < 0.0; });
  if (all_pos) return *std::min_element(values.begin(), values.end());
  if (all_neg) return *std::max_element(values.begin(), values.end());
  return 0.0;
}

inline JumpApproximation minmod_combine(std::span<const JumpApproximation> jumps) {
  if (jumps.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "minmod needs at least two jump approximations");
  }
  const auto& xs = jumps.front().xs;
  for (const auto& j : jumps) {
    if (j.xs != xs || j.values.size() != xs.size()) {
      throw Error(ErrorCode::mismatched_grid, "minmod inputs must share one grid");
    }
  }
  JumpApproximation out{xs, std::vector<double>(xs.size(), 0.0)};
  std::vector<double> point(jumps.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < jumps.size(); ++k) point[k] = jumps[k].values[i];
    out.values[i] = minmod(point);
  }
  return out;
}

struct Edge {
  double location = 0.0;
  double jump = 0.0;  ///< signed jump estimate f(c+) - f(c-)
};

/// Discontinuities sorted by location, strictly increasing.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.location < b.location; });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (!(edges_[i].location > edges_[i - 1].location)) {
        throw Error(ErrorCode::invalid_argument, "edge locations must be distinct");
      }
    }
  }
  /// Edges with unknown jump magnitude (recorded as 0).
  static EdgeSet from_locations(std::span<const double> locations) {
    std::vector<Edge> edges;
    for (double c : locations) edges.push_back({c, 0.0});
    return EdgeSet(std::move(edges));
  }

  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const Edge& operator[](std::size_t i) const { return edges_[i]; }
  std::vector<double> locations() const {
    std::vector<double> out;
    for (const auto& e : edges_) out.push_back(e.location);
    return out;
  }

 private:
  std::vector<Edge> edges_;
};

struct LocateOptions {
  double rel_threshold = 0.1;
  double abs_floor = 0.0;  ///< peaks at or below this magnitude are ignored
};

/// Interior local maxima of |mm| above rel_threshold * max|mm| and above the
/// absolute floor. The edge sits on the extremal grid point.
inline EdgeSet locate_edges(const JumpApproximation& mm, const LocateOptions& opts = {}) {
  if (mm.values.empty()) throw Error(ErrorCode::invalid_argument, "empty jump approximation");
  const auto& v = mm.values;
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0 || peak <= opts.abs_floor) return {};
  const double cutoff = std::max(opts.rel_threshold * peak, opts.abs_floor);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > std::abs(v[i - 1]) && a >= std::abs(v[i + 1]) && a > cutoff) {
      edges.push_back({mm.xs[i], v[i]});
    }
  }
  return EdgeSet(std::move(edges));
}

/// Drops candidates whose jump sign disagrees with the nearest extremum of
/// the spectral derivative S_N[du/dx] sampled on xs: a rising edge must sit
/// next to a derivative maximum, a falling one next to a minimum.
inline EdgeSet filter_spurious(const EdgeSet& candidates, const SpectralExpansion& e,
                               const DiffOperators& ops, std::span<const double> xs) {
  if (candidates.empty() || xs.size() < 3) return candidates;
  const auto deriv = synthesize(differentiate(e, ops), xs);
  struct Extremum {
    std::size_t index;
    int sign;
  };
  std::vector<Extremum> extrema;
  // Endpoints count as one-sided extrema; an edge hugging the boundary peaks there.
  const std::size_t last = deriv.size() - 1;
  if (deriv[0] != deriv[1]) extrema.push_back({0, deriv[0] > deriv[1] ? +1 : -1});
  if (deriv[last] != deriv[last - 1]) extrema.push_back({last, deriv[last] > deriv[last - 1] ? +1 : -1});
  for (std::size_t i = 1; i + 1 < deriv.size(); ++i) {
    if (deriv[i] > deriv[i - 1] && deriv[i] >= deriv[i + 1]) extrema.push_back({i, +1});
    if (deriv[i] < deriv[i - 1] && deriv[i] <= deriv[i + 1]) extrema.push_back({i, -1});
  }
  if (extrema.empty()) return candidates;

  std::vector<Edge> kept;
  for (const auto& edge : candidates.edges()) {
    const auto it = std::min_element(xs.begin(), xs.end(), [&](double a, double b) {
      return std::abs(a - edge.location) < std::abs(b - edge.location);
    });
    const auto at = static_cast<std::size_t>(it - xs.begin());
    const auto nearest = std::min_element(
        extrema.begin(), extrema.end(), [at](const Extremum& a, const Extremum& b) {
          const auto da = a.index > at ? a.index - at : at - a.index;
          const auto db = b.index > at ? b.index - at : at - b.index;
          return da < db;
        });
    const int jump_sign = edge.jump > 0.0 ? 1 : (edge.jump < 0.0 ? -1 : 0);
    if (jump_sign == nearest->sign) kept.push_back(edge);
  }
  return EdgeSet(std::move(kept));
}

struct DetectOptions {
  std::vector<ConcentrationKind> kinds{ConcentrationKind::trig, ConcentrationKind::poly,
                                       ConcentrationKind::exp};
  LocateOptions locate{};
  /// Floor relative to max|S_N f| on the sampling grid.
  double rel_amplitude_floor = 1e-6;
  bool filter = true;
};

struct EdgeDetection {
  JumpApproximation minmod;
  EdgeSet candidates;
  EdgeSet edges;  ///< candidates after the optional derivative-sign filter
};

/// Full pipeline on a sampling grid xs (typically 500 uniform points).
inline EdgeDetection detect_edges(const SpectralExpansion& e, std::span<const double> xs,
                                  const DetectOptions& opts = {},
                                  const DiffOperators* ops = nullptr) {
  if (opts.kinds.size() < 2) {
    throw Error(ErrorCode::config, "edge detection combines at least two concentration factors");
  }
  std::vector<JumpApproximation> jumps;
  for (auto kind : opts.kinds) jumps.push_back(jump_function(e, make_concentration(kind, e.order()), xs));
  EdgeDetection out;
  out.minmod = minmod_combine(jumps);
  double amplitude = 0.0;
  for (double x : xs) amplitude = std::max(amplitude, std::abs(e(x)));
  LocateOptions locate = opts.locate;
  locate.abs_floor = std::max(locate.abs_floor, opts.rel_amplitude_floor * amplitude);
  out.candidates = locate_edges(out.minmod, locate);
  if (opts.filter) {
    std::optional<DiffOperators> own;
    if (ops == nullptr) {
      own = build_diff_operators(e.order());
      ops = &*own;
    }
    out.edges = filter_spurious(out.candidates, e, *ops, xs);
  } else {
    out.edges = out.candidates;
  }
  return out;
}

}  // namespace chebmoll
