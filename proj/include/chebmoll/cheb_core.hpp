#pragma once

// Chebyshev-Gauss-Lobatto collocation: grids, quadrature, nodal <-> modal
// transforms, partial-sum evaluation and spectral differentiation.
//
// Conventions used throughout the toolkit:
//   * nodes are x_i = cos(pi i / N), i = 0..N, so they run DESCENDING from
//     x_0 = +1 to x_N = -1;
//   * coefficient index n multiplies T_n;
//   * everything is computed on the reference interval [-1, 1]; a Domain
//     only supplies the affine map to physical coordinates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chebmoll/error.hpp"

namespace chebmoll {

/// Slack allowed outside [-1, 1] before a coordinate is rejected; inputs
/// inside the slack are clamped onto the interval.
inline constexpr double kDomainSlack = 1e-12;

inline double clamp_reference(double x) {
  if (!(std::abs(x) <= 1.0 + kDomainSlack)) {
    throw Error(ErrorCode::out_of_domain,
                "coordinate " + std::to_string(x) + " outside [-1, 1]");
  }
  return std::clamp(x, -1.0, 1.0);
}

struct Domain {
  double lo = -1.0;
  double hi = 1.0;

  Domain() = default;
  Domain(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) {
      throw Error(ErrorCode::invalid_argument, "domain requires lo < hi");
    }
  }

  double width() const { return hi - lo; }

  // Both maps hit the endpoints exactly.
  double to_reference(double x) const {
    if (x == lo) return -1.0;
    if (x == hi) return 1.0;
    return (2.0 * x - lo - hi) / (hi - lo);
  }
  double from_reference(double xi) const {
    if (xi == -1.0) return lo;
    if (xi == 1.0) return hi;
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * xi;
  }

  bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Chebyshev-Gauss-Lobatto nodes and weights of order N (N + 1 points).
class CollocationGrid {
 public:
  explicit CollocationGrid(int order) : order_(order) {
    if (order < 2) {
      throw Error(ErrorCode::invalid_order,
                  "Lobatto grid needs N >= 2, got " + std::to_string(order));
    }
    const auto n = static_cast<std::size_t>(order) + 1;
    nodes_.resize(n);
    weights_.assign(n, std::numbers::pi / order);
    for (int i = 0; i <= order; ++i) {
      nodes_[static_cast<std::size_t>(i)] = node_value(i, order);
    }
    weights_.front() = weights_.back() = std::numbers::pi / (2.0 * order);
  }

  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  friend bool operator==(const CollocationGrid& a, const CollocationGrid& b) {
    return a.order_ == b.order_;
  }

 private:
  // cos(pi i / N) with the symmetric points pinned exactly (x_0 = 1,
  // x_N = -1, x_{N/2} = 0) and x_{N-i} = -x_i.
  static double node_value(int i, int order) {
    if (2 * i == order) return 0.0;
    if (2 * i > order) return -node_value(order - i, order);
    return std::cos(std::numbers::pi * i / order);
  }

  int order_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline CollocationGrid build_lobatto_grid(int order) { return CollocationGrid(order); }

/// T_n(x) by the three-term recurrence.
inline double cheb_eval(int n, double x) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative Chebyshev degree");
  x = clamp_reference(x);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// U_n(x), Chebyshev polynomial of the second kind.
inline double cheb_second_kind_eval(int n, double x) {
  if (n < 0) return 0.0;
  x = clamp_reference(x);
  double prev = 1.0;
  double cur = 2.0 * x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// T'_n(x) = n U_{n-1}(x). The U recurrence has no 1/sqrt(1-x^2) factor, so
/// it stays exact at x = +-1 where T'_n(+-1) = (+-1)^{n+1} n^2.
inline double cheb_deriv_eval(int n, double x) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "T'_n needs n >= 1");
  return n * cheb_second_kind_eval(n - 1, x);
}

/// Node values of a function on a collocation grid.
struct GridFunction {
  CollocationGrid grid;
  std::vector<double> values;
  Domain domain{};

  GridFunction(CollocationGrid g, std::vector<double> v, Domain d = {})
      : grid(std::move(g)), values(std::move(v)), domain(d) {
    if (values.size() != grid.size()) {
      throw Error(ErrorCode::mismatched_grid, "one value per node required");
    }
  }

  /// Physical coordinate of node i.
  double node(std::size_t i) const { return domain.from_reference(grid.node(i)); }
};

/// Samples f at the (physical) nodes of the grid.
template <class F>
GridFunction sample(const CollocationGrid& grid, F&& f, Domain domain = {}) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f(domain.from_reference(grid.node(i)));
  }
  return GridFunction(grid, std::move(values), domain);
}

/// Chebyshev coefficients u_0..u_N of a partial sum S_N[u] on a domain.
class SpectralExpansion {
 public:
  SpectralExpansion(std::vector<double> coeffs, Domain domain = {})
      : coeffs_(std::move(coeffs)), domain_(domain) {
    if (coeffs_.empty()) {
      throw Error(ErrorCode::invalid_argument, "expansion needs at least one coefficient");
    }
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(std::size_t n) const { return coeffs_[n]; }
  const Domain& domain() const { return domain_; }

  /// Clenshaw summation of sum_n u_n T_n at physical coordinate x.
  double operator()(double x) const {
    const double xi = clamp_reference(domain_.to_reference(x));
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t n = coeffs_.size() - 1; n >= 1; --n) {
      const double b0 = coeffs_[n] + 2.0 * xi * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return coeffs_[0] + xi * b1 - b2;
  }

 private:
  std::vector<double> coeffs_;
  Domain domain_;
};

namespace detail {

// T_i(x_j) = cos(pi i j / N) evaluated with the argument reduced mod 2N so
// the entries are as exact as the cosine itself.
inline double lobatto_cheb(int i, int j, int order) {
  const long long m = (static_cast<long long>(i) * j) % (2LL * order);
  const long long k = m <= order ? m : 2LL * order - m;  // cos is even about pi
  if (2 * k == order) return 0.0;
  if (2 * k > order) {
    return -std::cos(std::numbers::pi * static_cast<double>(order - k) / order);
  }
  return std::cos(std::numbers::pi * static_cast<double>(k) / order);
}

// Discrete norm (T_i, T_i) on the Lobatto grid: pi for i = 0 and i = N,
// pi/2 otherwise. The i = N entry is where Lobatto quadrature aliases.
inline double lobatto_norm(int i, int order) {
  return (i == 0 || i == order) ? std::numbers::pi : std::numbers::pi / 2.0;
}

}  // namespace detail

/// u_i = sum_j V_ij u_j with V_ij = T_i(x_j) w_j / (T_i, T_i).
inline SpectralExpansion analyze(const GridFunction& f) {
  const int order = f.grid.order();
  std::vector<double> coeffs(f.values.size(), 0.0);
  for (int i = 0; i <= order; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= order; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      acc += detail::lobatto_cheb(i, j, order) * f.grid.weight(uj) * f.values[uj];
    }
    coeffs[static_cast<std::size_t>(i)] = acc / detail::lobatto_norm(i, order);
  }
  return SpectralExpansion(std::move(coeffs), f.domain);
}

inline std::vector<double> synthesize(const SpectralExpansion& e, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return e(x); });
  return out;
}

/// sum_n f(x_n) w_n, i.e. the integral of f against 1/sqrt(1-x^2) on the
/// reference interval; exact for polynomials of degree <= 2N - 1.
inline double quadrature_integrate(const GridFunction& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * f.grid.weight(i);
  return acc;
}

/// Differentiation in both representations:
///   modal:       coefficients of S_N[u] -> coefficients of S_N[du/dx]
///   nodal:       node values -> derivative at the nodes (= V^-1 M V)
///   analysis:    V, node values -> coefficients
///   vandermonde: V^-1, coefficients -> node values (T_i(x_j) by evaluation)
struct DiffOperators {
  Eigen::MatrixXd modal;
  Eigen::MatrixXd nodal;
  Eigen::MatrixXd analysis;
  Eigen::MatrixXd vandermonde;

  int order() const { return static_cast<int>(modal.rows()) - 1; }
};

/// Exact derivative recurrence: T'_n = 2n sum' T_k over k < n with n - k odd,
/// the k = 0 term halved. Strictly upper triangular.
inline Eigen::MatrixXd modal_diff_matrix(int order) {
  const int n1 = order + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n1, n1);
  for (int n = 1; n <= order; ++n) {
    for (int k = n - 1; k >= 0; k -= 2) {
      m(k, n) = (k == 0 ? 1.0 : 2.0) * n;
    }
  }
  return m;
}

inline DiffOperators build_diff_operators(int order) {
  if (order < 2) {
    throw Error(ErrorCode::invalid_order,
                "differentiation needs N >= 2, got " + std::to_string(order));
  }
  const CollocationGrid grid(order);
  const int n1 = order + 1;
  DiffOperators ops;
  ops.modal = modal_diff_matrix(order);
  ops.vandermonde.resize(n1, n1);
  ops.analysis.resize(n1, n1);
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n1; ++i) {
      const double t = detail::lobatto_cheb(i, j, order);
      ops.vandermonde(j, i) = t;
      ops.analysis(i, j) = t * grid.weight(static_cast<std::size_t>(j)) /
                           detail::lobatto_norm(i, order);
    }
  }
  // N = V^-1 M V, with V obtained from the Vandermonde by a dense solve.
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(ops.vandermonde);
  if (std::abs(lu.determinant()) == 0.0) {
    throw Error(ErrorCode::invalid_argument, "singular Vandermonde matrix");
  }
  const Eigen::MatrixXd inverse_vandermonde = lu.solve(Eigen::MatrixXd::Identity(n1, n1));
  ops.nodal = ops.vandermonde * ops.modal * inverse_vandermonde;
  return ops;
}

/// Coefficients of S_N[du/dx], including the chain-rule factor of the domain map.
inline SpectralExpansion differentiate(const SpectralExpansion& e, const DiffOperators& ops) {
  if (ops.order() != e.order()) {
    throw Error(ErrorCode::mismatched_grid, "operator order differs from expansion order");
  }
  const Eigen::Map<const Eigen::VectorXd> c(e.coeffs().data(), e.order() + 1);
  const Eigen::VectorXd d = ops.modal * c * (2.0 / e.domain().width());
  return SpectralExpansion(std::vector<double>(d.data(), d.data() + d.size()), e.domain());
}

/// Nodal derivative of f; the chain-rule factor of the domain map is applied.
inline std::vector<double> apply_nodal(const DiffOperators& ops, const GridFunction& f) {
  if (static_cast<std::size_t>(ops.order()) + 1 != f.values.size()) {
    throw Error(ErrorCode::mismatched_grid, "operator order differs from grid order");
  }
  const Eigen::Map<const Eigen::VectorXd> u(f.values.data(),
                                            static_cast<Eigen::Index>(f.values.size()));
  const Eigen::VectorXd d = ops.nodal * u * (2.0 / f.domain.width());
  return std::vector<double>(d.data(), d.data() + d.size());
}

}  // namespace chebmoll
