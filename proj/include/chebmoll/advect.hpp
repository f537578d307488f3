#pragma once

// Method-of-lines solver for u_t = c u_x on a periodic interval with
// Chebyshev collocation in space and classical RK4 in time. Periodicity is
// imposed by slaving the inflow node to the outflow node.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "chebmoll/cheb_core.hpp"
#include "chebmoll/error.hpp"

namespace chebmoll {

struct AdvectionConfig {
  double speed = 1.0;
  int order = 32;
  double cfl = 0.25;
  double t_final = 2.0;
  std::vector<double> snapshot_times;
  Domain domain{};

  void validate() const {
    if (speed == 0.0 || !std::isfinite(speed)) throw Error(ErrorCode::config, "advection speed must be non-zero");
    if (order < 2) throw Error(ErrorCode::invalid_order, "advection needs N >= 2");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::config, "cfl must lie in (0, 1]");
    if (!(t_final >= 0.0)) throw Error(ErrorCode::config, "t_final must be non-negative");
    for (double t : snapshot_times) {
      if (!(t >= 0.0 && t <= t_final)) {
        throw Error(ErrorCode::config, "snapshot time " + std::to_string(t) + " outside [0, t_final]");
      }
    }
  }

  /// cfl * (smallest node spacing) / |c|; the smallest spacing is 1 - cos(pi/N)
  /// on the reference interval.
  double time_step() const {
    const double h = (1.0 - std::cos(std::numbers::pi / order)) * 0.5 * domain.width();
    return cfl * h / std::abs(speed);
  }
};

struct Snapshot {
  double t = 0.0;
  GridFunction state;
  std::vector<double> exact_edge_locations;
};

/// Maps x into [lo, hi) periodically.
inline double wrap_periodic(double x, const Domain& domain) {
  const double w = domain.width();
  double r = std::fmod(x - domain.lo, w);
  if (r < 0.0) r += w;
  if (r >= w) r = 0.0;
  return domain.lo + r;
}

/// Positions of initial edges after time t: the solution is u0(x + c t), so
/// features travel at velocity -c.
inline std::vector<double> advected_edges(std::span<const double> initial, double speed, double t,
                                          const Domain& domain = {}) {
  std::vector<double> out;
  for (double c0 : initial) out.push_back(wrap_periodic(c0 - speed * t, domain));
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// Node 0 is x = +1, node N is x = -1. For c > 0 characteristics move left,
// so x = +1 is the inflow end and copies the outflow tendency.
inline void periodic_closure(std::vector<double>& du, double speed) {
  if (speed > 0.0) {
    du.front() = du.back();
  } else {
    du.back() = du.front();
  }
}

}  // namespace detail

/// c * (nodal derivative of u) with the periodic closure applied.
inline GridFunction advection_rhs(const GridFunction& u, const DiffOperators& ops, double speed) {
  auto du = apply_nodal(ops, u);
  for (double& v : du) v *= speed;
  detail::periodic_closure(du, speed);
  return GridFunction(u.grid, std::move(du), u.domain);
}

/// One classical RK4 step. `t` only labels a blow-up error.
inline GridFunction rk4_step(const GridFunction& u, double dt, const DiffOperators& ops, double speed,
                             double t = 0.0) {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  const std::size_t n = u.values.size();
  auto shifted = [&](const GridFunction& k, double scale) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u.values[i] + scale * k.values[i];
    return GridFunction(u.grid, std::move(v), u.domain);
  };
  const auto k1 = advection_rhs(u, ops, speed);
  const auto k2 = advection_rhs(shifted(k1, 0.5 * dt), ops, speed);
  const auto k3 = advection_rhs(shifted(k2, 0.5 * dt), ops, speed);
  const auto k4 = advection_rhs(shifted(k3, dt), ops, speed);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = u.values[i] + dt / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
    if (!std::isfinite(next[i])) {
      throw Error(ErrorCode::blow_up, "non-finite state at t = " + std::to_string(t + dt) +
                                          ", N = " + std::to_string(u.grid.order()));
    }
  }
  return GridFunction(u.grid, std::move(next), u.domain);
}

/// Integrates from u0 to t_final and returns the states at the requested
/// snapshot times (sorted). Steps are shortened to land on each snapshot.
template <class F>
std::vector<Snapshot> solve_advection(F&& u0, const AdvectionConfig& cfg,
                                      std::span<const double> initial_edges = {}) {
  cfg.validate();
  const CollocationGrid grid(cfg.order);
  const auto ops = build_diff_operators(cfg.order);
  GridFunction u = sample(grid, u0, cfg.domain);
  std::vector<double> times = cfg.snapshot_times;
  std::sort(times.begin(), times.end());

  std::vector<Snapshot> out;
  const double dt = cfg.time_step();
  constexpr double kLand = 1e-12;
  double t = 0.0;
  std::size_t next = 0;
  auto emit = [&] {
    while (next < times.size() && std::abs(times[next] - t) <= kLand) {
      out.push_back(Snapshot{times[next], u, advected_edges(initial_edges, cfg.speed, times[next], cfg.domain)});
      ++next;
    }
  };
  emit();
  while (t < cfg.t_final - kLand) {
    double step = std::min(dt, cfg.t_final - t);
    if (next < times.size() && t + step > times[next] - kLand) step = times[next] - t;
    u = rk4_step(u, step, ops, cfg.speed, t);
    t = (next < times.size() && std::abs(t + step - times[next]) <= kLand) ? times[next] : t + step;
    emit();
  }
  return out;
}

}  // namespace chebmoll
