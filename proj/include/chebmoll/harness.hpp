#pragma once

// Experiment runner: convergence, edge-detection and advection studies,
// each producing rows of (study, N, metric, location, value, seconds) plus
// a JSON manifest of the resolved configuration.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "chebmoll/advect.hpp"
#include "chebmoll/cheb_core.hpp"
#include "chebmoll/edge_detect.hpp"
#include "chebmoll/error.hpp"
#include "chebmoll/gegenbauer.hpp"
#include "chebmoll/mollify.hpp"
#include "chebmoll/numerics.hpp"

namespace chebmoll {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class TestKind { gaussian, tophat, piecewise_flat };

/// Analytic test data. piecewise_flat takes the value first_level on the
/// leftmost cell and alternates between first_level and 1 - first_level.
struct TestFunction {
  TestKind kind = TestKind::gaussian;
  double sigma = 1.0 / 6.0;
  std::vector<double> edges;
  double first_level = 0.0;

  static TestFunction gaussian(double sigma = 1.0 / 6.0) { return {TestKind::gaussian, sigma, {}, 0.0}; }
  static TestFunction tophat(double a = -0.5, double b = 0.5) {
    TestFunction f{TestKind::tophat, 0.0, {a, b}, 0.0};
    f.validate();
    return f;
  }
  static TestFunction piecewise_flat(std::vector<double> edges = {-0.6, 0.4}, double first_level = 0.0) {
    TestFunction f{TestKind::piecewise_flat, 0.0, std::move(edges), first_level};
    f.validate();
    return f;
  }

  void validate() const {
    if (kind == TestKind::gaussian) {
      if (!(sigma > 0.0)) throw Error(ErrorCode::config, "gaussian sigma must be positive");
      return;
    }
    if (kind == TestKind::tophat && edges.size() != 2) {
      throw Error(ErrorCode::config, "top hat takes exactly two edges");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!(edges[i] > -1.0 && edges[i] < 1.0)) throw Error(ErrorCode::config, "edges must lie inside (-1, 1)");
      if (i > 0 && !(edges[i] > edges[i - 1])) throw Error(ErrorCode::config, "edges must be sorted and distinct");
    }
  }

  double operator()(double x) const {
    switch (kind) {
      case TestKind::gaussian:
        return std::exp(-x * x / (2.0 * sigma * sigma));
      case TestKind::tophat:
        return (x >= edges[0] && x <= edges[1]) ? 1.0 : 0.0;
      case TestKind::piecewise_flat: {
        std::size_t cell = 0;
        while (cell < edges.size() && x > edges[cell]) ++cell;
        return cell % 2 == 0 ? first_level : 1.0 - first_level;
      }
    }
    return 0.0;
  }

  /// Derivative of the Gaussian; zero away from the edges otherwise.
  double derivative(double x) const {
    if (kind == TestKind::gaussian) return -x / (sigma * sigma) * (*this)(x);
    return 0.0;
  }
};

struct RunConfig {
  std::string study = "all";  ///< converge | edges | advect | all
  std::vector<int> orders;    ///< overrides each study's default N list when non-empty
  double theta = 0.25;
  std::vector<std::string> concentration{"trig", "poly", "exp"};
  std::size_t fine_points = 500;
  std::string boundary_mode = "truncate_renormalize";
  std::vector<double> probes{0.002, -1.0};
  std::string edge_source = "exact";  ///< mollifier studies: exact | detected
  std::string output_dir = "results";
  std::uint64_t seed = 20240607;
  bool timing = false;
  double speed = 1.0;
  double cfl = 0.25;
  std::vector<int> advect_orders{32};
  std::vector<double> snapshot_times{0.0, 0.25, 0.46, 0.5, 0.54, 0.75, 1.0, 1.46, 1.5, 1.54, 1.75, 2.0};
  double window = 0.1;  ///< interior-error exclusion half-width around true edges

  void validate() const {
    static const std::vector<std::string> studies{"converge", "edges", "advect", "all"};
    if (std::find(studies.begin(), studies.end(), study) == studies.end()) {
      throw Error(ErrorCode::config, "unknown study '" + study + "'");
    }
    for (int n : orders) {
      if (n < 4 || n > 1024) throw Error(ErrorCode::config, "orders must lie in [4, 1024]");
    }
    for (int n : advect_orders) {
      if (n < 4 || n > 256) throw Error(ErrorCode::config, "advection orders must lie in [4, 256]");
    }
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::config, "theta must lie in (0, 1]");
    if (concentration.size() < 2) throw Error(ErrorCode::config, "at least two concentration kinds required");
    for (const auto& k : concentration) concentration_kind_from_string(k);
    if (fine_points < 3) throw Error(ErrorCode::config, "fine grid needs at least 3 points");
    boundary_mode_from_string(boundary_mode);
    if (edge_source != "exact" && edge_source != "detected") {
      throw Error(ErrorCode::config, "edge_source must be 'exact' or 'detected'");
    }
    for (double p : probes) {
      if (!(p >= -1.0 && p <= 1.0)) throw Error(ErrorCode::config, "probes must lie in [-1, 1]");
    }
    if (speed == 0.0) throw Error(ErrorCode::config, "advection speed must be non-zero");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::config, "cfl must lie in (0, 1]");
    if (!(window >= 0.0)) throw Error(ErrorCode::config, "window must be non-negative");
  }

  std::vector<ConcentrationKind> kinds() const {
    std::vector<ConcentrationKind> out;
    for (const auto& k : concentration) out.push_back(concentration_kind_from_string(k));
    return out;
  }

  MollifierOptions mollifier() const {
    MollifierOptions m;
    m.theta = theta;
    m.boundary = boundary_mode_from_string(boundary_mode);
    return m;
  }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"study", c.study},
                     {"orders", c.orders},
                     {"theta", c.theta},
                     {"concentration", c.concentration},
                     {"fine_points", c.fine_points},
                     {"boundary_mode", c.boundary_mode},
                     {"probes", c.probes},
                     {"edge_source", c.edge_source},
                     {"output_dir", c.output_dir},
                     {"seed", c.seed},
                     {"timing", c.timing},
                     {"speed", c.speed},
                     {"cfl", c.cfl},
                     {"advect_orders", c.advect_orders},
                     {"snapshot_times", c.snapshot_times},
                     {"window", c.window}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::config, "config must be a JSON object");
  const nlohmann::json reference = RunConfig{};
  for (const auto& [key, value] : j.items()) {
    if (!reference.contains(key)) throw Error(ErrorCode::config, "unknown config key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("study", c.study);
    get("orders", c.orders);
    get("theta", c.theta);
    get("concentration", c.concentration);
    get("fine_points", c.fine_points);
    get("boundary_mode", c.boundary_mode);
    get("probes", c.probes);
    get("edge_source", c.edge_source);
    get("output_dir", c.output_dir);
    get("seed", c.seed);
    get("timing", c.timing);
    get("speed", c.speed);
    get("cfl", c.cfl);
    get("advect_orders", c.advect_orders);
    get("snapshot_times", c.snapshot_times);
    get("window", c.window);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("bad config value: ") + e.what());
  }
}

struct ResultRow {
  std::string study;
  int order = 0;
  std::string metric;
  std::string location;
  double value = 0.0;
  double seconds = 0.0;
};

struct StudyResult {
  std::string study;
  std::vector<ResultRow> rows;
  nlohmann::json manifest = nlohmann::json::object();
  bool failed = false;

  /// Values of one metric (and location, when given) in row order.
  std::vector<double> values(const std::string& metric, const std::optional<std::string>& location = {}) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.metric == metric && (!location || r.location == *location)) out.push_back(r.value);
    }
    return out;
  }
  std::vector<double> orders(const std::string& metric, const std::optional<std::string>& location = {}) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.metric == metric && (!location || r.location == *location)) out.push_back(r.order);
    }
    return out;
  }
};

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Fit of log(value) against log N (or N); null when fewer than two orders survived.
inline nlohmann::json fit_json(bool loglinear, std::span<const double> orders, std::span<const double> values) {
  if (orders.size() < 2) return nullptr;
  const LineFit f = loglinear ? fit_loglinear(orders, values) : fit_loglog(orders, values);
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"correlation", f.correlation},
          {"n_min", orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end())},
          {"n_max", orders.empty() ? 0.0 : *std::max_element(orders.begin(), orders.end())}};
}

inline std::vector<int> orders_or(const RunConfig& cfg, int lo, int hi, int step) {
  if (!cfg.orders.empty()) return cfg.orders;
  std::vector<int> out;
  for (int n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

inline StudyResult make_result(const std::string& study, const RunConfig& cfg) {
  StudyResult r;
  r.study = study;
  r.manifest = {{"study", study}, {"toolkit_version", kToolkitVersion}, {"config", cfg}};
  return r;
}

inline void add_row(StudyResult& r, int order, const std::string& metric, const std::string& location,
                    double value, double seconds) {
  r.rows.push_back({r.study, order, metric, location, value, seconds});
}

inline void record_failure(StudyResult& r, int order, const Error& e) {
  r.failed = true;
  add_row(r, order, "failed", to_string(e.code()), 1.0, 0.0);
  r.manifest["failures"].push_back({{"N", order}, {"error", e.what()}});
}

}  // namespace detail

/// Uniform 2000-point grid used by every L2 and max-norm oracle.
inline const std::vector<double>& oracle_grid() {
  static const std::vector<double> xs = linspace(-1.0, 1.0, 2000);
  return xs;
}

/// sqrt(int (approx - exact)^2) by composite trapezoid on the oracle grid.
template <class A, class B>
double l2_error(A&& approx, B&& exact) {
  const auto& xs = oracle_grid();
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = approx(xs[i]) - exact(xs[i]);
    sq[i] = d * d;
  }
  return std::sqrt(trapezoid(xs, sq));
}

/// Throws if any probe coincides with a collocation node of some N.
inline void assert_probes_off_nodes(std::span<const double> probes, std::span<const int> orders,
                                    std::span<const double> allowed_nodes = {}) {
  for (double p : probes) {
    if (std::find(allowed_nodes.begin(), allowed_nodes.end(), p) != allowed_nodes.end()) continue;
    for (int n : orders) {
      const CollocationGrid g(n);
      for (double x : g.nodes()) {
        if (std::abs(x - p) < 1e-12) {
          throw Error(ErrorCode::config, "probe " + format_number(p) + " is a node for N = " + std::to_string(n));
        }
      }
    }
  }
}

/// Studies f3a (Gaussian), f3b (unmollified top hat), f14 (mollified top hat,
/// two edges) and f15 (mollified single-edge step).
inline std::vector<StudyResult> run_convergence_study(const RunConfig& cfg) {
  cfg.validate();
  std::vector<StudyResult> out;
  const auto& ox = oracle_grid();

  {  // f3a: smooth convergence and derivative accuracy
    auto res = detail::make_result("f3a", cfg);
    const auto gauss = TestFunction::gaussian();
    for (int n : detail::orders_or(cfg, 8, 64, 4)) {
      const detail::Stopwatch sw(cfg.timing);
      try {
        const CollocationGrid g(n);
        const auto f = sample(g, gauss);
        const auto e = analyze(f);
        const double l2 = l2_error(e, gauss);
        detail::add_row(res, n, "l2", "", l2, sw.seconds());
        const auto ops = build_diff_operators(n);
        const auto de = analyze(GridFunction(g, apply_nodal(ops, f)));
        detail::add_row(res, n, "deriv_l2", "", l2_error(de, [&](double x) { return gauss.derivative(x); }),
                        sw.seconds());
      } catch (const Error& err) {
        detail::record_failure(res, n, err);
      }
    }
    const auto ns = res.orders("l2");
    res.manifest["fits"]["l2_loglinear"] = detail::fit_json(true, ns, res.values("l2"));
    out.push_back(std::move(res));
  }

  {  // f3b: Gibbs non-convergence of the raw partial sum
    auto res = detail::make_result("f3b", cfg);
    const auto hat = TestFunction::tophat();
    for (int n : detail::orders_or(cfg, 8, 128, 4)) {
      const detail::Stopwatch sw(cfg.timing);
      try {
        const auto e = analyze(sample(CollocationGrid(n), hat));
        detail::add_row(res, n, "l2", "", l2_error(e, hat), sw.seconds());
        double edge_max = 0.0;
        for (double x : ox) {
          bool near = false;
          for (double c : hat.edges) near = near || std::abs(x - c) <= 0.05;
          if (near) edge_max = std::max(edge_max, std::abs(e(x) - hat(x)));
        }
        detail::add_row(res, n, "edge_max", "", edge_max, sw.seconds());
      } catch (const Error& err) {
        detail::record_failure(res, n, err);
      }
    }
    const auto ns = res.orders("l2");
    res.manifest["fits"]["l2_loglog"] = detail::fit_json(false, ns, res.values("l2"));
    out.push_back(std::move(res));
  }

  // f14 / f15: mollified pointwise errors at the probes.
  const auto kinds = cfg.kinds();
  const auto mopts = cfg.mollifier();
  auto mollified_study = [&](const std::string& id, const TestFunction& fn, bool loglinear) {
    auto res = detail::make_result(id, cfg);
    const auto orders = detail::orders_or(cfg, 16, 128, 8);
    const std::vector<double> boundary{-1.0, 1.0};
    assert_probes_off_nodes(cfg.probes, orders, boundary);
    const auto fine = FineGrid::uniform(Domain{}, cfg.fine_points);
    for (int n : orders) {
      const detail::Stopwatch sw(cfg.timing);
      try {
        const auto e = analyze(sample(CollocationGrid(n), fn));
        EdgeSet edges = EdgeSet::from_locations(fn.edges);
        if (cfg.edge_source == "detected") {
          DetectOptions d;
          d.kinds = kinds;
          edges = detect_edges(e, fine.xs, d).edges;
        }
        const SmoothnessMap sm(edges);
        for (double p : cfg.probes) {
          const std::string loc = format_number(p);
          double v = 0.0;
          try {
            v = mollify_at(p, e, sm, n, mopts);
          } catch (const Error& err) {
            if (err.code() != ErrorCode::degenerate_kernel) throw;
            v = e(p);
          }
          detail::add_row(res, n, "pointwise", loc, std::abs(v - fn(p)), sw.seconds());
          detail::add_row(res, n, "pointwise_raw", loc, std::abs(e(p) - fn(p)), sw.seconds());
        }
      } catch (const Error& err) {
        detail::record_failure(res, n, err);
      }
    }
    for (double p : cfg.probes) {
      const std::string loc = format_number(p);
      const auto ns = res.orders("pointwise", loc);
      const auto vs = res.values("pointwise", loc);
      res.manifest["fits"]["pointwise_loglog@" + loc] = detail::fit_json(false, ns, vs);
      if (loglinear) res.manifest["fits"]["pointwise_loglinear@" + loc] = detail::fit_json(true, ns, vs);
    }
    out.push_back(std::move(res));
  };
  mollified_study("f14", TestFunction::tophat(), false);
  mollified_study("f15", TestFunction::piecewise_flat({0.5}, 1.0), true);
  return out;
}

/// Outcome of matching detected edges against the true ones.
struct EdgeScore {
  double max_location_error = 0.0;  ///< max over true edges of distance to nearest detection
  std::size_t spurious = 0;         ///< detections not matched one-to-one to a true edge
  std::size_t missed = 0;           ///< true edges with no unclaimed detection within `tolerance`
};

inline EdgeScore score_edges(const EdgeSet& detected, std::span<const double> truth, double tolerance = 0.1) {
  EdgeScore s;
  const auto locs = detected.locations();
  // One-to-one matching: each true edge claims its nearest unclaimed detection.
  std::vector<bool> used(locs.size(), false);
  std::size_t matched = 0;
  for (double c : truth) {
    double best = 2.0;
    for (double d : locs) best = std::min(best, std::abs(d - c));
    s.max_location_error = std::max(s.max_location_error, best);
    std::size_t pick = locs.size();
    for (std::size_t j = 0; j < locs.size(); ++j) {
      if (!used[j] && std::abs(locs[j] - c) <= tolerance &&
          (pick == locs.size() || std::abs(locs[j] - c) < std::abs(locs[pick] - c))) {
        pick = j;
      }
    }
    if (pick == locs.size()) {
      ++s.missed;
    } else {
      used[pick] = true;
      ++matched;
    }
  }
  s.spurious = locs.size() - matched;
  return s;
}

/// Studies f9 (interior edge pair) and f11 (pair near the right boundary).
inline std::vector<StudyResult> run_edge_study(const RunConfig& cfg) {
  cfg.validate();
  std::vector<StudyResult> out;
  const auto fine = FineGrid::uniform(Domain{}, cfg.fine_points);
  auto study = [&](const std::string& id, double a, double b, std::vector<int> orders) {
    auto res = detail::make_result(id, cfg);
    const auto hat = TestFunction::tophat(a, b);
    if (!cfg.orders.empty()) orders = cfg.orders;
    DetectOptions opts;
    opts.kinds = cfg.kinds();
    for (int n : orders) {
      const detail::Stopwatch sw(cfg.timing);
      try {
        const auto e = analyze(sample(CollocationGrid(n), hat));
        const auto det = detect_edges(e, fine.xs, opts);
        for (const auto& [prefix, set] : {std::pair<std::string, const EdgeSet*>{"", &det.edges},
                                          std::pair<std::string, const EdgeSet*>{"unfiltered_", &det.candidates}}) {
          const auto score = score_edges(*set, hat.edges);
          for (double c : hat.edges) {
            const auto one = score_edges(*set, std::vector<double>{c});
            detail::add_row(res, n, prefix + "location_error", format_number(c), one.max_location_error, sw.seconds());
          }
          detail::add_row(res, n, prefix + "detected", "", static_cast<double>(set->size()), sw.seconds());
          detail::add_row(res, n, prefix + "spurious", "", static_cast<double>(score.spurious), sw.seconds());
          detail::add_row(res, n, prefix + "missed", "", static_cast<double>(score.missed), sw.seconds());
        }
      } catch (const Error& err) {
        detail::record_failure(res, n, err);
      }
    }
    out.push_back(std::move(res));
  };
  std::vector<int> interior;
  for (int n = 8; n <= 128; n += 4) interior.push_back(n);
  std::vector<int> near{16, 20, 24, 32};
  for (int n = 40; n <= 128; n += 4) near.push_back(n);
  study("f9", -0.25, 0.30, interior);
  study("f11", 0.496, 0.996, near);
  return out;
}

/// Translated top hat u0(x + c t), periodic on [-1, 1].
inline double advected_tophat(double x, double t, double speed, const TestFunction& hat) {
  return hat(wrap_periodic(x + speed * t, Domain{}));
}

/// Max |approx - exact| over fine-grid points at least `window` away from
/// every true edge (distances measured periodically); 0 if none remain.
inline double interior_error(std::span<const double> xs, std::span<const double> approx,
                             std::span<const double> exact, std::span<const double> edges, double window) {
  double err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool excluded = false;
    for (double c : edges) {
      for (double shift : {-2.0, 0.0, 2.0}) excluded = excluded || std::abs(xs[i] - (c + shift)) <= window;
    }
    if (!excluded) err = std::max(err, std::abs(approx[i] - exact[i]));
  }
  return err;
}

/// Studies f13 (mollifier) and f16 (Gegenbauer) on advected top-hat data.
/// Rows are keyed by snapshot time in the location column.
inline std::vector<StudyResult> run_advect_pipeline(const RunConfig& cfg) {
  cfg.validate();
  auto moll = detail::make_result("f13", cfg);
  auto geg = detail::make_result("f16", cfg);
  const auto hat = TestFunction::tophat();
  const auto fine = FineGrid::uniform(Domain{}, cfg.fine_points);
  DetectOptions dopts;
  dopts.kinds = cfg.kinds();
  const auto mopts = cfg.mollifier();
  for (int n : cfg.advect_orders) {
    const detail::Stopwatch sw(cfg.timing);
    try {
      AdvectionConfig ac;
      ac.speed = cfg.speed;
      ac.order = n;
      ac.cfl = cfg.cfl;
      ac.t_final = cfg.snapshot_times.empty()
                       ? 0.0
                       : *std::max_element(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
      ac.snapshot_times = cfg.snapshot_times;
      const auto snaps = solve_advection(hat, ac, hat.edges);
      const auto ops = build_diff_operators(n);
      for (const auto& s : snaps) {
        const auto e = analyze(s.state);
        const auto det = detect_edges(e, fine.xs, dopts, &ops);
        const auto mv = mollify_function(e, fine, SmoothnessMap(det.edges), n, mopts);
        const auto cells = reproject_cells(e, det.edges);
        const auto gv = reconstruct(cells, fine);
        std::vector<double> exact(fine.size());
        for (std::size_t i = 0; i < fine.size(); ++i) exact[i] = advected_tophat(fine.xs[i], s.t, cfg.speed, hat);
        const std::string loc = format_number(s.t);
        double boundary_gap = 2.0;
        for (double c : s.exact_edge_locations) boundary_gap = std::min({boundary_gap, c + 1.0, 1.0 - c});
        for (auto* res : {&moll, &geg}) {
          const auto& v = res == &moll ? mv.values : gv.values;
          double full = 0.0;
          for (std::size_t i = 0; i < fine.size(); ++i) full = std::max(full, std::abs(v[i] - exact[i]));
          detail::add_row(*res, n, "interior_max", loc,
                          interior_error(fine.xs, v, exact, s.exact_edge_locations, cfg.window), sw.seconds());
          detail::add_row(*res, n, "max", loc, full, sw.seconds());
          detail::add_row(*res, n, "boundary_gap", loc, boundary_gap, sw.seconds());
          detail::add_row(*res, n, "detected", loc, static_cast<double>(det.edges.size()), sw.seconds());
        }
      }
    } catch (const Error& err) {
      detail::record_failure(moll, n, err);
      detail::record_failure(geg, n, err);
    }
  }
  return {std::move(moll), std::move(geg)};
}

/// Runs the studies selected by cfg.study.
inline std::vector<StudyResult> run_studies(const RunConfig& cfg) {
  cfg.validate();
  std::vector<StudyResult> out;
  auto append = [&](std::vector<StudyResult> r) {
    for (auto& s : r) out.push_back(std::move(s));
  };
  if (cfg.study == "converge" || cfg.study == "all") append(run_convergence_study(cfg));
  if (cfg.study == "edges" || cfg.study == "all") append(run_edge_study(cfg));
  if (cfg.study == "advect" || cfg.study == "all") append(run_advect_pipeline(cfg));
  return out;
}

inline std::string to_csv(const StudyResult& res) {
  std::string out = "study,N,metric,location,value,seconds\n";
  for (const auto& r : res.rows) {
    out += detail::csv_field(r.study) + ',' + std::to_string(r.order) + ',' + detail::csv_field(r.metric) + ',' +
           detail::csv_field(r.location) + ',' + format_number(r.value) + ',' + format_number(r.seconds) + '\n';
  }
  return out;
}

/// Writes <dir>/<study>.csv and <dir>/<study>.manifest.json.
inline void emit_csv(const StudyResult& res, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create " + dir.string() + ": " + ec.message());
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
    os << text;
    if (!os) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
  };
  write(dir / (res.study + ".csv"), to_csv(res));
  write(dir / (res.study + ".manifest.json"), res.manifest.dump(2) + "\n");
}

}  // namespace chebmoll
